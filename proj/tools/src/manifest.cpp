#include "manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "steklov/conformal.hpp"

namespace steklov_cli {

using nlohmann::json;
using steklov::ConformalShape;
using steklov::cplx;
using steklov::OptimizerConfig;

namespace {

json shape_to_json(const ConformalShape& shape) {
    json coeffs = json::array();
    for (int k = 0; k <= shape.truncation(); ++k) {
        const cplx a = shape.coeff(k);
        if (a == cplx{0.0, 0.0}) continue;
        coeffs.push_back({k, a.real(), a.imag()});
    }
    return json{{"truncation", shape.truncation()}, {"coefficients", coeffs}};
}

ConformalShape shape_from_json(const json& j) {
    const int truncation = j.at("truncation").get<int>();
    std::vector<cplx> coeffs(static_cast<std::size_t>(truncation) + 1, cplx{0.0, 0.0});
    for (const auto& row : j.at("coefficients")) {
        const int k = row.at(0).get<int>();
        if (k < 0 || k > truncation)
            throw steklov::input_error("manifest: coefficient index out of range");
        coeffs[static_cast<std::size_t>(k)] = {row.at(1).get<double>(),
                                               row.at(2).get<double>()};
    }
    return ConformalShape(std::move(coeffs));
}

std::string symmetric_to_string(OptimizerConfig::SymmetricSolve s) {
    switch (s) {
        case OptimizerConfig::SymmetricSolve::automatic: return "auto";
        case OptimizerConfig::SymmetricSolve::on: return "on";
        case OptimizerConfig::SymmetricSolve::off: return "off";
    }
    return "auto";
}

OptimizerConfig::SymmetricSolve symmetric_from_string(const std::string& s) {
    if (s == "on") return OptimizerConfig::SymmetricSolve::on;
    if (s == "off") return OptimizerConfig::SymmetricSolve::off;
    if (s == "auto") return OptimizerConfig::SymmetricSolve::automatic;
    throw steklov::input_error("manifest: bad symmetric_solve value '" + s + "'");
}

} // namespace

RunManifest manifest_from_state(const steklov::OptimizationState& state,
                                const ConformalShape& seed, double wall_seconds) {
    RunManifest m;
    m.config = state.config;
    m.target_index = state.target_index;
    m.seed_shape = seed;
    m.final_shape = state.shape;
    m.history = state.history;
    m.halted = state.halted;
    m.halt_reason = state.halt_reason;
    m.steps = state.steps;
    m.elapsed_t = state.t;
    m.wall_seconds = wall_seconds;
    m.crowding = steklov::crowding_diagnostic(state.shape);
    m.min_boundary_derivative = state.shape.min_boundary_derivative();
    for (const auto& entry : state.history)
        m.max_leakage = std::max(m.max_leakage, entry.negative_leakage);
    return m;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    json config{{"h0", m.config.h0},
                {"period", m.config.period},
                {"periods", m.config.periods},
                {"grid_points", m.config.grid_points},
                {"filter_order", m.config.filter_order},
                {"filter_strength", m.config.filter_strength},
                {"coefficient_floor", m.config.coefficient_floor},
                {"smoothing_span", m.config.smoothing_span},
                {"gauge_fixing", m.config.gauge_fixing},
                {"symmetric_solve", symmetric_to_string(m.config.symmetric_solve)},
                {"objective_step_control", m.config.objective_step_control},
                {"velocity_clip", m.config.velocity_clip},
                {"precondition_cutoff", m.config.precondition_cutoff},
                {"regularize_immersed", m.config.regularize_immersed},
                {"transit_guard", m.config.transit_guard},
                {"history_spectrum_count", m.config.history_spectrum_count},
                {"ascent_tolerance", m.config.ascent_tolerance},
                {"max_decrease_run", m.config.max_decrease_run},
                {"max_step_retries", m.config.max_step_retries}};

    json history = json::array();
    for (const auto& e : m.history) {
        json row{{"t", e.t},
                 {"h", e.h},
                 {"lambda", e.lambda_target},
                 {"lambda_area", e.lambda_target_area},
                 {"leakage", e.negative_leakage},
                 {"min_fw", e.min_boundary_derivative},
                 {"spectrum", e.spectrum}};
        history.push_back(std::move(row));
    }

    json doc{{"format", "steklov-run v1"},
             {"target_index", m.target_index},
             {"config", std::move(config)},
             {"seed_shape", shape_to_json(m.seed_shape)},
             {"final_shape", shape_to_json(m.final_shape)},
             {"history", std::move(history)},
             {"diagnostics",
              {{"halted", m.halted},
               {"halt_reason", m.halt_reason},
               {"steps", m.steps},
               {"elapsed_t", m.elapsed_t},
               {"wall_seconds", m.wall_seconds},
               {"crowding", m.crowding},
               {"min_boundary_derivative", m.min_boundary_derivative},
               {"max_leakage", m.max_leakage}}}};

    std::ofstream out(path);
    if (!out) throw steklov::input_error("cannot open manifest for writing: " + path);
    out << doc.dump(1) << "\n";
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw steklov::input_error("cannot open manifest: " + path);
    json doc = json::parse(in, nullptr, true, true);
    if (doc.value("format", "") != "steklov-run v1")
        throw steklov::input_error("manifest: unknown format");

    RunManifest m;
    const json& c = doc.at("config");
    m.config.h0 = c.at("h0").get<double>();
    m.config.period = c.at("period").get<double>();
    m.config.periods = c.at("periods").get<int>();
    m.config.grid_points = c.at("grid_points").get<int>();
    m.config.filter_order = c.at("filter_order").get<int>();
    m.config.filter_strength = c.at("filter_strength").get<double>();
    m.config.coefficient_floor = c.at("coefficient_floor").get<double>();
    m.config.smoothing_span = c.at("smoothing_span").get<int>();
    m.config.gauge_fixing = c.at("gauge_fixing").get<bool>();
    m.config.symmetric_solve =
        symmetric_from_string(c.at("symmetric_solve").get<std::string>());
    m.config.objective_step_control = c.at("objective_step_control").get<bool>();
    m.config.velocity_clip = c.at("velocity_clip").get<double>();
    m.config.precondition_cutoff = c.at("precondition_cutoff").get<int>();
    m.config.regularize_immersed = c.at("regularize_immersed").get<bool>();
    m.config.transit_guard = c.at("transit_guard").get<double>();
    m.config.history_spectrum_count = c.at("history_spectrum_count").get<int>();
    m.config.ascent_tolerance = c.at("ascent_tolerance").get<double>();
    m.config.max_decrease_run = c.at("max_decrease_run").get<int>();
    m.config.max_step_retries = c.at("max_step_retries").get<int>();

    m.target_index = doc.at("target_index").get<int>();
    m.seed_shape = shape_from_json(doc.at("seed_shape"));
    m.final_shape = shape_from_json(doc.at("final_shape"));

    const json& d = doc.at("diagnostics");
    m.halted = d.at("halted").get<bool>();
    m.halt_reason = d.at("halt_reason").get<std::string>();
    m.steps = d.at("steps").get<long>();
    m.elapsed_t = d.at("elapsed_t").get<double>();
    m.wall_seconds = d.at("wall_seconds").get<double>();
    m.crowding = d.at("crowding").get<double>();
    m.min_boundary_derivative = d.at("min_boundary_derivative").get<double>();
    m.max_leakage = d.at("max_leakage").get<double>();

    for (const auto& row : doc.at("history")) {
        steklov::HistoryEntry e;
        e.t = row.at("t").get<double>();
        e.h = row.at("h").get<double>();
        e.lambda_target = row.at("lambda").get<double>();
        e.lambda_target_area = row.at("lambda_area").get<double>();
        e.negative_leakage = row.at("leakage").get<double>();
        e.min_boundary_derivative = row.at("min_fw").get<double>();
        e.spectrum = row.at("spectrum").get<std::vector<double>>();
        m.history.push_back(std::move(e));
    }
    return m;
}

} // namespace steklov_cli
