#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "steklov/optimize.hpp"
#include "steklov/presets.hpp"
#include "steklov/reference.hpp"
#include "steklov/shape_file.hpp"
#include "steklov/solver.hpp"

namespace steklov_cli {

using namespace steklov;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Rows of named values, emitted as CSV or JSON with fixed ordering and
// 17-digit doubles so identical configs give byte-identical output.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(const std::vector<double>& values) { rows_.push_back(values); }

    void emit(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            json doc = json::array();
            for (const auto& row : rows_) {
                json obj;
                for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = row[i];
                doc.push_back(std::move(obj));
            }
            out << doc.dump(1) << "\n";
            return;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out << (i ? "," : "") << columns_[i];
        out << "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << fmt(row[i]);
            out << "\n";
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

void write_output(const Table& table, const std::string& out_path,
                  const std::string& format) {
    if (out_path.empty()) {
        table.emit(std::cout, format);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot open output file: " + out_path);
    table.emit(out, format);
}

ConformalShape load_shape(const std::string& file, const std::string& preset,
                          int cassini_truncation) {
    if (!preset.empty()) {
        auto shape = preset_by_name(preset, cassini_truncation);
        if (!shape) throw input_error("unknown preset '" + preset + "'");
        return *shape;
    }
    if (file.empty()) throw input_error("provide a shape file or --preset");
    return read_shape_file(file);
}

Normalization parse_norm(const std::string& name) {
    if (name == "area") return Normalization::area;
    if (name == "perimeter") return Normalization::perimeter;
    if (name == "none") return Normalization::none;
    throw input_error("unknown normalization '" + name + "'");
}

SteklovSpectrum solve_any(const ConformalShape& shape, int n2) {
    const double scale = std::max(1.0, shape.series().max_abs_coeff());
    if (shape.has_real_coefficients(1e-12 * scale))
        return solve_spectrum_symmetric(shape, n2);
    return solve_spectrum(shape, n2);
}

void write_curve_csv(const std::string& path, const ConformalShape& shape, int samples) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open output file: " + path);
    out << "theta,x,y\n";
    const auto curve = boundary_curve(shape, samples);
    for (int j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / samples;
        out << fmt(theta) << ',' << fmt(curve[j].real()) << ',' << fmt(curve[j].imag())
            << "\n";
    }
}

// Minimal standalone SVG: one closed polyline, no external dependencies.
void write_curve_svg(const std::string& path, const ConformalShape& shape, int samples) {
    const auto curve = boundary_curve(shape, samples);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const cplx& z : curve) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin);
    std::ofstream out(path);
    if (!out) throw input_error("cannot open output file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << fmt(xmin - pad) << ' ' << fmt(-ymax - pad) << ' '
        << fmt(xmax - xmin + 2 * pad) << ' ' << fmt(ymax - ymin + 2 * pad) << "\">\n";
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\""
        << fmt(0.01 * (xmax - xmin)) << "\" d=\"";
    for (std::size_t j = 0; j < curve.size(); ++j)
        out << (j ? 'L' : 'M') << fmt(curve[j].real()) << ' ' << fmt(-curve[j].imag());
    out << "Z\"/>\n</svg>\n";
}

std::vector<int> parse_exponent_list(const std::string& text) {
    std::vector<int> out;
    const std::size_t dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (lo < 2 || hi < lo) throw input_error("bad exponent range '" + text + "'");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw input_error("empty exponent list");
    return out;
}

struct EpsRange {
    double begin = 0.0, end = 0.0, step = 0.0;
};

EpsRange parse_eps_range(const std::string& text) {
    EpsRange r;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &r.begin, &r.end, &r.step) != 3)
        throw input_error("bad --eps-range, expected begin:end:step");
    if (!(r.begin > 0.0 && r.end < 1.0 && r.begin <= r.end && r.step > 0.0))
        throw input_error("--eps-range must satisfy 0 < begin <= end < 1, step > 0");
    return r;
}

void apply_config_file(const std::string& path, OptimizerConfig& config) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string key, value;
        if (!(row >> key >> value)) continue;
        if (key == "h0") config.h0 = std::stod(value);
        else if (key == "period") config.period = std::stod(value);
        else if (key == "periods") config.periods = std::stoi(value);
        else if (key == "grid_points") config.grid_points = std::stoi(value);
        else if (key == "filter_order") config.filter_order = std::stoi(value);
        else if (key == "filter_strength") config.filter_strength = std::stod(value);
        else if (key == "coefficient_floor") config.coefficient_floor = std::stod(value);
        else if (key == "smoothing_span") config.smoothing_span = std::stoi(value);
        else if (key == "gauge_fixing") config.gauge_fixing = value == "true" || value == "1";
        else if (key == "objective_step_control")
            config.objective_step_control = value == "true" || value == "1";
        else if (key == "velocity_clip") config.velocity_clip = std::stod(value);
        else if (key == "precondition_cutoff") config.precondition_cutoff = std::stoi(value);
        else if (key == "regularize_immersed")
            config.regularize_immersed = value == "true" || value == "1";
        else if (key == "transit_guard") config.transit_guard = std::stod(value);
        else if (key == "snapshot_interval") continue; // CLI-level knob, accepted for echo
        else if (key == "symmetric_solve") {
            if (value == "on") config.symmetric_solve = OptimizerConfig::SymmetricSolve::on;
            else if (value == "off") config.symmetric_solve = OptimizerConfig::SymmetricSolve::off;
            else config.symmetric_solve = OptimizerConfig::SymmetricSolve::automatic;
        } else
            throw input_error("config file: unknown key '" + key + "'");
    }
}

int cmd_solve(const std::string& shape_file, const std::string& preset, int grid,
              const std::string& norm_name, int count, const std::string& out,
              const std::string& format) {
    if (!is_power_of_two(grid) || grid < 4)
        throw input_error("-N must be a power of two >= 4");
    const int n2 = grid / 2;
    const ConformalShape shape = load_shape(shape_file, preset, n2).truncated(n2);
    const SteklovSpectrum spec = solve_any(shape, n2);
    const Normalization norm = parse_norm(norm_name);

    Table table({"index", "lambda", "normalized"});
    for (int k = 0; k < std::min(count, spec.size()); ++k)
        table.add_row({static_cast<double>(k), spec.eigenvalues[k],
                       normalized_eigenvalue(spec, shape, norm, k)});
    write_output(table, out, format);
    return exit_ok;
}

int cmd_convergence(const std::string& shape_file, const std::string& preset,
                    const std::string& n_list, int reference, int count,
                    const std::string& norm_name, const std::string& out,
                    const std::string& format) {
    const std::vector<int> exponents = parse_exponent_list(n_list);
    for (int n : exponents)
        if (n > reference) throw input_error("--reference must be >= every listed exponent");
    const Normalization norm = parse_norm(norm_name);

    auto column = [&](int exponent) {
        const int n2 = (1 << exponent) / 2;
        const ConformalShape shape = load_shape(shape_file, preset, n2).truncated(n2);
        const SteklovSpectrum spec = solve_any(shape, n2);
        std::vector<double> values;
        for (int k = 0; k < count; ++k)
            values.push_back(normalized_eigenvalue(spec, shape, norm, k));
        return values;
    };

    const std::vector<double> ref = column(reference);
    Table table({"N", "k", "lambda", "error"});
    std::vector<std::vector<double>> errors;
    for (int exponent : exponents) {
        const std::vector<double> vals = column(exponent);
        std::vector<double> row;
        for (int k = 0; k < count; ++k) {
            const double err = std::abs(vals[k] - ref[k]);
            table.add_row({static_cast<double>(1 << exponent), static_cast<double>(k),
                           vals[k], err});
            row.push_back(err);
        }
        errors.push_back(std::move(row));
    }
    write_output(table, out, format);

    if (!out.empty()) {
        // gnuplot-style companion: one row per N, one error column per mode.
        std::ofstream dat(out + ".dat");
        if (!dat) throw input_error("cannot open output file: " + out + ".dat");
        dat << "# N";
        for (int k = 0; k < count; ++k) dat << " err_k" << k;
        dat << "\n";
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            dat << (1 << exponents[i]);
            for (double e : errors[i]) dat << ' ' << fmt(e);
            dat << "\n";
        }
    }
    return exit_ok;
}

int cmd_annulus(const std::string& norm_name, const std::string& range_text, double eps,
                int count, const std::string& out, const std::string& format) {
    if (!range_text.empty()) {
        const EpsRange range = parse_eps_range(range_text);
        std::vector<double> grid;
        for (double e = range.begin; e <= range.end + 1e-15; e += range.step)
            grid.push_back(e);
        const auto scan = annulus_normalized_scan(parse_norm(norm_name), grid);
        Table table({"epsilon", "lambda1", "normalized"});
        for (const auto& p : scan) table.add_row({p.epsilon, p.lambda1, p.normalized});
        write_output(table, out, format);
        return exit_ok;
    }
    if (!(eps > 0.0 && eps < 1.0))
        throw input_error("provide --eps in (0,1) or --eps-range");
    const auto values = annulus_eigenvalues(AnnulusSpec{eps}, std::max(1, count));
    Table table({"index", "lambda"});
    for (int k = 0; k < std::min<int>(count, static_cast<int>(values.size())); ++k)
        table.add_row({static_cast<double>(k), values[static_cast<std::size_t>(k)]});
    write_output(table, out, format);
    return exit_ok;
}

int cmd_eigenfunction(const std::string& shape_file, const std::string& preset, int grid,
                      int index, int samples, const std::string& out,
                      const std::string& format) {
    if (!is_power_of_two(grid) || grid < 4)
        throw input_error("-N must be a power of two >= 4");
    const int n2 = grid / 2;
    const ConformalShape shape = load_shape(shape_file, preset, n2).truncated(n2);
    const SteklovSpectrum spec = solve_any(shape, n2);
    const FourierSeries psi = normalized_eigenfunction(spec, index, shape);

    Table table({"theta", "x", "y", "u"});
    const auto curve = boundary_curve(shape, samples);
    const GridSamples trace = detail::sample_on_grid(psi, samples);
    for (int j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / samples;
        table.add_row({theta, curve[j].real(), curve[j].imag(), trace.values[j].real()});
    }
    write_output(table, out, format);
    return exit_ok;
}

int cmd_optimize(const std::string& shape_file, const std::string& preset, int target,
                 OptimizerConfig config, int snapshot_interval,
                 const std::string& prefix, const std::string& from_manifest) {
    ConformalShape seed = preset_disk();
    if (!from_manifest.empty()) {
        RunManifest previous = read_manifest(from_manifest);
        config = previous.config;
        target = previous.target_index;
        seed = previous.seed_shape;
    } else {
        seed = load_shape(shape_file, preset, config.truncation());
    }

    std::vector<long> snapshot_steps;
    const auto started = std::chrono::steady_clock::now();
    StepObserver observer = [&](const OptimizationState& state) {
        if (snapshot_interval > 0 && state.steps % snapshot_interval == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "%s.snap%06ld.csv", prefix.c_str(),
                          state.steps);
            write_curve_csv(name, state.shape, 512);
            snapshot_steps.push_back(state.steps);
        }
    };

    OptimizationState state = optimize(seed, target, config, observer);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    RunManifest manifest = manifest_from_state(state, seed, wall);
    write_manifest(prefix + ".manifest.json", manifest);
    write_shape_file(prefix + ".final.shape", state.shape);
    write_curve_csv(prefix + ".final.csv", state.shape, 512);
    write_curve_svg(prefix + ".final.svg", state.shape, 512);
    {
        std::ofstream hist(prefix + ".history.csv");
        hist << "t,h,lambda,lambda_area,leakage,min_fw\n";
        for (const auto& e : state.history)
            hist << fmt(e.t) << ',' << fmt(e.h) << ',' << fmt(e.lambda_target) << ','
                 << fmt(e.lambda_target_area) << ',' << fmt(e.negative_leakage) << ','
                 << fmt(e.min_boundary_derivative) << "\n";
    }

    std::cout << "steps " << state.steps << ", t " << fmt(state.t) << ", lambda_"
              << target << "^A " << fmt(state.history.empty()
                                            ? 0.0
                                            : state.history.back().lambda_target_area)
              << ", wall " << fmt(wall) << " s\n";
    if (state.halted) {
        std::cerr << "optimizer halted: " << state.halt_reason << "\n";
        return exit_optimizer_halt;
    }
    return exit_ok;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Steklov eigenvalues of conformally mapped planar domains"};
    app.require_subcommand(1);

    std::string shape_file, preset, out, format = "csv", norm = "area";
    int grid = 256, count = 12;

    auto add_shape_options = [&](CLI::App* cmd) {
        cmd->add_option("shape", shape_file, "shape file (steklov-shape v1)");
        cmd->add_option("--preset", preset,
                        "disk, two-fold, two-fold-fat, five-fold, cassini, cassini(a)");
        cmd->add_option("--out", out, "output file (default: stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* solve = app.add_subcommand("solve", "eigenvalues of one shape");
    add_shape_options(solve);
    solve->add_option("-N,--grid", grid, "grid points (power of two)");
    solve->add_option("--norm", norm, "area, perimeter, or none");
    solve->add_option("--count", count, "number of eigenvalues");

    auto* conv = app.add_subcommand("convergence", "eigenvalue errors vs resolution");
    add_shape_options(conv);
    std::string n_list = "4..10";
    int reference = 12;
    conv->add_option("--n-list", n_list, "exponent list, e.g. 4..11 or 4,6,8");
    conv->add_option("--reference", reference, "reference exponent");
    conv->add_option("--norm", norm, "area, perimeter, or none");
    conv->add_option("--count", count, "number of eigenvalues");

    auto* annulus = app.add_subcommand("annulus", "closed-form annulus eigenvalues");
    std::string eps_range;
    double eps = 0.0;
    annulus->add_option("--norm", norm, "area, perimeter, or none");
    annulus->add_option("--eps-range", eps_range, "scan range begin:end:step");
    annulus->add_option("--eps", eps, "single inner radius");
    annulus->add_option("--count", count, "number of eigenvalues (single eps)");
    annulus->add_option("--out", out, "output file (default: stdout)");
    annulus->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* eig = app.add_subcommand("eigenfunction", "boundary trace of one eigenfunction");
    add_shape_options(eig);
    int index = 1, samples = 256;
    eig->add_option("-N,--grid", grid, "grid points (power of two)");
    eig->add_option("-k,--index", index, "eigenvalue index");
    eig->add_option("--samples", samples, "boundary sample count");

    auto* opt = app.add_subcommand("optimize", "gradient ascent on lambda_k sqrt|Omega|");
    add_shape_options(opt);
    OptimizerConfig config;
    int target = 2, snapshot_interval = 100;
    std::string prefix = "run", config_file, from_manifest, symmetric = "auto";
    opt->add_option("-k,--index", target, "eigenvalue index to maximize");
    auto* grid_opt = opt->add_option("-N,--grid", config.grid_points, "grid points");
    auto* h0_opt = opt->add_option("--h0", config.h0, "initial step");
    auto* period_opt = opt->add_option("--period", config.period, "step-halving period");
    auto* periods_opt = opt->add_option("--periods", config.periods, "number of periods");
    auto* forder_opt = opt->add_option("--filter-order", config.filter_order, "");
    auto* fstr_opt = opt->add_option("--filter-strength", config.filter_strength, "");
    auto* span_opt = opt->add_option("--span", config.smoothing_span,
                                     "curvature smoothing span (0 disables)");
    auto* floor_opt = opt->add_option("--floor", config.coefficient_floor, "");
    auto* clip_opt = opt->add_option("--clip", config.velocity_clip, "");
    auto* pc_opt = opt->add_option("--precondition", config.precondition_cutoff,
                                   "velocity preconditioner cutoff mode (0 disables)");
    auto* sym_opt = opt->add_option("--symmetric", symmetric, "auto, on, or off");
    auto* gauge_flag = opt->add_flag("--no-gauge", "skip recentering/rotation");
    auto* control_flag = opt->add_flag("--no-step-control", "disable objective acceptance");
    auto* reg_flag = opt->add_flag("--no-regularize", "keep immersed maps as given");
    opt->add_option("--snapshot-interval", snapshot_interval,
                    "steps between boundary snapshots (0 disables)");
    opt->add_option("--out-prefix", prefix, "prefix for manifest/shape/plot files");
    opt->add_option("--config", config_file, "config file (key value lines)");
    opt->add_option("--from-manifest", from_manifest, "replay a recorded run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (solve->parsed())
            return cmd_solve(shape_file, preset, grid, norm, count, out, format);
        if (conv->parsed())
            return cmd_convergence(shape_file, preset, n_list, reference, count, norm, out,
                                   format);
        if (annulus->parsed())
            return cmd_annulus(norm, eps_range, eps, count, out, format);
        if (eig->parsed())
            return cmd_eigenfunction(shape_file, preset, grid, index, samples, out, format);
        if (opt->parsed()) {
            // precedence: flags > config file > defaults
            OptimizerConfig file_config;
            if (!config_file.empty()) {
                apply_config_file(config_file, file_config);
                if (!grid_opt->count()) config.grid_points = file_config.grid_points;
                if (!h0_opt->count()) config.h0 = file_config.h0;
                if (!period_opt->count()) config.period = file_config.period;
                if (!periods_opt->count()) config.periods = file_config.periods;
                if (!forder_opt->count()) config.filter_order = file_config.filter_order;
                if (!fstr_opt->count())
                    config.filter_strength = file_config.filter_strength;
                if (!span_opt->count()) config.smoothing_span = file_config.smoothing_span;
                if (!floor_opt->count())
                    config.coefficient_floor = file_config.coefficient_floor;
                if (!clip_opt->count()) config.velocity_clip = file_config.velocity_clip;
                if (!pc_opt->count())
                    config.precondition_cutoff = file_config.precondition_cutoff;
                if (!sym_opt->count()) config.symmetric_solve = file_config.symmetric_solve;
                if (!gauge_flag->count()) config.gauge_fixing = file_config.gauge_fixing;
                if (!control_flag->count())
                    config.objective_step_control = file_config.objective_step_control;
                if (!reg_flag->count())
                    config.regularize_immersed = file_config.regularize_immersed;
            }
            if (sym_opt->count()) {
                if (symmetric == "on")
                    config.symmetric_solve = OptimizerConfig::SymmetricSolve::on;
                else if (symmetric == "off")
                    config.symmetric_solve = OptimizerConfig::SymmetricSolve::off;
                else
                    config.symmetric_solve = OptimizerConfig::SymmetricSolve::automatic;
            }
            if (gauge_flag->count()) config.gauge_fixing = false;
            if (control_flag->count()) config.objective_step_control = false;
            if (reg_flag->count()) config.regularize_immersed = false;
            return cmd_optimize(shape_file, preset, target, config, snapshot_interval,
                                prefix, from_manifest);
        }
        return exit_input_error;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}

} // namespace steklov_cli
