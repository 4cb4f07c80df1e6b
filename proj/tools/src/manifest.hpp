#pragma once

#include <string>
#include <vector>

#include "steklov/optimize.hpp"

namespace steklov_cli {

// Everything needed to audit or replay an optimization run: config echo,
// seed shape, per-step history, final shape, and diagnostics. JSON on disk,
// format "steklov-run v1".
struct RunManifest {
    steklov::OptimizerConfig config;
    int target_index = 1;
    steklov::ConformalShape seed_shape;
    steklov::ConformalShape final_shape;
    std::vector<steklov::HistoryEntry> history;
    bool halted = false;
    std::string halt_reason;
    long steps = 0;
    double elapsed_t = 0.0;
    double wall_seconds = 0.0;
    double crowding = 0.0;
    double min_boundary_derivative = 0.0;
    double max_leakage = 0.0;
};

RunManifest manifest_from_state(const steklov::OptimizationState& state,
                                const steklov::ConformalShape& seed, double wall_seconds);

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

} // namespace steklov_cli
