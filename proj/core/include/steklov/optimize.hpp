#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "steklov/solver.hpp"

namespace steklov {

struct OptimizerConfig {
    double h0 = 0.1;                  // initial Euler step
    double period = 100.0;            // halve the step after each elapsed period
    int periods = 5;
    int grid_points = 256;            // N; coefficient truncation is N/2
    int filter_order = 25;
    double filter_strength = 36.0;
    double coefficient_floor = 1e-14; // coefficients below this flush to zero
    int smoothing_span = 5;           // span <= 1 disables curvature smoothing
    bool gauge_fixing = true;         // recenter a_0 = 0 and rotate each step

    enum class SymmetricSolve { automatic, on, off };
    SymmetricSolve symmetric_solve = SymmetricSolve::automatic;

    // Reject a trial step whose objective falls more than ascent_tolerance,
    // halving h for that step (same retry loop that guards degeneration).
    bool objective_step_control = true;

    // Robust trust region on the ascent field: |R| is capped at
    // velocity_clip times its grid median. <= 0 disables.
    double velocity_clip = 0.0;

    // Mode-preconditioned ascent: the coefficient velocity is damped by
    // 1/(1 + (k/cutoff)^2). Stationary shapes are unchanged, but the
    // stiffness of the explicit Euler flow drops from O(N^2) to O(cutoff^2),
    // so the step schedule stays near its nominal size. <= 0 disables.
    int precondition_cutoff = 2;

    // Replace an immersed map (zeros of f_w inside the disk) by its
    // reflected, embedded equivalent: at the start, and again whenever
    // min|f_w| falls below transit_guard times the mean of |f_w| (zeros
    // drifting back towards the boundary). Eigenvalues are unchanged by the
    // reflection; only the enclosed area jumps.
    bool regularize_immersed = true;
    double transit_guard = 0.02;

    // Eigenvalues within cluster_gap (relative) of the target are treated as
    // one multiplet: step acceptance tracks the multiplet mean, which stays
    // smooth while the sorted members swap along a degenerate ridge.
    double cluster_gap = 0.02;

    int history_spectrum_count = 12;
    double ascent_tolerance = 1e-6;   // allowed per-step decrease of the objective
    int max_decrease_run = 50;        // consecutive decreasing steps before aborting
    int max_step_retries = 16;        // per-step h halvings until a trial is accepted

    int truncation() const { return grid_points / 2; }
};

struct HistoryEntry {
    double t;
    double h;
    double lambda_target;      // raw lambda_k
    double lambda_target_area; // lambda_k sqrt|Omega|
    std::vector<double> spectrum;
    double negative_leakage;
    double min_boundary_derivative;
};

namespace detail_opt {
struct StepWorkspace;
}

struct OptimizationState {
    ConformalShape shape;
    int target_index = 1;
    OptimizerConfig config;
    double t = 0.0;
    double h = 0.1;
    long steps = 0;
    std::vector<HistoryEntry> history;
    int decrease_run = 0;
    double last_objective = 0.0; // acceptance metric of the previous step
    bool halted = false;
    std::string halt_reason;
    std::shared_ptr<detail_opt::StepWorkspace> workspace; // solver cache between steps

    double current_objective() const {
        return history.empty() ? 0.0 : history.back().lambda_target_area;
    }
};

// Ascent velocity R(f, Psi~) sampled on the physical grid:
// R = (1/|f_w|) (|Psi_w|^2/|f_w|^2 - 2 lambda^2 u^2 - lambda kappa u^2
//                + lambda/(2|Omega|)),   u = Re Psi~.
// Psi~ must carry the unit boundary normalization. Curvature is smoothed with
// a centered periodic moving average when smoothing_span > 1.
std::vector<double> velocity_rhs(const ConformalShape& shape, const FourierSeries& psi_tilde,
                                 double lambda, int grid_points, int smoothing_span = 0);

struct CoefficientVelocity {
    FourierSeries r;         // a_k'(t), analytic, truncated to N/2
    double negative_leakage; // max |r_l|, l < 0, before truncation
};

// Coefficients of w f_w (Re{R} + i H[R]); negative modes vanish structurally
// and are reported as the leakage diagnostic.
CoefficientVelocity coefficient_velocity(const ConformalShape& shape,
                                         const std::vector<double>& rhs);

// Predicted d/dt of lambda_k sqrt|Omega| along the computed velocity:
// sqrt|Omega| * integral of (|f_w| R)^2 |f_w| d theta.
double ascent_rate(const ConformalShape& shape, const std::vector<double>& rhs);

// Translate a_0 to zero and rotate so a_1 (or the dominant coefficient) is
// real positive; when fold > 0 a second phase also aligns the next
// symmetry-generating coefficient. Reported optimal coefficients are
// comparable across runs in this gauge.
ConformalShape canonical_gauge(const ConformalShape& shape, int fold = 0);

// Reflect every zero of f_w strictly inside the disk to its inverse point
// outside. |f_w| on |w| = 1 is unchanged, so the boundary eigenproblem and
// all eigenvalues are preserved exactly; the immersed curve (extra winding)
// becomes an embedded one. Identity for maps that are already locally
// univalent.
ConformalShape expel_interior_critical_points(const ConformalShape& shape);

OptimizationState make_state(const ConformalShape& initial, int target_index,
                             const OptimizerConfig& config);

// One forward Euler step: solve, normalize, velocity, update, filter, gauge.
// Returns false when the run halts (degenerate shape after retries,
// eigensolver failure, or sustained objective decrease); the last good shape
// is preserved in the state.
bool step(OptimizationState& state);

using StepObserver = std::function<void(const OptimizationState&)>;

// Run the full schedule: steps of size h0 / 2^p during period p, up to
// periods * period time units, then append the terminal spectrum snapshot
// and apply the canonical gauge.
OptimizationState optimize(const ConformalShape& initial, int target_index,
                           const OptimizerConfig& config, const StepObserver& observer = {});

} // namespace steklov
