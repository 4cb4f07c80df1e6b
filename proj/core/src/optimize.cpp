#include "steklov/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace steklov {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool nearly_real(const ConformalShape& shape) {
    const double scale = std::max(1.0, shape.series().max_abs_coeff());
    return shape.has_real_coefficients(1e-12 * scale);
}

ConformalShape project_real(const ConformalShape& shape) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(shape.truncation()) + 1);
    for (int k = 0; k <= shape.truncation(); ++k)
        coeffs[static_cast<std::size_t>(k)] = cplx{shape.coeff(k).real(), 0.0};
    return ConformalShape(std::move(coeffs));
}

int dominant_index(const ConformalShape& shape) {
    int best = 1;
    double best_abs = -1.0;
    for (int k = 1; k <= shape.truncation(); ++k) {
        const double a = std::abs(shape.coeff(k));
        if (a > best_abs) {
            best_abs = a;
            best = k;
        }
    }
    return best;
}

} // namespace

namespace detail_opt {

// Per-state solver cache: the accepted trial's spectrum seeds the next step,
// so each Euler attempt costs one eigensolve. h_ratio remembers how far the
// retry ladder had to shrink the nominal step, seeding the next attempt.
struct StepWorkspace {
    bool valid = false;
    ConformalShape shape;
    SteklovSpectrum spectrum;
    double h_ratio = 1.0;
    int preferred_variant = 0;
};

ConformalShape solver_view(const ConformalShape& shape, const OptimizerConfig& config) {
    if (config.symmetric_solve != OptimizerConfig::SymmetricSolve::off && nearly_real(shape))
        return project_real(shape);
    return shape;
}

SteklovSpectrum solve_view(const ConformalShape& view, const OptimizerConfig& config) {
    const int n2 = config.truncation();
    switch (config.symmetric_solve) {
        case OptimizerConfig::SymmetricSolve::on:
            return solve_spectrum_symmetric(view, n2);
        case OptimizerConfig::SymmetricSolve::off:
            return solve_spectrum(view, n2);
        case OptimizerConfig::SymmetricSolve::automatic:
            break;
    }
    if (view.has_real_coefficients(0.0)) return solve_spectrum_symmetric(view, n2);
    return solve_spectrum(view, n2);
}

} // namespace detail_opt

std::vector<double> velocity_rhs(const ConformalShape& shape, const FourierSeries& psi_tilde,
                                 double lambda, int grid_points, int smoothing_span) {
    shape.require_nondegenerate();
    const int m = grid_points;
    if (m < 4) throw input_error("velocity_rhs: grid too small");

    const GridSamples fw = detail::sample_on_grid(shape.map_derivative(), m);
    const GridSamples psi = detail::sample_on_grid(psi_tilde, m);
    const GridSamples psi_w = detail::sample_on_grid(derivative_wrt_omega(psi_tilde), m);

    std::vector<double> kappa = curvature(shape, m);
    if (smoothing_span > 1) kappa = moving_average(kappa, smoothing_span);

    const double domain_area = area(shape);
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const std::size_t u = static_cast<std::size_t>(j);
        const double speed = std::abs(fw.values[u]);
        const double grad_sq = std::norm(psi_w.values[u]) / (speed * speed);
        const double usq = psi.values[u].real() * psi.values[u].real();
        rhs[u] = (grad_sq - 2.0 * lambda * lambda * usq - lambda * kappa[u] * usq +
                  lambda / (2.0 * domain_area)) /
                 speed;
    }
    return rhs;
}

CoefficientVelocity coefficient_velocity(const ConformalShape& shape,
                                         const std::vector<double>& rhs) {
    const int m = static_cast<int>(rhs.size());
    const int n2 = m / 2;
    const FourierSeries completed = analytic_completion(rhs, n2 - 1);

    FourierSeries wfw(shape.truncation()); // w f_w = sum k a_k w^k
    for (int k = 1; k <= shape.truncation(); ++k)
        wfw.set_coeff(k, static_cast<double>(k) * shape.coeff(k));

    const FourierSeries full = product(wfw, completed);
    double leakage = 0.0;
    for (int l = -full.half_width(); l < 0; ++l)
        leakage = std::max(leakage, std::abs(full.coeff(l)));

    CoefficientVelocity out;
    out.negative_leakage = leakage;
    out.r = full.truncated(n2);
    for (int l = -n2; l < 0; ++l) out.r.set_coeff(l, cplx{0.0, 0.0});
    return out;
}

double ascent_rate(const ConformalShape& shape, const std::vector<double>& rhs) {
    const int m = static_cast<int>(rhs.size());
    const GridSamples fw = detail::sample_on_grid(shape.map_derivative(), m);
    double integral = 0.0;
    for (int j = 0; j < m; ++j) {
        const double speed = std::abs(fw.values[static_cast<std::size_t>(j)]);
        const double c = speed * rhs[static_cast<std::size_t>(j)];
        integral += c * c * speed;
    }
    integral *= two_pi / m;
    return std::sqrt(area(shape)) * integral;
}

ConformalShape expel_interior_critical_points(const ConformalShape& shape) {
    // Coefficients of f_w as a polynomial, trailing noise trimmed.
    const FourierSeries& fw = shape.map_derivative();
    std::vector<cplx> b;
    for (int k = 0; k <= shape.truncation() - 1; ++k) b.push_back(fw.coeff(k));
    double top = 0.0;
    for (const cplx& c : b) top = std::max(top, std::abs(c));
    if (top == 0.0) return shape;
    while (b.size() > 1 && std::abs(b.back()) < 1e-13 * top) b.pop_back();
    const int degree = static_cast<int>(b.size()) - 1;
    if (degree < 1) return shape;

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i)
        companion(i, degree - 1) = -b[static_cast<std::size_t>(i)] / b.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> roots(companion, false);
    if (roots.info() != Eigen::Success)
        throw numerical_error("expel_interior_critical_points: root solve failed");

    std::vector<cplx> inside;
    for (int i = 0; i < degree; ++i) {
        const cplx zeta = roots.eigenvalues()(i);
        if (std::abs(zeta) < 1.0 - 1e-12) inside.push_back(zeta);
    }
    if (inside.empty()) return shape;

    // Multiply by the Blaschke-type factors |zeta| (w - 1/conj(zeta))/(w - zeta),
    // which have unit modulus on |w| = 1: the boundary weight |f_w| is kept
    // bit-for-bit while each interior zero moves to its inverse point. The
    // result is again a polynomial of the same degree.
    const int m = std::max(default_grid_size(shape.truncation()),
                           next_power_of_two(4 * (degree + 1)));
    GridSamples samples = detail::sample_on_grid(fw, m);
    for (int j = 0; j < m; ++j) {
        const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
        cplx factor{1.0, 0.0};
        for (const cplx& zeta : inside)
            factor *= std::abs(zeta) * (w - 1.0 / std::conj(zeta)) / (w - zeta);
        samples.values[static_cast<std::size_t>(j)] *= factor;
    }
    const FourierSeries reflected = from_grid(samples, degree);

    std::vector<cplx> coeffs(static_cast<std::size_t>(shape.truncation()) + 1,
                             cplx{0.0, 0.0});
    for (int k = 0; k <= degree; ++k)
        coeffs[static_cast<std::size_t>(k) + 1] = reflected.coeff(k) / (k + 1.0);
    // Symmetric inputs give real coefficients back up to round-off.
    double imag_mass = 0.0, real_mass = 0.0;
    for (const cplx& c : coeffs) {
        imag_mass = std::max(imag_mass, std::abs(c.imag()));
        real_mass = std::max(real_mass, std::abs(c.real()));
    }
    if (shape.has_real_coefficients(1e-12 * std::max(1.0, real_mass)) &&
        imag_mass < 1e-10 * std::max(1.0, real_mass))
        for (cplx& c : coeffs) c = cplx{c.real(), 0.0};
    return ConformalShape(std::move(coeffs));
}

ConformalShape canonical_gauge(const ConformalShape& shape, int fold) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(shape.truncation()) + 1);
    for (int k = 0; k <= shape.truncation(); ++k)
        coeffs[static_cast<std::size_t>(k)] = shape.coeff(k);
    coeffs[0] = {0.0, 0.0};

    const int j = dominant_index(shape);
    const cplx lead = coeffs[static_cast<std::size_t>(j)];
    if (std::abs(lead) == 0.0) return ConformalShape(std::move(coeffs));

    double beta = 0.0;
    if (fold > 0 && j + fold <= shape.truncation()) {
        const cplx next = coeffs[static_cast<std::size_t>(j + fold)];
        if (std::abs(next) > 1e-12 * std::abs(lead))
            beta = (std::arg(lead) - std::arg(next)) / fold;
    }
    const double alpha = -std::arg(lead) - j * beta;
    if (alpha == 0.0 && beta == 0.0) return ConformalShape(std::move(coeffs));

    for (int k = 0; k <= shape.truncation(); ++k)
        coeffs[static_cast<std::size_t>(k)] *= std::polar(1.0, alpha + k * beta);
    return ConformalShape(std::move(coeffs));
}

OptimizationState make_state(const ConformalShape& initial, int target_index,
                             const OptimizerConfig& config) {
    if (target_index < 1) throw input_error("optimize: target index must be at least 1");
    if (config.grid_points < 8 || !is_power_of_two(config.grid_points))
        throw input_error("optimize: grid_points must be a power of two >= 8");
    if (target_index > config.truncation() / 2)
        throw input_error("optimize: target index beyond trusted mode count");
    initial.require_nondegenerate();

    OptimizationState state;
    state.shape = initial.truncated(config.truncation());
    if (config.regularize_immersed)
        state.shape = expel_interior_critical_points(state.shape);
    state.target_index = target_index;
    state.config = config;
    state.h = config.h0;
    state.workspace = std::make_shared<detail_opt::StepWorkspace>();
    return state;
}

namespace {

ConformalShape euler_trial(const ConformalShape& shape, const FourierSeries& r,
                           double h, const OptimizerConfig& config) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(config.truncation()) + 1);
    for (int k = 0; k <= config.truncation(); ++k)
        coeffs[static_cast<std::size_t>(k)] = shape.coeff(k) + h * r.coeff(k);

    FourierSeries updated =
        fourier_filter(FourierSeries::analytic(coeffs), config.filter_order,
                       config.filter_strength, config.coefficient_floor);
    ConformalShape candidate = ConformalShape::from_series(updated, 1e-30);
    if (!config.gauge_fixing) return candidate;

    std::vector<cplx> fixed(static_cast<std::size_t>(candidate.truncation()) + 1);
    for (int k = 0; k <= candidate.truncation(); ++k)
        fixed[static_cast<std::size_t>(k)] = candidate.coeff(k);
    fixed[0] = {0.0, 0.0};
    const int j = dominant_index(candidate);
    const cplx lead = fixed[static_cast<std::size_t>(j)];
    if (std::abs(lead) > 0.0 && lead.imag() != 0.0) {
        const cplx phase = std::polar(1.0, -std::arg(lead));
        for (cplx& c : fixed) c *= phase;
    }
    return ConformalShape(std::move(fixed));
}

// Mean of lambda_j sqrt|Omega| over the near-degenerate multiplet containing
// the target index; equals the plain objective away from degeneracies.
double acceptance_objective(const SteklovSpectrum& spec, int target, double sqrt_area,
                            double cluster_gap) {
    const double pivot = spec.eigenvalues[static_cast<std::size_t>(target)];
    const double band = cluster_gap * std::max(std::abs(pivot), 1e-12);
    int lo = target, hi = target;
    while (lo > 1 && pivot - spec.eigenvalues[static_cast<std::size_t>(lo - 1)] < band)
        --lo;
    while (hi + 1 < spec.size() &&
           spec.eigenvalues[static_cast<std::size_t>(hi + 1)] - pivot < band)
        ++hi;
    double mean = 0.0;
    for (int j = lo; j <= hi; ++j) mean += spec.eigenvalues[static_cast<std::size_t>(j)];
    return mean / (hi - lo + 1) * sqrt_area;
}

CoefficientVelocity build_velocity(const ConformalShape& shape, const FourierSeries& psi,
                                   double lambda, const OptimizerConfig& config,
                                   int smoothing_span, bool precondition) {
    std::vector<double> rhs =
        velocity_rhs(shape, psi, lambda, config.grid_points, smoothing_span);
    if (config.velocity_clip > 0.0) {
        std::vector<double> mags(rhs.size());
        for (std::size_t j = 0; j < rhs.size(); ++j) mags[j] = std::abs(rhs[j]);
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        const double cap =
            config.velocity_clip * std::max(mags[mags.size() / 2], 1e-300);
        for (double& v : rhs) v = std::clamp(v, -cap, cap);
    }
    CoefficientVelocity velocity = coefficient_velocity(shape, rhs);
    if (precondition && config.precondition_cutoff > 0) {
        const double cutoff = config.precondition_cutoff;
        for (int k = 1; k <= velocity.r.half_width(); ++k)
            velocity.r.set_coeff(k,
                                 velocity.r.coeff(k) / (1.0 + (k / cutoff) * (k / cutoff)));
    }
    return velocity;
}

} // namespace

bool step(OptimizationState& state) {
    if (state.halted) return false;
    const OptimizerConfig& config = state.config;
    if (!state.workspace) state.workspace = std::make_shared<detail_opt::StepWorkspace>();
    detail_opt::StepWorkspace& cache = *state.workspace;

    try {
        // Zeros of f_w drifting towards the boundary would concentrate the
        // curvature into spikes; reflecting them outside keeps the spectrum
        // and rescues the step.
        if (config.regularize_immersed) {
            double mean_speed = 0.0;
            const GridSamples fw =
                detail::sample_on_grid(state.shape.map_derivative(), 64);
            for (const cplx& v : fw.values) mean_speed += std::abs(v);
            mean_speed /= 64.0;
            if (state.shape.min_boundary_derivative() < config.transit_guard * mean_speed) {
                const ConformalShape fixed = expel_interior_critical_points(state.shape);
                if (fixed.min_boundary_derivative() >
                    state.shape.min_boundary_derivative()) {
                    state.shape = fixed;
                    cache.valid = false;
                }
            }
        }

        ConformalShape shape = cache.valid ? std::move(cache.shape)
                                           : detail_opt::solver_view(state.shape, config);
        SteklovSpectrum spec = cache.valid ? std::move(cache.spectrum)
                                           : detail_opt::solve_view(shape, config);
        cache.valid = false;

        const double lambda =
            spec.eigenvalues[static_cast<std::size_t>(state.target_index)];
        const double sqrt_area = std::sqrt(area(shape));
        const double objective = acceptance_objective(spec, state.target_index, sqrt_area,
                                                      config.cluster_gap);

        const FourierSeries psi = normalized_eigenfunction(spec, state.target_index, shape);

        // Candidate directions, fastest first: the smoothed preconditioned
        // field usually carries the largest stable step, but near crowded
        // states only the raw gradient is guaranteed to ascend.
        struct Variant {
            int span;
            bool precondition;
        };
        std::vector<Variant> variants;
        variants.push_back({config.smoothing_span, true});
        if (config.smoothing_span > 1) variants.push_back({0, true});
        if (config.precondition_cutoff > 0) variants.push_back({0, false});

        CoefficientVelocity velocity = build_velocity(
            shape, psi, lambda, config, variants[0].span, variants[0].precondition);
        if (velocity.negative_leakage > 1e-10)
            throw numerical_error("step: negative-mode leakage above 1e-10 (aliasing)");

        HistoryEntry entry;
        entry.t = state.t;
        entry.h = state.h;
        entry.lambda_target = lambda;
        entry.lambda_target_area = lambda * sqrt_area;
        const int count = std::min<int>(config.history_spectrum_count, spec.size());
        entry.spectrum.assign(spec.eigenvalues.begin(), spec.eigenvalues.begin() + count);
        entry.negative_leakage = velocity.negative_leakage;
        entry.min_boundary_derivative = shape.min_boundary_derivative();

        // The guard watches the same smoothed objective the acceptance uses.
        if (state.last_objective != 0.0) {
            const double drop = state.last_objective - objective;
            state.decrease_run = drop > config.ascent_tolerance ? state.decrease_run + 1 : 0;
            if (state.decrease_run >= config.max_decrease_run)
                throw numerical_error("step: sustained decrease of the objective");
        }
        state.last_objective = objective;

        // Euler update with step acceptance. The ladder starts from the
        // fraction of the nominal h that last succeeded and may climb back;
        // a trial that degenerates the map, breaks the solver, or drops the
        // objective beyond tolerance halves the fraction.
        auto ladder = [&](const CoefficientVelocity& vel, double baseline,
                          double seed_ratio) -> bool {
            double h_try = state.h * std::min(1.0, 2.0 * seed_ratio);
            for (int attempt = 0; attempt <= config.max_step_retries; ++attempt) {
                ConformalShape candidate = euler_trial(shape, vel.r, h_try, config);
                bool accepted = false;
                if (candidate.min_boundary_derivative() >
                    ConformalShape::degeneracy_threshold) {
                    if (!config.objective_step_control) {
                        state.shape = std::move(candidate);
                        accepted = true;
                    } else {
                        const ConformalShape view =
                            detail_opt::solver_view(candidate, config);
                        try {
                            SteklovSpectrum trial = detail_opt::solve_view(view, config);
                            const double trial_objective = acceptance_objective(
                                trial, state.target_index, std::sqrt(area(view)),
                                config.cluster_gap);
                            if (trial_objective >= baseline - config.ascent_tolerance) {
                                state.shape = std::move(candidate);
                                cache.valid = true;
                                cache.shape = view;
                                cache.spectrum = std::move(trial);
                                accepted = true;
                            }
                        } catch (const numerical_error&) {
                            // solver breakdown on the trial shape: rejected
                        }
                    }
                }
                if (accepted) {
                    cache.h_ratio = h_try / state.h;
                    state.t += h_try;
                    state.steps += 1;
                    state.history.push_back(std::move(entry));
                    return true;
                }
                h_try *= 0.5;
            }
            return false;
        };

        // The variant that accepted last time goes first; a periodic re-probe
        // returns to the fast path once the state smooths out.
        int start = std::min<int>(cache.preferred_variant,
                                  static_cast<int>(variants.size()) - 1);
        if (state.steps % 16 == 0) start = 0;

        bool baseline0_known = false;
        double baseline = objective;
        for (int v = start; v < static_cast<int>(variants.size()); ++v) {
            if (v != start)
                velocity = build_velocity(shape, psi, lambda, config, variants[v].span,
                                          variants[v].precondition);
            if (ladder(velocity, baseline, cache.h_ratio)) {
                cache.preferred_variant = v;
                return true;
            }
            if (!baseline0_known && config.objective_step_control) {
                // The filter applied by the update may itself cost more than
                // the tolerance; measure the h = 0 trial (filter and gauge
                // alone) and accept progress relative to it.
                baseline0_known = true;
                try {
                    const ConformalShape rest = detail_opt::solver_view(
                        euler_trial(shape, velocity.r, 0.0, config), config);
                    SteklovSpectrum trial = detail_opt::solve_view(rest, config);
                    const double rest_objective =
                        acceptance_objective(trial, state.target_index,
                                             std::sqrt(area(rest)), config.cluster_gap);
                    if (rest_objective < baseline) {
                        baseline = rest_objective;
                        if (ladder(velocity, baseline, cache.h_ratio)) {
                            cache.preferred_variant = v;
                            return true;
                        }
                    }
                } catch (const numerical_error&) {
                }
            }
        }
        throw degenerate_shape_error("step: no acceptable step after step-size retries");
    } catch (const std::exception& e) {
        state.halted = true;
        state.halt_reason = e.what();
        return false;
    }
}

OptimizationState optimize(const ConformalShape& initial, int target_index,
                           const OptimizerConfig& config, const StepObserver& observer) {
    OptimizationState state = make_state(initial, target_index, config);
    for (int p = 0; p < config.periods && !state.halted; ++p) {
        state.h = config.h0 / static_cast<double>(1 << p);
        const long steps_in_period = std::lround(config.period / state.h);
        for (long i = 0; i < steps_in_period; ++i) {
            if (!step(state)) break;
            if (observer) observer(state);
        }
    }

    if (!state.halted) {
        // Terminal snapshot so the history ends with the final shape's spectrum.
        try {
            const ConformalShape view = detail_opt::solver_view(state.shape, config);
            const SteklovSpectrum spec = detail_opt::solve_view(view, config);
            HistoryEntry entry;
            entry.t = state.t;
            entry.h = state.h;
            entry.lambda_target =
                spec.eigenvalues[static_cast<std::size_t>(state.target_index)];
            entry.lambda_target_area = entry.lambda_target * std::sqrt(area(view));
            const int count = std::min<int>(config.history_spectrum_count, spec.size());
            entry.spectrum.assign(spec.eigenvalues.begin(),
                                  spec.eigenvalues.begin() + count);
            entry.negative_leakage = 0.0;
            entry.min_boundary_derivative = view.min_boundary_derivative();
            state.history.push_back(std::move(entry));
            state.shape = canonical_gauge(state.shape, target_index);
        } catch (const std::exception& e) {
            state.halted = true;
            state.halt_reason = e.what();
        }
    }
    return state;
}

} // namespace steklov
