#pragma once

// Release-management schemes. Every dynamic scheme minimizes the equally
// weighted mean of the per-transmitter error probabilities by cyclic
// coordinate (or block) search.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mcvd/detection.hpp"
#include "mcvd/stats.hpp"

namespace mcvd {

struct Bounds {
    double psi_t = 1e-6;   // slot lower bound, s
    double t_max = 0.0;    // frame upper bound, s
    double psi_a = 100.0;  // molecules per release, lower
    double upper_a = 800.0;
    double budget = 600.0;  // Q, molecules per frame for the static allocation

    void validate(std::size_t transmitters) const;
};

enum class Scheme { STSN, STDN, DTSN, DTDN };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

enum class LineSearch {
    Golden,             // derivative-free; the default
    GradientBisection,  // bisection on the sign of the analytic derivative (verification)
};

struct SolverConfig {
    double coord_tol = 1e-8;  // relative to the box width
    double obj_tol = 1e-8;    // relative objective decrease that ends the search
    int max_outer_iters = 100;
    int max_1d_iters = 200;
    /// Uniform samples taken before golden-section refinement of the best
    /// bracket. Values below 3 disable the scan.
    int scan_points = 16;
    LineSearch line_search = LineSearch::Golden;
};

struct Problem {
    Network network;
    Bounds bounds;
    int memory = 3;  // U
    MomentMode mode = MomentMode::PaperExact;
};

struct IterationCounts {
    int alpha = 0;  // slot-duration passes
    int beta = 0;   // allocation passes
    int gamma = 0;  // outer alternations
};

/// Interior-point cost model parameters: C = log(Λ/(ρ1ρ2)) / log ρ3.
struct ComplexityParams {
    double constraints = 2.0;
    double rho1 = 0.1;
    double rho2 = 0.1;
    double rho3 = 10.0;
};

struct Solution {
    Scheme scheme = Scheme::STSN;
    Allocation allocation;
    Schedule schedule;
    double objective = 0.0;
    std::vector<double> per_tx_ber;
    std::vector<double> allocation_int;  // nearest integers, clipped to the box
    double objective_int = 0.0;
    IterationCounts iterations;
    std::vector<double> objective_trace;
    double complexity_estimate = 0.0;  // interior-point model
    double complexity_actual = 0.0;    // same model with measured 1D cost
    long evaluations = 0;              // objective evaluations
    long subproblems = 0;              // 1D minimizations
    bool warning = false;              // a 1D search hit its iteration cap
    int clamped_terms = 0;             // negative leak differences clamped to 0 at the solution
};

/// Equal-weight scalarization: arithmetic mean.
double scalarize(std::span<const double> bers);

/// Mean error probability at (A, t).
double objective(const Problem& problem, const Schedule& schedule, const Allocation& allocation);

/// Analytic partial derivatives of the mean error probability. Leak terms
/// follow the arrival-probability time derivative; the threshold is held at
/// its optimum, where the error probability is stationary in τ, except for
/// point-mass hypotheses, where τ moves with the pinned mean.
struct ObjectiveGradient {
    std::vector<double> slots;      // ∂G/∂t_s, 1/s
    std::vector<double> molecules;  // ∂G/∂A_s, per molecule
};

ObjectiveGradient objective_gradient(const Problem& problem, const Schedule& schedule,
                                     const Allocation& allocation);

struct Minimum1D {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = true;
};

/// Golden-section minimization on [lo, hi] after an optional coarse scan that
/// picks the bracket. Ties go to the lower coordinate.
Minimum1D minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      const SolverConfig& cfg);

/// Bisection on the sign of df: lo when df(lo) ≥ 0, hi when df(hi) ≤ 0,
/// otherwise a sign change located to width coord_tol·(hi − lo). f is
/// evaluated once, at the result.
Minimum1D bisect_derivative(const std::function<double(double)>& df, const std::function<double(double)>& f,
                            double lo, double hi, const SolverConfig& cfg);

Solution stsn(const Problem& problem);
/// Slot search from the even split. Each pass minimizes over every t_s on
/// [ψ_t, T_max − Σ others] and then over every pairwise exchange of time
/// between two slots.
Solution dtsn(const Problem& problem, const SolverConfig& cfg);
Solution stdn(const Problem& problem, const SolverConfig& cfg);
/// Starts from the better of the DTSN and STDN solutions.
Solution dtdn(const Problem& problem, const SolverConfig& cfg);
Solution dtdn(const Problem& problem, const SolverConfig& cfg, const Solution& from_dtsn,
              const Solution& from_stdn);

struct SchemeResults {
    Solution stsn, dtsn, stdn, dtdn;
    const Solution& operator[](Scheme s) const;
};

/// All four schemes with the initialization chain STSN → {DTSN, STDN} → DTDN.
SchemeResults solve_all(const Problem& problem, const SolverConfig& cfg);

double interior_point_cost(const ComplexityParams& p);

/// Table-style cost: 0 for STSN, r·α·C, r·β·C, 2r²·α·β·γ·C.
double complexity_estimate(Scheme scheme, std::size_t transmitters, const IterationCounts& iters,
                           double per_subproblem_cost);
double complexity_estimate(Scheme scheme, std::size_t transmitters, const IterationCounts& iters,
                           const ComplexityParams& params);

struct CurvatureSample {
    std::size_t point = 0;
    std::size_t coordinate = 0;
    double step = 0.0;
    double second_difference = 0.0;
};

struct ConvexityReport {
    std::vector<CurvatureSample> samples;
    std::size_t negative = 0;
    double min_second_difference = 0.0;

    bool all_positive() const { return !samples.empty() && negative == 0 && min_second_difference > 0.0; }
};

/// Central second differences (f(x−h) − 2f(x) + f(x+h)) / h² along each
/// coordinate with a non-zero step, at every grid point. A step that drowns
/// in rounding is enlarged ten-fold once; if that fails, NumericError.
ConvexityReport convexity_probe(const std::function<double(std::span<const double>)>& f,
                                std::span<const std::vector<double>> grid,
                                std::span<const double> steps);

}  // namespace mcvd
