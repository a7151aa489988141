#include "mcvd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "mcvd/errors.hpp"

namespace mcvd {

void Bounds::validate(std::size_t r) const {
    std::ostringstream os;
    if (r == 0) os << "no transmitters; ";
    if (!(psi_t > 0.0)) os << "psi_t must be positive; ";
    if (!(t_max > 0.0) || !std::isfinite(t_max)) os << "T_max must be positive; ";
    if (r > 0 && static_cast<double>(r) * psi_t > t_max) os << "r * psi_t exceeds T_max; ";
    if (!(psi_a > 0.0) || !(psi_a < upper_a)) os << "requires 0 < psi_A < Psi_A; ";
    if (!(budget > 0.0) || !std::isfinite(budget)) os << "budget Q must be positive; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw InfeasibleError("infeasible bounds: " + msg.substr(0, msg.size() - 2));
}

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::STSN: return "STSN";
        case Scheme::STDN: return "STDN";
        case Scheme::DTSN: return "DTSN";
        case Scheme::DTDN: return "DTDN";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "STSN") return Scheme::STSN;
    if (up == "STDN") return Scheme::STDN;
    if (up == "DTSN") return Scheme::DTSN;
    if (up == "DTDN") return Scheme::DTDN;
    throw DomainError("unknown scheme '" + std::string(name) + "'");
}

double scalarize(std::span<const double> bers) {
    if (bers.empty()) throw DomainError("scalarize: empty BER vector");
    return std::accumulate(bers.begin(), bers.end(), 0.0) / static_cast<double>(bers.size());
}

double objective(const Problem& p, const Schedule& schedule, const Allocation& allocation) {
    const auto bers = ber_vector(schedule, allocation, p.network, p.memory, p.mode);
    return scalarize(bers);
}

namespace {

// Target bracket width: coord_tol of the interval, but never below a few
// ulps of the coordinate, which a bracket cannot shrink past.
double search_width(double lo, double hi, const SolverConfig& cfg) {
    const double ulps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
    return std::max(cfg.coord_tol * (hi - lo), ulps);
}

}  // namespace

Minimum1D minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      const SolverConfig& cfg) {
    if (!(lo <= hi)) throw DomainError("minimize_1d: requires lo <= hi");
    Minimum1D best{lo, std::numeric_limits<double>::infinity(), 0, 0, true};
    auto eval = [&](double x) {
        double v = f(x);
        ++best.evaluations;
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        if (v < best.value || (v == best.value && x < best.x)) {
            best.x = x;
            best.value = v;
        }
        return v;
    };
    if (lo == hi) {
        eval(lo);
        return best;
    }

    double a = lo;
    double b = hi;
    const int n = cfg.scan_points;
    if (n >= 3) {
        std::vector<double> values(static_cast<std::size_t>(n));
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            const double x = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
            values[static_cast<std::size_t>(i)] = eval(x);
            if (values[static_cast<std::size_t>(i)] < values[k]) k = static_cast<std::size_t>(i);
        }
        a = lo + (hi - lo) * static_cast<double>(k == 0 ? 0 : k - 1) / (n - 1);
        b = k + 1 >= static_cast<std::size_t>(n) ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / (n - 1);
    } else {
        eval(lo);
        eval(hi);
    }

    constexpr double kInvPhi = 0.61803398874989484820;
    const double width = search_width(lo, hi, cfg);
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > width) {
        if (best.iterations >= cfg.max_1d_iters) {
            best.converged = false;
            break;
        }
        ++best.iterations;
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eval(d);
        }
    }
    return best;
}

namespace {

// Derivatives of one link's moments with respect to every t_q and A_q.
struct MomentJacobian {
    std::vector<double> mu0_t, mu1_t, var0_t, var1_t;
    std::vector<double> mu0_a, mu1_a, var0_a, var1_a;

    explicit MomentJacobian(std::size_t r)
        : mu0_t(r), mu1_t(r), var0_t(r), var1_t(r), mu0_a(r), mu1_a(r), var0_a(r), var1_a(r) {}
};

double variance_slope_leak(double a, double y, MomentMode mode) {
    return mode == MomentMode::PaperExact ? 0.5 * (a - 2.0 * a * y * (0.5 - 1.25 * a))
                                          : 0.5 * a * (1.0 - 2.0 * y) + 0.5 * a * a * y;
}

double variance_slope_molecules(double a, double y, MomentMode mode) {
    return mode == MomentMode::PaperExact ? 0.5 * (y - 0.5 * y * y + 2.5 * a * y * y)
                                          : 0.5 * y * (1.0 - y) + 0.5 * a * y * y;
}

MomentJacobian moment_jacobian(std::size_t s, const Problem& p, const Schedule& sch, const Allocation& al) {
    const Network& net = p.network;
    const std::size_t r = net.size();
    const auto& t = sch.slot_durations;
    MomentJacobian jac(r);
    auto slope = [&](std::size_t tx, double elapsed) {
        return arrival_probability_derivative(net.channel, net.layout.positions[tx], elapsed);
    };
    // One leak term Y = P(X_j, late) − P(X_s, early) with elapsed-time
    // sensitivities d_late[q], d_early[q].
    auto add = [&](std::size_t j, double late, double early, auto d_late, auto d_early) {
        const double raw = net.arrival(j, late) - net.arrival(s, early);
        if (!(raw > 0.0) || raw >= 1.0) return;  // clamped: locally constant
        const double a = al.molecules[j];
        const double sl = slope(j, late);
        const double se = slope(s, early);
        const double dv = variance_slope_leak(a, raw, p.mode);
        for (std::size_t q = 0; q < r; ++q) {
            const double dy = sl * d_late(q) - se * d_early(q);
            jac.mu0_t[q] += 0.5 * a * dy;
            jac.var0_t[q] += dv * dy;
        }
        jac.mu0_a[j] += 0.5 * raw;
        jac.var0_a[j] += variance_slope_molecules(a, raw, p.mode);
    };
    for (int u = 1; u <= p.memory; ++u) {
        for (std::size_t j = 0; j < r; ++j) {
            const double lambda = slot_offset(u, j, s, sch);
            auto d_late = [&](std::size_t q) { return (u - 1) + (q >= j ? 1.0 : 0.0) + (q <= s ? 1.0 : 0.0); };
            auto d_early = [&](std::size_t q) { return d_late(q) - (q == s ? 1.0 : 0.0); };
            add(j, lambda, lambda - t[s], d_late, d_early);
        }
    }
    for (std::size_t j = 0; j < s; ++j) {
        double through = 0.0;
        for (std::size_t q = j; q <= s; ++q) through += t[q];
        auto d_late = [&](std::size_t q) { return q >= j && q <= s ? 1.0 : 0.0; };
        auto d_early = [&](std::size_t q) { return q >= j && q < s ? 1.0 : 0.0; };
        add(j, through, through - t[s], d_late, d_early);
    }
    for (std::size_t q = 0; q < r; ++q) {
        jac.mu1_t[q] = jac.mu0_t[q];
        jac.var1_t[q] = jac.var0_t[q];
        jac.mu1_a[q] = jac.mu0_a[q];
        jac.var1_a[q] = jac.var0_a[q];
    }
    const double pr = net.arrival(s, t[s]);
    const double dp = slope(s, t[s]);
    const double a = al.molecules[s];
    jac.mu1_t[s] += a * dp;
    jac.var1_t[s] += a * (1.0 - 2.0 * pr) * dp;
    jac.mu1_a[s] += pr;
    jac.var1_a[s] += pr * (1.0 - pr);
    return jac;
}

double normal_density(double x, double mean, double var) {
    return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// ∂Pe/∂(μ0, μ1, σ0², σ1²) at fixed τ, plus how τ moves with the means.
struct BerPartials {
    double mu0 = 0.0, mu1 = 0.0, var0 = 0.0, var1 = 0.0;
};

BerPartials ber_partials(const LinkStats& st, double tau) {
    BerPartials d;
    const double f0 = st.var0 > 0.0 ? normal_density(tau, st.mu0, st.var0) : 0.0;
    const double f1 = st.var1 > 0.0 ? normal_density(tau, st.mu1, st.var1) : 0.0;
    if (st.var0 > 0.0) {
        d.mu0 = 0.5 * f0;
        d.var0 = 0.25 * (tau - st.mu0) / st.var0 * f0;
    }
    if (st.var1 > 0.0) {
        d.mu1 = -0.5 * f1;
        d.var1 = -0.25 * (tau - st.mu1) / st.var1 * f1;
    }
    // ∂Pe/∂τ = ½(f1 − f0) vanishes at a density crossing. Elsewhere the
    // threshold is pinned to a mean and moves with it.
    const double dtau = 0.5 * (f1 - f0);
    const double scale = 0.5 * (f0 + f1);
    if (std::abs(dtau) > 1e-9 * scale) {
        if (st.var0 == 0.0 || st.mu0 == st.mu1) {
            d.mu0 += dtau;
        } else if (st.var1 == 0.0) {
            d.mu1 += dtau;
        } else {
            d.mu0 += 0.5 * dtau;
            d.mu1 += 0.5 * dtau;
        }
    }
    return d;
}

}  // namespace

ObjectiveGradient objective_gradient(const Problem& p, const Schedule& sch, const Allocation& al) {
    const std::size_t r = p.network.size();
    if (sch.size() != r || al.size() != r) throw DomainError("objective_gradient: sizes differ");
    ObjectiveGradient g{std::vector<double>(r, 0.0), std::vector<double>(r, 0.0)};
    const double w = 1.0 / static_cast<double>(r);
    for (std::size_t s = 0; s < r; ++s) {
        const LinkStats st = link_stats(s, sch, al, p.network, p.memory, p.mode);
        const BerPartials d = ber_partials(st, ml_threshold(st));
        const MomentJacobian jac = moment_jacobian(s, p, sch, al);
        for (std::size_t q = 0; q < r; ++q) {
            g.slots[q] += w * (d.mu0 * jac.mu0_t[q] + d.mu1 * jac.mu1_t[q] + d.var0 * jac.var0_t[q] +
                               d.var1 * jac.var1_t[q]);
            g.molecules[q] += w * (d.mu0 * jac.mu0_a[q] + d.mu1 * jac.mu1_a[q] + d.var0 * jac.var0_a[q] +
                                   d.var1 * jac.var1_a[q]);
        }
    }
    return g;
}

Minimum1D bisect_derivative(const std::function<double(double)>& df, const std::function<double(double)>& f,
                            double lo, double hi, const SolverConfig& cfg) {
    if (!(lo <= hi)) throw DomainError("bisect_derivative: requires lo <= hi");
    Minimum1D out{lo, 0.0, 0, 0, true};
    auto finish = [&](double x) {
        out.x = x;
        out.value = f(x);
        ++out.evaluations;
        if (std::isnan(out.value)) out.value = std::numeric_limits<double>::infinity();
        return out;
    };
    if (lo == hi) return finish(lo);
    ++out.evaluations;
    if (df(lo) >= 0.0) return finish(lo);
    ++out.evaluations;
    if (df(hi) <= 0.0) return finish(hi);
    double a = lo, b = hi;
    const double width = search_width(lo, hi, cfg);
    while (b - a > width) {
        if (out.iterations >= cfg.max_1d_iters) {
            out.converged = false;
            break;
        }
        ++out.iterations;
        const double mid = 0.5 * (a + b);
        ++out.evaluations;
        (df(mid) > 0.0 ? b : a) = mid;
    }
    return finish(0.5 * (a + b));
}

namespace {

struct SearchState {
    double current = 0.0;
    std::vector<double> trace;
    long evaluations = 0;
    long subproblems = 0;
    bool warning = false;
};

using BoxFn = std::function<std::pair<double, double>(std::size_t, const std::vector<double>&)>;
using ObjectiveFn = std::function<double(const std::vector<double>&)>;
// ∂g/∂v_s at v; empty when the line search is derivative-free.
using DerivativeFn = std::function<double(const std::vector<double>&, std::size_t)>;

Minimum1D line_search(const std::function<double(double)>& f, const std::function<double(double)>& df,
                      double lo, double hi, const SolverConfig& cfg) {
    if (cfg.line_search == LineSearch::GradientBisection && df) return bisect_derivative(df, f, lo, hi, cfg);
    return minimize_1d(f, lo, hi, cfg);
}

// Cyclic coordinate minimization; a coordinate moves on improvement, or on a
// tie toward a lower value, so the recorded objective never increases.
// Returns passes.
// Moves time between every pair of slots with the frame length fixed. From
// a full frame a single-slot step can only shrink a slot, so without these
// moves the search stalls wherever the gain needs one slot to grow.
void exchange_pass(std::vector<double>& t, double floor, const ObjectiveFn& g, const DerivativeFn& dg,
                   SearchState& state, const SolverConfig& cfg) {
    std::vector<double> trial;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            const double lo = floor - t[i];
            const double hi = t[j] - floor;
            if (!(hi > lo)) continue;
            trial = t;
            auto f = [&](double delta) {
                trial[i] = t[i] + delta;
                trial[j] = t[j] - delta;
                return g(trial);
            };
            std::function<double(double)> df;
            if (dg) {
                df = [&](double delta) {
                    trial[i] = t[i] + delta;
                    trial[j] = t[j] - delta;
                    return dg(trial, i) - dg(trial, j);
                };
            }
            const Minimum1D res = line_search(f, df, lo, hi, cfg);
            state.evaluations += res.evaluations;
            ++state.subproblems;
            state.warning = state.warning || !res.converged;
            if (res.value < state.current) {
                const double ti = t[i] + res.x;
                const double tj = t[j] - res.x;
                t[i] = ti;
                t[j] = tj;
                state.current = res.value;
            }
        }
    }
}

int coordinate_descent(std::vector<double>& v, const BoxFn& box, const ObjectiveFn& g,
                       const DerivativeFn& dg, SearchState& state, const SolverConfig& cfg, bool record_trace,
                       std::optional<double> exchange_floor = std::nullopt) {
    int passes = 0;
    std::vector<double> trial;
    for (int pass = 1; pass <= cfg.max_outer_iters; ++pass) {
        const double before = state.current;
        for (std::size_t s = 0; s < v.size(); ++s) {
            const auto [lo, hi] = box(s, v);
            trial = v;
            auto f = [&](double x) {
                trial[s] = x;
                return g(trial);
            };
            std::function<double(double)> df;
            if (dg) {
                df = [&](double x) {
                    trial[s] = x;
                    return dg(trial, s);
                };
            }
            const Minimum1D res = line_search(f, df, lo, std::max(lo, hi), cfg);
            state.evaluations += res.evaluations;
            ++state.subproblems;
            state.warning = state.warning || !res.converged;
            if (res.value < state.current || (res.value == state.current && res.x < v[s])) {
                v[s] = res.x;
                state.current = res.value;
            }
        }
        if (exchange_floor) exchange_pass(v, *exchange_floor, g, dg, state, cfg);
        passes = pass;
        if (record_trace) state.trace.push_back(state.current);
        if (before - state.current <= cfg.obj_tol * before) break;
    }
    return passes;
}

Schedule uniform_schedule(const Problem& p) {
    const std::size_t r = p.network.size();
    return Schedule{std::vector<double>(r, p.bounds.t_max / static_cast<double>(r))};
}

Allocation uniform_allocation(const Problem& p) {
    const std::size_t r = p.network.size();
    return Allocation{std::vector<double>(r, p.bounds.budget / static_cast<double>(r))};
}

std::pair<double, double> allocation_box(const Problem& p, const SolverConfig& cfg) {
    const double offset = cfg.coord_tol * (p.bounds.upper_a - p.bounds.psi_a);
    return {p.bounds.psi_a + offset, p.bounds.upper_a - offset};
}

double slot_floor(const Problem& p, const SolverConfig& cfg) {
    return p.bounds.psi_t + cfg.coord_tol * (p.bounds.t_max - p.bounds.psi_t);
}

void check_problem(const Problem& p) {
    p.network.validate();
    p.bounds.validate(p.network.size());
    if (p.memory < 0) throw DomainError("memory length U must be >= 0");
}

// Fills the derived fields of a solution from its (A, t).
void finalize(const Problem& p, Solution& sol, bool boxed_allocation) {
    const auto links = thresholded_links(sol.schedule, sol.allocation, p.network, p.memory, p.mode);
    sol.per_tx_ber.clear();
    sol.clamped_terms = 0;
    for (const auto& l : links) {
        sol.per_tx_ber.push_back(l.ber);
        sol.clamped_terms += l.stats.clamped_terms;
    }
    sol.objective = scalarize(sol.per_tx_ber);

    sol.allocation_int.clear();
    for (double a : sol.allocation.molecules) {
        double q = std::nearbyint(a);
        if (boxed_allocation) q = std::clamp(q, std::ceil(p.bounds.psi_a), std::floor(p.bounds.upper_a));
        sol.allocation_int.push_back(q);
    }
    sol.objective_int = objective(p, sol.schedule, Allocation{sol.allocation_int});

    const std::size_t r = p.network.size();
    sol.complexity_estimate = complexity_estimate(sol.scheme, r, sol.iterations, ComplexityParams{});
    const double measured = sol.subproblems > 0 ? static_cast<double>(sol.evaluations) / sol.subproblems : 0.0;
    sol.complexity_actual = complexity_estimate(sol.scheme, r, sol.iterations, measured);
}

ObjectiveFn slots_objective(const Problem& p, const Allocation& a, long& counter) {
    return [&p, a, &counter](const std::vector<double>& t) {
        ++counter;
        return objective(p, Schedule{t}, a);
    };
}

ObjectiveFn allocation_objective(const Problem& p, const Schedule& t, long& counter) {
    return [&p, t, &counter](const std::vector<double>& a) {
        ++counter;
        return objective(p, t, Allocation{a});
    };
}

DerivativeFn slots_derivative(const Problem& p, const Allocation& a, const SolverConfig& cfg) {
    if (cfg.line_search != LineSearch::GradientBisection) return {};
    return [&p, a](const std::vector<double>& t, std::size_t s) { return objective_gradient(p, Schedule{t}, a).slots[s]; };
}

DerivativeFn allocation_derivative(const Problem& p, const Schedule& t, const SolverConfig& cfg) {
    if (cfg.line_search != LineSearch::GradientBisection) return {};
    return [&p, t](const std::vector<double>& a, std::size_t s) {
        return objective_gradient(p, t, Allocation{a}).molecules[s];
    };
}

BoxFn slots_box(const Problem& p, const SolverConfig& cfg) {
    const double floor = slot_floor(p, cfg);
    const double t_max = p.bounds.t_max;
    return [floor, t_max](std::size_t s, const std::vector<double>& t) {
        double others = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i != s) others += t[i];
        }
        return std::pair{floor, t_max - others};
    };
}

BoxFn allocation_box_fn(const Problem& p, const SolverConfig& cfg) {
    const auto box = allocation_box(p, cfg);
    return [box](std::size_t, const std::vector<double>&) { return box; };
}

}  // namespace

Solution stsn(const Problem& p) {
    check_problem(p);
    Solution sol;
    sol.scheme = Scheme::STSN;
    sol.schedule = uniform_schedule(p);
    sol.allocation = uniform_allocation(p);
    finalize(p, sol, false);
    sol.objective_trace = {sol.objective};
    return sol;
}

Solution dtsn(const Problem& p, const SolverConfig& cfg) {
    check_problem(p);
    const Solution start = stsn(p);
    const double floor = slot_floor(p, cfg);
    if (start.schedule.slot_durations.front() < floor) {
        throw InfeasibleError("dtsn: T_max / r leaves no interior room above psi_t");
    }

    Solution sol;
    sol.scheme = Scheme::DTSN;
    sol.allocation = start.allocation;
    std::vector<double> t = start.schedule.slot_durations;

    SearchState state;
    state.current = start.objective;
    state.trace.push_back(state.current);
    long counter = 0;
    sol.iterations.alpha = coordinate_descent(t, slots_box(p, cfg), slots_objective(p, sol.allocation, counter),
                                              slots_derivative(p, sol.allocation, cfg), state, cfg, true, floor);
    sol.schedule = Schedule{t};
    sol.objective_trace = state.trace;
    sol.evaluations = state.evaluations;
    sol.subproblems = state.subproblems;
    sol.warning = state.warning;
    finalize(p, sol, false);
    return sol;
}

Solution stdn(const Problem& p, const SolverConfig& cfg) {
    check_problem(p);
    const Solution start = stsn(p);
    const auto [lo, hi] = allocation_box(p, cfg);

    Solution sol;
    sol.scheme = Scheme::STDN;
    sol.schedule = start.schedule;
    std::vector<double> a = start.allocation.molecules;
    for (double& x : a) x = std::clamp(x, lo, hi);

    SearchState state;
    long counter = 0;
    const ObjectiveFn g = allocation_objective(p, sol.schedule, counter);
    state.current = g(a);
    state.trace.push_back(state.current);
    sol.iterations.beta = coordinate_descent(a, allocation_box_fn(p, cfg), g,
                                             allocation_derivative(p, sol.schedule, cfg), state, cfg, true);
    sol.allocation = Allocation{a};
    sol.objective_trace = state.trace;
    sol.evaluations = state.evaluations;
    sol.subproblems = state.subproblems;
    sol.warning = state.warning;
    finalize(p, sol, true);
    return sol;
}

Solution dtdn(const Problem& p, const SolverConfig& cfg, const Solution& from_dtsn, const Solution& from_stdn) {
    check_problem(p);
    const Solution& init = from_dtsn.objective <= from_stdn.objective ? from_dtsn : from_stdn;
    const auto [lo, hi] = allocation_box(p, cfg);

    std::vector<double> a = init.allocation.molecules;
    for (double& x : a) x = std::clamp(x, lo, hi);
    std::vector<double> t = init.schedule.slot_durations;

    Solution sol;
    sol.scheme = Scheme::DTDN;
    SearchState state;
    long counter = 0;
    state.current = objective(p, Schedule{t}, Allocation{a});
    state.trace.push_back(state.current);

    for (int outer = 1; outer <= cfg.max_outer_iters; ++outer) {
        const double before = state.current;
        const int beta = coordinate_descent(a, allocation_box_fn(p, cfg),
                                            allocation_objective(p, Schedule{t}, counter),
                                            allocation_derivative(p, Schedule{t}, cfg), state, cfg, false);
        const int alpha = coordinate_descent(t, slots_box(p, cfg), slots_objective(p, Allocation{a}, counter),
                                             slots_derivative(p, Allocation{a}, cfg), state, cfg, false,
                                             slot_floor(p, cfg));
        sol.iterations.alpha = std::max(sol.iterations.alpha, alpha);
        sol.iterations.beta = std::max(sol.iterations.beta, beta);
        sol.iterations.gamma = outer;
        state.trace.push_back(state.current);
        if (before - state.current <= cfg.obj_tol * before) break;
    }

    sol.allocation = Allocation{a};
    sol.schedule = Schedule{t};
    sol.objective_trace = state.trace;
    sol.evaluations = state.evaluations;
    sol.subproblems = state.subproblems;
    sol.warning = state.warning;
    finalize(p, sol, true);
    return sol;
}

Solution dtdn(const Problem& p, const SolverConfig& cfg) {
    return dtdn(p, cfg, dtsn(p, cfg), stdn(p, cfg));
}

const Solution& SchemeResults::operator[](Scheme s) const {
    switch (s) {
        case Scheme::STSN: return stsn;
        case Scheme::STDN: return stdn;
        case Scheme::DTSN: return dtsn;
        case Scheme::DTDN: return dtdn;
    }
    throw DomainError("unknown scheme");
}

SchemeResults solve_all(const Problem& p, const SolverConfig& cfg) {
    SchemeResults out;
    out.stsn = stsn(p);
    out.dtsn = dtsn(p, cfg);
    out.stdn = stdn(p, cfg);
    out.dtdn = dtdn(p, cfg, out.dtsn, out.stdn);
    return out;
}

double interior_point_cost(const ComplexityParams& c) {
    if (!(c.rho3 > 1.0)) throw DomainError("complexity: rho3 must exceed 1");
    if (!(c.constraints > 0.0 && c.rho1 > 0.0 && c.rho2 > 0.0)) {
        throw DomainError("complexity: constraints, rho1 and rho2 must be positive");
    }
    return std::log(c.constraints / (c.rho1 * c.rho2)) / std::log(c.rho3);
}

double complexity_estimate(Scheme scheme, std::size_t r, const IterationCounts& it, double per_subproblem) {
    const double rr = static_cast<double>(r);
    switch (scheme) {
        case Scheme::STSN: return 0.0;
        case Scheme::DTSN: return rr * it.alpha * per_subproblem;
        case Scheme::STDN: return rr * it.beta * per_subproblem;
        case Scheme::DTDN: return 2.0 * rr * rr * it.alpha * it.beta * it.gamma * per_subproblem;
    }
    return 0.0;
}

double complexity_estimate(Scheme scheme, std::size_t r, const IterationCounts& it, const ComplexityParams& c) {
    return complexity_estimate(scheme, r, it, interior_point_cost(c));
}

ConvexityReport convexity_probe(const std::function<double(std::span<const double>)>& f,
                                std::span<const std::vector<double>> grid, std::span<const double> steps) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    ConvexityReport report;
    report.min_second_difference = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& x = grid[i];
        if (x.size() != steps.size()) throw DomainError("convexity_probe: step count differs from dimension");
        const double f0 = f(x);
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (steps[k] == 0.0) continue;
            double h = steps[k];
            double num = 0.0;
            bool resolved = false;
            for (int attempt = 0; attempt < 2 && !resolved; ++attempt) {
                std::vector<double> lo = x;
                std::vector<double> hi = x;
                lo[k] -= h;
                hi[k] += h;
                num = f(lo) - 2.0 * f0 + f(hi);
                resolved = std::abs(num) >= 1e3 * kEps * std::abs(f0);
                if (!resolved) h *= 10.0;
            }
            if (!resolved) {
                std::ostringstream os;
                os << "convexity_probe: second difference lost to cancellation at point " << i
                   << ", coordinate " << k << " (f = " << f0 << ")";
                throw NumericError(os.str());
            }
            const double sd = num / (h * h);
            report.samples.push_back({i, k, h, sd});
            if (sd < 0.0) ++report.negative;
            report.min_second_difference = std::min(report.min_second_difference, sd);
        }
    }
    return report;
}

}  // namespace mcvd
