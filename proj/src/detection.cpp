#include "mcvd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcvd/errors.hpp"

namespace mcvd {

namespace {

void check_stats(const LinkStats& st, const char* what) {
    if (!(st.var0 >= 0.0) || !(st.var1 >= 0.0) || !std::isfinite(st.var0) || !std::isfinite(st.var1)) {
        throw DomainError(std::string(what) + ": variances must be finite and non-negative");
    }
    if (!std::isfinite(st.mu0) || !std::isfinite(st.mu1)) {
        throw DomainError(std::string(what) + ": means must be finite");
    }
}

}  // namespace

double ml_threshold(const LinkStats& st) {
    check_stats(st, "ml_threshold");
    if (st.mu1 < st.mu0) throw DomainError("ml_threshold: requires mu1 >= mu0");
    if (st.mu1 == st.mu0) return st.mu0;
    if (st.var0 == 0.0 && st.var1 == 0.0) return 0.5 * (st.mu0 + st.mu1);
    if (st.var0 == 0.0) return std::nextafter(st.mu0, std::numeric_limits<double>::infinity());
    if (st.var1 == 0.0) return st.mu1;

    // Write τ = μ0 + x·Δ. Equal log-likelihoods give a·x² + b·x + c = 0 with
    // the coefficients below; they are invariant under affine rescaling of
    // the count axis.
    const double gap = st.mu1 - st.mu0;
    const double g2 = gap * gap;
    const double log_ratio = std::log(st.var1 / st.var0);
    const double a = g2 * (1.0 / st.var0 - 1.0 / st.var1);
    const double b = 2.0 * g2 / st.var1;
    const double c = -g2 / st.var1 - log_ratio;
    const double disc = b * b - 4.0 * a * c;

    double x;
    if (a >= 0.0) {
        // σ1 ≥ σ0: the larger root is the error-probability minimum. This
        // form stays finite as a → 0 (equal variances give x = ½).
        x = -2.0 * c / (b + std::sqrt(disc));
    } else if (disc < 0.0) {
        x = 0.5;
    } else {
        // σ1 < σ0: the smaller root is the minimum.
        const double q = -0.5 * (b + std::sqrt(disc));
        x = std::min(q / a, c / q);
    }
    return st.mu0 + x * gap;
}

double ber(const LinkStats& st, double tau) {
    check_stats(st, "ber");
    // ¼·erfc forms of the two conditional error terms keep full relative
    // precision deep in the tails.
    const double miss = st.var1 > 0.0 ? 0.25 * std::erfc((st.mu1 - tau) / std::sqrt(2.0 * st.var1))
                                      : (st.mu1 >= tau ? 0.0 : 0.5);
    const double false_alarm = st.var0 > 0.0
                                   ? 0.25 * std::erfc((tau - st.mu0) / std::sqrt(2.0 * st.var0))
                                   : (tau > st.mu0 ? 0.0 : 0.5);
    return miss + false_alarm;
}

std::vector<ThresholdedLink> thresholded_links(const Schedule& schedule, const Allocation& allocation,
                                               const Network& network, int memory, MomentMode mode) {
    std::vector<ThresholdedLink> out;
    out.reserve(network.size());
    for (std::size_t s = 0; s < network.size(); ++s) {
        ThresholdedLink link;
        link.stats = link_stats(s, schedule, allocation, network, memory, mode);
        link.tau = ml_threshold(link.stats);
        link.ber = ber(link.stats, link.tau);
        out.push_back(link);
    }
    return out;
}

std::vector<double> ber_vector(const Schedule& schedule, const Allocation& allocation,
                               const Network& network, int memory, MomentMode mode) {
    std::vector<double> out;
    for (const auto& link : thresholded_links(schedule, allocation, network, memory, mode)) {
        out.push_back(link.ber);
    }
    return out;
}

}  // namespace mcvd
