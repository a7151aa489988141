#pragma once

// Threshold detection of on-off keyed slots under the Gaussian count model.

#include <vector>

#include "mcvd/stats.hpp"

namespace mcvd {

struct ThresholdedLink {
    LinkStats stats;
    double tau = 0.0;
    double ber = 0.5;
};

/// Maximum-likelihood threshold: the crossing of N(τ; μ0, σ0²) and
/// N(τ; μ1, σ1²) at which the likelihood ratio turns in favour of bit 1,
/// i.e. the local minimum of the error probability in τ. For ordinary links
/// it lies in (μ0, μ1); when the mean gap is too small for the densities to
/// cross inside that interval the crossing beyond μ1 is returned.
///
/// A zero-variance hypothesis is a point mass; the threshold is then placed
/// just past it (the limit of the crossing as the variance vanishes).
double ml_threshold(const LinkStats& stats);

/// Error probability with equiprobable bits and the rule "decide 1 iff
/// count ≥ τ": ½ + ¼[erf((τ−μ1)/√(2σ1²)) − erf((τ−μ0)/√(2σ0²))].
double ber(const LinkStats& stats, double tau);

std::vector<ThresholdedLink> thresholded_links(const Schedule& schedule, const Allocation& allocation,
                                               const Network& network, int memory, MomentMode mode);

std::vector<double> ber_vector(const Schedule& schedule, const Allocation& allocation,
                               const Network& network, int memory, MomentMode mode);

}  // namespace mcvd
