#pragma once

// Monte Carlo counterpart of the analytic channel and count model.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcvd/stats.hpp"

namespace mcvd {

enum class Sampling {
    ExactGaussian,  // positions drawn from the transition density directly
    EulerMaruyama,  // discretized path with step dt
};

/// How a molecule released in an earlier slot contributes to a later count.
enum class LeakModel {
    Modeled,   // Bernoulli with the clamped leak probabilities Y / H of the count model
    Presence,  // Bernoulli with P_h(X_j, elapsed): the molecule is still in the sphere
};

struct SimConfig {
    long n_particles = 100000;
    long n_frames = 100000;
    std::uint64_t seed = 0;
    int warmup_frames = 0;  // discarded in addition to the memory length
    Sampling sampling = Sampling::ExactGaussian;
    double dt = 0.0;  // s, EulerMaruyama only
    LeakModel leak = LeakModel::Modeled;
    int threads = 1;
    long chunk = 8192;  // frames or particles per independent RNG stream

    void validate() const;
};

struct ArrivalEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    long inside = 0;
    long trials = 0;
};

ArrivalEstimate simulate_arrival(const ChannelParams& channel, Vec3 source, double t, const SimConfig& cfg);

struct TxReport {
    double tau = 0.0;
    double mu0 = 0.0, mu1 = 0.0, var0 = 0.0, var1 = 0.0;
    double mu0_se = 0.0, mu1_se = 0.0, var0_se = 0.0, var1_se = 0.0;
    double ber = 0.0;
    double ber_se = 0.0;
    long bits0 = 0, bits1 = 0;
    long errors = 0;
    /// Count histograms given bit 0 / bit 1, indexed by molecule count.
    std::vector<long> histogram0, histogram1;
};

struct EmpiricalReport {
    std::vector<TxReport> tx;
    long frames = 0;

    std::vector<double> bers() const;
};

/// Simulates OOK frames with equiprobable bits and detects each slot with
/// the given thresholds ("decide 1 iff count ≥ τ"). Interference follows the
/// same memory length as the analytic model. Molecule numbers are rounded to
/// the nearest integer.
EmpiricalReport simulate_frames(const Schedule& schedule, const Allocation& allocation, const Network& network,
                                int memory, std::span<const double> thresholds, const SimConfig& cfg);

/// As above with per-transmitter thresholds chosen to minimize the empirical
/// error count on the simulated data.
EmpiricalReport simulate_frames(const Schedule& schedule, const Allocation& allocation, const Network& network,
                                int memory, const SimConfig& cfg);

/// Independent 64-bit seed for stream `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace mcvd
