#pragma once

// First and second moments of the received molecule count per TDMA slot,
// including leakage from earlier slots of the current frame and from U
// previous frames.

#include <cstddef>
#include <vector>

#include "mcvd/channel.hpp"

namespace mcvd {

/// Channel plus transmitter placement. Transmitter indices are 0-based and
/// follow activation order.
struct Network {
    ChannelParams channel;
    NetworkLayout layout;

    std::size_t size() const { return layout.size(); }
    /// P_h: probability a molecule from transmitter `tx` is in the receiver
    /// `elapsed` seconds after release.
    double arrival(std::size_t tx, double elapsed) const {
        return arrival_probability(channel, layout.positions[tx], elapsed);
    }
    void validate() const {
        channel.validate();
        layout.validate();
    }
};

struct Schedule {
    std::vector<double> slot_durations;  // s

    std::size_t size() const { return slot_durations.size(); }
    double frame_length() const;
    void validate() const;
};

/// Molecules released for bit 1, per transmitter. Real-valued.
struct Allocation {
    std::vector<double> molecules;

    std::size_t size() const { return molecules.size(); }
    void validate() const;
};

enum class MomentMode {
    PaperExact,        // interference variance with the 1.25·A² cross term
    CorrectedMixture,  // exact variance of a ½/½ mixture of 0 and Binomial(A, p)
};

struct LinkStats {
    double mu0 = 0.0;
    double mu1 = 0.0;
    double var0 = 0.0;
    double var1 = 0.0;
    /// Leak terms whose raw difference was negative and were clamped to 0.
    int clamped_terms = 0;
};

/// λ for frame lag u ≥ 1, interferer j and observed slot s:
/// (u−1)·T + Σ_{i≥j} t_i + Σ_{i≤s} t_i.
double slot_offset(int frame_lag, std::size_t j, std::size_t s, const Schedule& schedule);

struct LeakProbability {
    double value = 0.0;
    bool clamped = false;
};

/// Y: leak from transmitter j released `frame_lag` frames ago into slot s,
/// P_h(X_j, λ) − P_h(X_s, λ − t_s), clamped to [0, 1].
LeakProbability iui_leak_prob(int frame_lag, std::size_t j, std::size_t s,
                              const Schedule& schedule, const Network& network);

/// H: leak from an earlier slot j < s of the current frame,
/// P_h(X_j, Σ_{q=j..s} t_q) − P_h(X_s, Σ_{q=j..s−1} t_q), clamped to [0, 1].
LeakProbability intra_frame_leak_prob(std::size_t j, std::size_t s, const Schedule& schedule,
                                      const Network& network);

/// Variance contribution of one interference term with equiprobable bits.
double interference_variance(double molecules, double leak, MomentMode mode);

LinkStats link_stats(std::size_t s, const Schedule& schedule, const Allocation& allocation,
                     const Network& network, int memory, MomentMode mode);

}  // namespace mcvd
