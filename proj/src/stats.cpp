#include "mcvd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcvd/errors.hpp"

namespace mcvd {

double Schedule::frame_length() const {
    return std::accumulate(slot_durations.begin(), slot_durations.end(), 0.0);
}

void Schedule::validate() const {
    if (slot_durations.empty()) throw DomainError("schedule: no slots");
    for (double t : slot_durations) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("schedule: slot durations must be positive");
    }
}

void Allocation::validate() const {
    if (molecules.empty()) throw DomainError("allocation: no transmitters");
    for (double a : molecules) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("allocation: molecule counts must be non-negative");
    }
}

namespace {

void check_index(std::size_t i, std::size_t r, const char* what) {
    if (i >= r) {
        std::ostringstream os;
        os << what << ": transmitter index " << i << " out of range for " << r << " transmitters";
        throw DomainError(os.str());
    }
}

double partial_sum(const Schedule& sch, std::size_t first, std::size_t last_inclusive) {
    double acc = 0.0;
    for (std::size_t i = first; i <= last_inclusive; ++i) acc += sch.slot_durations[i];
    return acc;
}

LeakProbability clamp_leak(double raw) {
    LeakProbability out;
    out.clamped = raw < 0.0;
    out.value = std::clamp(raw, 0.0, 1.0);
    return out;
}

}  // namespace

double slot_offset(int frame_lag, std::size_t j, std::size_t s, const Schedule& schedule) {
    const std::size_t r = schedule.size();
    if (frame_lag < 1) throw DomainError("slot_offset: frame lag must be >= 1");
    check_index(j, r, "slot_offset");
    check_index(s, r, "slot_offset");
    return (frame_lag - 1) * schedule.frame_length() + partial_sum(schedule, j, r - 1) +
           partial_sum(schedule, 0, s);
}

LeakProbability iui_leak_prob(int frame_lag, std::size_t j, std::size_t s, const Schedule& schedule,
                              const Network& network) {
    check_index(j, network.size(), "iui_leak_prob");
    check_index(s, network.size(), "iui_leak_prob");
    const double lambda = slot_offset(frame_lag, j, s, schedule);
    const double earlier = lambda - schedule.slot_durations[s];
    if (!(earlier > 0.0)) throw DomainError("iui_leak_prob: lambda - t_s must be positive");
    return clamp_leak(network.arrival(j, lambda) - network.arrival(s, earlier));
}

LeakProbability intra_frame_leak_prob(std::size_t j, std::size_t s, const Schedule& schedule,
                                      const Network& network) {
    check_index(s, network.size(), "intra_frame_leak_prob");
    if (j >= s) throw DomainError("intra_frame_leak_prob: requires j < s");
    const double through_s = partial_sum(schedule, j, s);
    const double before_s = partial_sum(schedule, j, s - 1);
    return clamp_leak(network.arrival(j, through_s) - network.arrival(s, before_s));
}

double interference_variance(double a, double y, MomentMode mode) {
    switch (mode) {
        case MomentMode::PaperExact:
            return 0.5 * (a * y - a * y * y * (0.5 - 1.25 * a));
        case MomentMode::CorrectedMixture:
            return 0.5 * a * y * (1.0 - y) + 0.25 * a * a * y * y;
    }
    return 0.0;
}

LinkStats link_stats(std::size_t s, const Schedule& schedule, const Allocation& allocation,
                     const Network& network, int memory, MomentMode mode) {
    const std::size_t r = network.size();
    if (schedule.size() != r || allocation.size() != r) {
        throw DomainError("link_stats: schedule, allocation and layout sizes differ");
    }
    check_index(s, r, "link_stats");
    if (memory < 0) throw DomainError("link_stats: memory length must be >= 0");

    LinkStats out;
    auto add = [&](double a, LeakProbability leak) {
        out.mu0 += 0.5 * a * leak.value;
        out.var0 += interference_variance(a, leak.value, mode);
        out.clamped_terms += leak.clamped ? 1 : 0;
    };
    for (int u = 1; u <= memory; ++u) {
        for (std::size_t j = 0; j < r; ++j) {
            add(allocation.molecules[j], iui_leak_prob(u, j, s, schedule, network));
        }
    }
    for (std::size_t j = 0; j < s; ++j) {
        add(allocation.molecules[j], intra_frame_leak_prob(j, s, schedule, network));
    }

    const double p = network.arrival(s, schedule.slot_durations[s]);
    const double a = allocation.molecules[s];
    out.mu1 = a * p + out.mu0;
    out.var1 = a * p * (1.0 - p) + out.var0;
    return out;
}

}  // namespace mcvd
