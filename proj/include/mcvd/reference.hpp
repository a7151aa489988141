#pragma once

// The three-transmitter reference deployment used throughout the tests,
// presets and benchmarks.

#include "mcvd/channel.hpp"
#include "mcvd/optimizer.hpp"

namespace mcvd::reference {

inline constexpr double kMicro = 1e-6;
inline constexpr double kMilli = 1e-3;

inline constexpr Vec3 kDrift{100 * kMicro, 200 * kMicro, 100 * kMicro};  // m/s
inline constexpr Vec3 kReceiver{100 * kMicro, 20 * kMicro, 40 * kMicro};
inline constexpr double kReceiverRadius = 45 * kMicro;
inline constexpr double kPsiT = 1 * kMicro;  // 1 µs
inline constexpr double kPsiA = 100;
inline constexpr double kUpperA = 800;
inline constexpr double kBudget = 600;
inline constexpr int kMemory = 3;

ChannelParams channel(Medium medium);
NetworkLayout layout();
Network network(Medium medium);
Bounds bounds(double t_max, double budget = kBudget);
Problem problem(Medium medium, double t_max, MomentMode mode = MomentMode::PaperExact,
                int memory = kMemory);

}  // namespace mcvd::reference
