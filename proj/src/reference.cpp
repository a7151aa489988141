#include "mcvd/reference.hpp"

namespace mcvd::reference {

ChannelParams channel(Medium medium) {
    ChannelParams c;
    c.diffusion_coefficient = medium_scenario(medium).diffusion_coefficient;
    c.drift = kDrift;
    c.receiver_center = kReceiver;
    c.receiver_radius = kReceiverRadius;
    return c;
}

NetworkLayout layout() {
    return NetworkLayout{{
        {65 * kMicro, 20 * kMicro, 30 * kMicro},
        {60 * kMicro, 10 * kMicro, 30 * kMicro},
        {50 * kMicro, 10 * kMicro, 30 * kMicro},
    }};
}

Network network(Medium medium) { return Network{channel(medium), layout()}; }

Bounds bounds(double t_max, double budget) {
    Bounds b;
    b.psi_t = kPsiT;
    b.t_max = t_max;
    b.psi_a = kPsiA;
    b.upper_a = kUpperA;
    b.budget = budget;
    return b;
}

Problem problem(Medium medium, double t_max, MomentMode mode, int memory) {
    return Problem{network(medium), bounds(t_max), memory, mode};
}

}  // namespace mcvd::reference
