#pragma once

// Physical layer of a diffusive molecular link with uniform drift and a
// passive spherical receiver. All quantities are SI.

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace mcvd {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double k, Vec3 a) { return {k * a.x, k * a.y, k * a.z}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;

    constexpr double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::hypot(x, y, z); }
};

struct FluidProps {
    double boltzmann_constant = 1.380649e-23;  // J/K
    double temperature = 0.0;                  // K
    double dynamic_viscosity = 0.0;            // Pa·s
    double stokes_radius = 0.0;                // m
    double kinematic_viscosity = 0.0;          // m²/s
};

/// Diffusion coefficient of a spherical molecule: k_B·T / (6π·η·R_s).
double stokes_einstein(const FluidProps& fluid);

enum class FlowRegime { Laminar, Turbulent };

inline constexpr double kTurbulentReynolds = 2100.0;

double reynolds(double effective_length, double effective_velocity, double kinematic_viscosity);

/// Turbulent iff Re > 2100 (strict).
FlowRegime classify_flow(double reynolds_number);

struct ChannelParams {
    double diffusion_coefficient = 0.0;  // m²/s
    Vec3 drift;                          // m/s
    Vec3 receiver_center;                // m
    double receiver_radius = 0.0;        // m

    void validate() const;
};

enum class Medium { MDE, MODE, SDE };

struct MediumScenario {
    Medium kind = Medium::MODE;
    double diffusion_coefficient = 0.0;
};

/// Fixed medium → diffusion coefficient table (3.7, 4.5, 4.87 ×10⁻⁹ m²/s).
MediumScenario medium_scenario(Medium kind);
std::string_view to_string(Medium kind);
Medium parse_medium(std::string_view name);

/// Transmitter positions in activation order.
struct NetworkLayout {
    std::vector<Vec3> positions;

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

/// Probability that a molecule released at `source` is inside the receiver
/// sphere `t` seconds later. Closed form of the offset-Gaussian sphere mass.
double arrival_probability(const ChannelParams& channel, Vec3 source, double t);

enum class QuadratureMode {
    Radial,     // 1D integral of the radial (non-central chi) density
    Cartesian,  // nested adaptive 3D integration over the ball; verification only
};

/// Same quantity evaluated by adaptive Gauss–Kronrod quadrature. Independent of
/// the closed form; used as its oracle.
double arrival_probability_quadrature(const ChannelParams& channel, Vec3 source, double t,
                                      QuadratureMode mode = QuadratureMode::Radial);

/// d/dt of arrival_probability: net probability flux through the receiver
/// surface, evaluated in closed form.
double arrival_probability_derivative(const ChannelParams& channel, Vec3 source, double t);

}  // namespace mcvd
