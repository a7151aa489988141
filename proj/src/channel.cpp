#include "mcvd/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mcvd/errors.hpp"

namespace mcvd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

// Below this offset (relative to the receiver radius) the closed form's 1/m
// factor is replaced by its even Taylor expansion.
constexpr double kSeriesOffset = 1e-6;

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << what << ": elapsed time must be positive and finite, got " << t;
        throw DomainError(os.str());
    }
}

// Offset of the plume center from the receiver center after t seconds.
Vec3 plume_offset(const ChannelParams& ch, Vec3 source, double t) {
    return source + t * ch.drift - ch.receiver_center;
}

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kQuadTol = 1e-13;
constexpr std::size_t kQuadMaxIntervals = 4000;

struct Piece {
    double a, b, value, error;
};

// One 31-point Kronrod panel with its |K − G| error estimate.
template <class F>
Piece kronrod_panel(F& f, double a, double b) {
    double err = 0.0;
    const double v = Kronrod::integrate(f, a, b, 0, 0.0, &err);
    // Boost reports the error of the rule mapped to [−1, 1].
    return {a, b, v, err * 0.5 * (b - a)};
}

// Globally adaptive integral of f over [a, b], initially split at the
// interior breakpoints: the panel with the largest error is bisected until
// the summed error is below tol·|integral|. With strict == false a result
// that misses the target is returned as is.
template <class F>
double integrate_segments(F&& f, double a, double b, std::vector<double> cuts, const char* what,
                          bool strict = true, double tol = kQuadTol) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::erase_if(cuts, [&](double c) { return !(c >= a && c <= b); });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };
    std::vector<Piece> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(kronrod_panel(f, cuts[i], cuts[i + 1]));
        total += heap.back().value;
        total_err += heap.back().error;
    }
    std::make_heap(heap.begin(), heap.end(), by_error);
    while (total_err > tol * std::abs(total) && total_err > 0.0 && heap.size() < kQuadMaxIntervals) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Piece worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        for (const Piece& p : {kronrod_panel(f, worst.a, mid), kronrod_panel(f, mid, worst.b)}) {
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end(), by_error);
        }
        // Re-sum rather than update incrementally to avoid drift.
        total = 0.0;
        total_err = 0.0;
        for (const Piece& p : heap) {
            total += p.value;
            total_err += p.error;
        }
    }
    if (!std::isfinite(total) || (strict && total_err > tol * std::abs(total) && total_err > 0.0)) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (estimate " << total << ", error " << total_err << ")";
        throw NumericError(os.str());
    }
    return total;
}

std::vector<double> gaussian_cuts(double center, double sigma) {
    std::vector<double> cuts{center};
    for (double k : {1.0, 3.0, 6.0, 10.0}) {
        cuts.push_back(center - k * sigma);
        cuts.push_back(center + k * sigma);
    }
    return cuts;
}

}  // namespace

double stokes_einstein(const FluidProps& f) {
    if (!(f.boltzmann_constant > 0 && f.temperature > 0 && f.dynamic_viscosity > 0 &&
          f.stokes_radius > 0)) {
        throw DomainError("stokes_einstein: all fluid properties must be strictly positive");
    }
    return f.boltzmann_constant * f.temperature /
           (6.0 * kPi * f.dynamic_viscosity * f.stokes_radius);
}

double reynolds(double effective_length, double effective_velocity, double kinematic_viscosity) {
    if (!(kinematic_viscosity > 0.0)) {
        throw DomainError("reynolds: kinematic viscosity must be positive");
    }
    return effective_length * effective_velocity / kinematic_viscosity;
}

FlowRegime classify_flow(double re) {
    return re > kTurbulentReynolds ? FlowRegime::Turbulent : FlowRegime::Laminar;
}

void ChannelParams::validate() const {
    if (!(diffusion_coefficient > 0.0) || !std::isfinite(diffusion_coefficient)) {
        throw DomainError("channel: diffusion coefficient must be positive");
    }
    if (!(receiver_radius > 0.0) || !std::isfinite(receiver_radius)) {
        throw DomainError("channel: receiver radius must be positive");
    }
}

MediumScenario medium_scenario(Medium kind) {
    switch (kind) {
        case Medium::MDE: return {kind, 3.7e-9};
        case Medium::MODE: return {kind, 4.5e-9};
        case Medium::SDE: return {kind, 4.87e-9};
    }
    throw DomainError("unknown medium");
}

std::string_view to_string(Medium kind) {
    switch (kind) {
        case Medium::MDE: return "MDE";
        case Medium::MODE: return "MODE";
        case Medium::SDE: return "SDE";
    }
    return "?";
}

Medium parse_medium(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "MDE") return Medium::MDE;
    if (up == "MODE") return Medium::MODE;
    if (up == "SDE") return Medium::SDE;
    throw DomainError("unknown medium '" + std::string(name) + "' (expected MDE, MODE or SDE)");
}

void NetworkLayout::validate() const {
    if (positions.empty()) throw DomainError("layout: at least one transmitter is required");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if (positions[i] == positions[j]) {
                throw DomainError("layout: transmitter positions must be distinct");
            }
        }
    }
}

double arrival_probability(const ChannelParams& ch, Vec3 source, double t) {
    require_positive_time(t, "arrival_probability");
    const double d = ch.receiver_radius;
    const double m = plume_offset(ch, source, t).norm();
    const double q = 4.0 * ch.diffusion_coefficient * t;  // 2·(per-axis variance)
    const double sq = std::sqrt(q);

    double p;
    if (m < kSeriesOffset * d) {
        // Mass of a centered Gaussian in the ball plus the m² correction
        // (Laplacian of the ball mass / 6).
        const double s2 = 0.5 * q;
        const double s = std::sqrt(s2);
        const double g = std::exp(-d * d / q);
        const double p0 = std::erf(d / sq) - 2.0 * d / (sq * kSqrtPi) * g;
        const double p2 = -(d * d * d) / (6.0 * s2 * s2 * s) * std::sqrt(2.0 / kPi) * g;
        p = p0 + p2 * m * m;
    } else {
        double erf_sum;
        if (m > d) {
            erf_sum = std::erfc((m - d) / sq) - std::erfc((m + d) / sq);
        } else {
            erf_sum = std::erf((d - m) / sq) + std::erf((d + m) / sq);
        }
        const double near = std::exp(-(d - m) * (d - m) / q);
        const double gap = -std::expm1(-4.0 * d * m / q);  // 1 − e^{-4dm/q}
        p = 0.5 * erf_sum - sq / (2.0 * m * kSqrtPi) * near * gap;
    }
    return std::clamp(p, 0.0, 1.0);
}

double arrival_probability_quadrature(const ChannelParams& ch, Vec3 source, double t,
                                      QuadratureMode mode) {
    require_positive_time(t, "arrival_probability_quadrature");
    ch.validate();
    const double d = ch.receiver_radius;
    const Vec3 c = plume_offset(ch, source, t);
    const double s2 = 2.0 * ch.diffusion_coefficient * t;
    const double s = std::sqrt(s2);

    if (mode == QuadratureMode::Radial) {
        const double m = c.norm();
        const double norm = 1.0 / (s * std::sqrt(2.0 * kPi));
        auto density = [&](double r) -> double {
            if (m == 0.0) {
                return 2.0 * r * r / s2 * norm * std::exp(-r * r / (2.0 * s2));
            }
            const double near = std::exp(-(r - m) * (r - m) / (2.0 * s2));
            return r / m * norm * near * -std::expm1(-2.0 * r * m / s2);
        };
        const double p = integrate_segments(density, 0.0, d, gaussian_cuts(m, s),
                                            "arrival_probability_quadrature");
        return std::clamp(p, 0.0, 1.0);
    }

    // Cartesian: x-integral in closed form (Gaussian CDF); y and z adaptive
    // after the substitutions z = d·sin φ, y = h(z)·sin θ, which remove the
    // square-root edges of the ball.
    const double root2s = std::sqrt(2.0) * s;
    const double gauss_norm = 1.0 / (2.0 * kPi * s2);
    const double half_pi = 0.5 * kPi;
    auto angle_cuts = [&](double center, double radius) {
        std::vector<double> cuts;
        for (double x : gaussian_cuts(center, s)) {
            cuts.push_back(std::asin(std::clamp(x / radius, -1.0, 1.0)));
        }
        return cuts;
    };
    auto slab = [&](double phi) {
        const double z = d * std::sin(phi);
        const double hz = d * std::cos(phi);
        if (!(hz > 0.0)) return 0.0;
        auto fy = [&](double theta) {
            const double y = hz * std::sin(theta);
            const double half = hz * std::cos(theta);
            const double ax = std::abs(c.x);
            const double xmass = ax > half ? 0.5 * (std::erfc((ax - half) / root2s) - std::erfc((ax + half) / root2s))
                                           : 0.5 * (std::erf((half - c.x) / root2s) + std::erf((half + c.x) / root2s));
            return std::exp(-((y - c.y) * (y - c.y) + (z - c.z) * (z - c.z)) / (2.0 * s2)) * xmass * half;
        };
        // Inner slabs are checked through the outer integral; a negligible
        // slab need not meet the relative target on its own.
        return hz * integrate_segments(fy, -half_pi, half_pi, angle_cuts(c.y, hz),
                                       "arrival_probability_quadrature[y]", false, 1e-14);
    };
    // The outer tolerance sits above the inner integrals' noise floor.
    const double p = gauss_norm * integrate_segments(slab, -half_pi, half_pi, angle_cuts(c.z, d),
                                                     "arrival_probability_quadrature[z]", true, 1e-11);
    return std::clamp(p, 0.0, 1.0);
}

double arrival_probability_derivative(const ChannelParams& ch, Vec3 source, double t) {
    require_positive_time(t, "arrival_probability_derivative");
    const double omega = ch.diffusion_coefficient;
    const double d = ch.receiver_radius;
    const Vec3 c = plume_offset(ch, source, t);
    const double m = c.norm();
    const double s2 = 2.0 * omega * t;
    const double kappa = d * m / s2;

    // Surface flux (Ω∇ρ − uρ)·n integrated over the sphere. With x = cos θ
    // measured from the offset direction, the angular integrals are
    //   I0 = ∫ e^{κx} dx = 2 sinh κ / κ,  I1 = ∫ x e^{κx} dx,
    // each carried with the common factor e^{-(d²+m²)/2s²}. J1 = I1 / κ.
    double i0;
    double j1;
    if (kappa < 0.1) {
        const double e = std::exp(-(d * d + m * m) / (2.0 * s2));
        const double k2 = kappa * kappa;
        i0 = 2.0 * e * (1.0 + k2 / 6.0 * (1.0 + k2 / 20.0 * (1.0 + k2 / 42.0)));
        j1 = 2.0 * e * (1.0 / 3.0 + k2 / 30.0 + k2 * k2 / 840.0 + k2 * k2 * k2 / 45360.0);
    } else {
        const double a = std::exp(-(d - m) * (d - m) / (2.0 * s2));
        const double diff = a * -std::expm1(-2.0 * kappa);  // e^{..}·2 sinh κ
        const double sum = a * (1.0 + std::exp(-2.0 * kappa));  // e^{..}·2 cosh κ
        i0 = diff / kappa;
        j1 = (sum / kappa - diff / (kappa * kappa)) / kappa;
    }
    const double flux = -(omega * d / s2) * i0 + (omega * m * kappa / s2) * j1 -
                        ch.drift.dot(c) * (d / s2) * j1;
    return std::pow(2.0 * kPi * s2, -1.5) * 2.0 * kPi * d * d * flux;
}

}  // namespace mcvd
