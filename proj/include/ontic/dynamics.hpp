#pragma once

// Rotation of the Bloch vector about the y axis, dv_x/dt = v_z, dv_z/dt = -v_x,
// and a witness that the induced evolution of the zenith-branch ontic state is
// not a function of that ontic state alone.

#include <cmath>
#include <stdexcept>
#include <string>

#include "ontic/cone_model.hpp"
#include "ontic/geometry.hpp"

namespace ontic {

inline BlochVector evolve_bloch(const BlochVector& v, double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    return {c * v.x + s * v.z, v.y, c * v.z - s * v.x};
}

struct SphericalRates {
    double dphi_dt = 0.0;
    double dtheta_dt = 0.0;
};

inline constexpr double kRatePoleGuard = 1e-12;

/// (-cot theta sin phi, cos phi). Throws std::domain_error at the poles.
inline SphericalRates spherical_rates(const SphericalAngles& a) {
    const double s = std::sin(a.theta);
    if (!(std::abs(s) > kRatePoleGuard)) {
        throw std::domain_error("azimuth rate is singular at the poles");
    }
    return {-std::cos(a.theta) / s * std::sin(a.phi), std::cos(a.phi)};
}

/// Centred finite difference of the zenith angle along the exact flow.
inline double centered_theta_rate(const BlochVector& v, double dt) {
    const double fwd = to_spherical(evolve_bloch(v, dt)).theta;
    const double bwd = to_spherical(evolve_bloch(v, -dt)).theta;
    return (fwd - bwd) / (2.0 * dt);
}

struct WitnessReport {
    double theta = 0.0;
    BlochVector state_a;
    BlochVector state_b;
    /// Identical zenith-branch ontic state carried by both preparations.
    QubitOnticState shared_ontic;
    double rate_a = 0.0;
    double rate_b = 0.0;
    double discrepancy = 0.0;
};

inline constexpr double kWitnessMinDiscrepancy = 1e-12;

/// Two states at the same zenith share the ontic state (theta, zenith branch),
/// yet their zenith angles move at different rates under the same rotation.
inline WitnessReport non_markov_witness(double theta, double phi_a, double phi_b) {
    if (!(theta > 0.0 && theta < kConeAngle)) {
        throw std::invalid_argument("witness zenith must lie in (0, theta0), got " + std::to_string(theta));
    }
    if (std::remainder(phi_a - phi_b, kTwoPi) == 0.0) {
        throw std::invalid_argument("witness azimuths must differ modulo 2 pi");
    }
    const auto ra = spherical_rates({theta, phi_a});
    const auto rb = spherical_rates({theta, phi_b});
    const double gap = std::abs(ra.dtheta_dt - rb.dtheta_dt);
    if (!(gap > kWitnessMinDiscrepancy)) {
        throw std::invalid_argument("witness azimuths have equal cosines; no discrepancy to show");
    }
    return {theta,
            from_spherical({theta, phi_a}),
            from_spherical({theta, phi_b}),
            {theta, Branch::Zenith},
            ra.dtheta_dt,
            rb.dtheta_dt,
            gap};
}

}  // namespace ontic
