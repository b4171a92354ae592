#pragma once

// Bloch-sphere and state-vector primitives: coordinate conversions, Born-rule
// reference probabilities and Haar-uniform sampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontic/rng.hpp"

namespace ontic {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kPoleSinThreshold = 1e-14;

/// Unit 3-vector. Used both for prepared states (v) and measured events (w).
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    constexpr BlochVector operator-() const { return {-x, -y, -z}; }
    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

constexpr double dot(const BlochVector& a, const BlochVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr BlochVector cross(const BlochVector& a, const BlochVector& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const BlochVector& v) { return std::sqrt(dot(v, v)); }

inline bool is_unit(const BlochVector& v, double tol = kUnitTolerance) {
    return std::abs(dot(v, v) - 1.0) <= tol;
}

/// Angle between two unit vectors, accurate for nearly (anti)parallel inputs.
inline double angle_between(const BlochVector& a, const BlochVector& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Scales a nonzero vector onto the sphere. Throws for the zero vector.
inline BlochVector normalized(const BlochVector& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    }
    return {v.x / n, v.y / n, v.z / n};
}

/// Zenith theta in [0, pi], azimuth phi in [0, 2 pi).
struct SphericalAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// phi is pinned to 0 when sin(theta) < 1e-14.
inline SphericalAngles to_spherical(const BlochVector& v) {
    const double rho = std::hypot(v.x, v.y);
    const double theta = std::atan2(rho, v.z);
    if (rho < kPoleSinThreshold) {
        return {theta, 0.0};
    }
    double phi = std::atan2(v.y, v.x);
    if (phi < 0.0) {
        phi += kTwoPi;
        if (phi >= kTwoPi) phi = 0.0;
    }
    return {theta, phi};
}

inline BlochVector from_spherical(const SphericalAngles& a) {
    const double s = std::sin(a.theta);
    return {s * std::cos(a.phi), s * std::sin(a.phi), std::cos(a.theta)};
}

/// (1 + v.w) / 2
constexpr double born_probability_qubit(const BlochVector& v, const BlochVector& w) {
    return 0.5 * (1.0 + dot(v, w));
}

using Complex = std::complex<double>;

/// Normalized pure state of an N-level system, N >= 2.
class AmplitudeVector {
public:
    /// Requires N >= 2 and unit norm within 1e-12.
    explicit AmplitudeVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
        if (amps_.size() < 2) {
            throw std::invalid_argument("amplitude vector needs dimension >= 2");
        }
        if (std::abs(norm_squared() - 1.0) > kUnitTolerance) {
            throw std::invalid_argument("amplitude vector is not normalized");
        }
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static AmplitudeVector normalize(std::vector<Complex> amps) {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("cannot normalize a zero amplitude vector");
        }
        const double inv = 1.0 / std::sqrt(s);
        for (auto& a : amps) a *= inv;
        return AmplitudeVector(std::move(amps));
    }

    std::size_t dim() const { return amps_.size(); }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const Complex> amplitudes() const { return amps_; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    friend bool operator==(const AmplitudeVector&, const AmplitudeVector&) = default;

private:
    std::vector<Complex> amps_;
};

inline void require_same_dim(const AmplitudeVector& a, const AmplitudeVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
    }
}

/// <phi|psi>
inline Complex inner_product(const AmplitudeVector& phi, const AmplitudeVector& psi) {
    require_same_dim(phi, psi);
    Complex s{0.0, 0.0};
    for (std::size_t n = 0; n < psi.dim(); ++n) s += std::conj(phi[n]) * psi[n];
    return s;
}

/// |<phi|psi>|^2
inline double born_probability_ndim(const AmplitudeVector& psi, const AmplitudeVector& phi) {
    return std::norm(inner_product(phi, psi));
}

/// Bloch vector <psi|sigma|psi> of a two-level state.
inline BlochVector bloch_from_amplitudes(const AmplitudeVector& psi) {
    if (psi.dim() != 2) throw std::invalid_argument("Bloch vector needs a two-level state");
    const Complex c = std::conj(psi[0]) * psi[1];
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(psi[0]) - std::norm(psi[1])};
}

/// Inverse of bloch_from_amplitudes up to global phase: (cos t/2, e^{i p} sin t/2).
inline AmplitudeVector amplitudes_from_bloch(const BlochVector& v) {
    const auto a = to_spherical(v);
    return AmplitudeVector::normalize(
        {Complex{std::cos(a.theta / 2), 0.0}, std::polar(std::sin(a.theta / 2), a.phi)});
}

/// Haar-uniform point on the sphere: z uniform on [-1, 1], azimuth uniform.
inline BlochVector random_bloch(Rng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double r = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Haar-uniform point restricted to the cap of half-angle max_theta around +z.
inline BlochVector random_bloch_in_cap(Rng& rng, double max_theta) {
    const double zmin = std::cos(max_theta);
    double z = rng.uniform(zmin, 1.0);
    // the cap is open at its rim
    while (z <= zmin) z = rng.uniform(zmin, 1.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double r = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Haar-uniform state: independent standard complex Gaussians, normalized.
inline AmplitudeVector random_amplitudes(std::size_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("amplitude vector needs dimension >= 2");
    std::vector<Complex> amps(n);
    for (auto& a : amps) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = {re, im};
    }
    return AmplitudeVector::normalize(std::move(amps));
}

}  // namespace ontic
