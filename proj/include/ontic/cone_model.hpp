#pragma once

// One-dimensional hidden-variable model of a qubit, valid for prepared states
// whose zenith angle is below theta0 = arccos(3/5).
//
// A state v = (theta, phi) is represented by the ontic pair (x, n):
//   n = 0 (azimuth branch) with probability sin(theta), x = phi
//   n = 1 (zenith branch)  with probability 1 - sin(theta), x = theta
// An event w with w_z > 0 then occurs with
//   P(w|x,0) = 1 + (w_x cos x + w_y sin x - sqrt(1 - w_z^2)) / 2
//   P(w|x,1) = (1 + (sqrt(1 - w_z^2) - 2) sin x + w_z cos x) / (2 - 2 sin x)
// and events with w_z < 0 are the complements of -w.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontic/geometry.hpp"
#include "ontic/rng.hpp"

namespace ontic {

/// Half-aperture of the validity cone, arccos(3/5) ~ 53.13 degrees.
inline const double kConeAngle = std::acos(3.0 / 5.0);

inline constexpr double kZenithDenominatorGuard = 1e-12;

enum class Branch : std::uint8_t { Azimuth = 0, Zenith = 1 };

struct QubitOnticState {
    double x = 0.0;
    Branch n = Branch::Zenith;

    friend bool operator==(const QubitOnticState&, const QubitOnticState&) = default;
};

/// Raised when a zenith-branch ontic state lies outside the validity cone.
class OutOfConeError : public std::domain_error {
public:
    explicit OutOfConeError(const std::string& what) : std::domain_error(what) {}
};

inline QubitOnticState sample_ontic(const BlochVector& v, Rng& rng) {
    const auto a = to_spherical(v);
    if (rng.bernoulli(std::sin(a.theta))) return {a.phi, Branch::Azimuth};
    return {a.theta, Branch::Zenith};
}

namespace detail {

inline double transverse(const BlochVector& w) {
    return std::sqrt(std::max(0.0, (1.0 - w.z) * (1.0 + w.z)));
}

inline double upper_hemisphere_formula(const BlochVector& w, const QubitOnticState& s) {
    const double r = transverse(w);
    const double sx = std::sin(s.x);
    const double cx = std::cos(s.x);
    if (s.n == Branch::Azimuth) return 1.0 + 0.5 * (w.x * cx + w.y * sx - r);
    return (1.0 + (r - 2.0) * sx + w.z * cx) / (2.0 - 2.0 * sx);
}

}  // namespace detail

/// Conditional probability without the cone check. Events with w_z < 0 are
/// evaluated as complements; w_z = 0 uses the direct formula. Outside the cone
/// the value can leave [0, 1]; positivity sweeps use this to probe the boundary.
inline double conditional_probability_unchecked(const BlochVector& w, const QubitOnticState& s) {
    if (w.z < 0.0) return 1.0 - detail::upper_hemisphere_formula(-w, s);
    return detail::upper_hemisphere_formula(w, s);
}

/// Throws OutOfConeError for a zenith-branch x >= theta0 (or sin x at 1).
inline void require_in_cone(const QubitOnticState& s) {
    if (s.n != Branch::Zenith) return;
    if (!(s.x < kConeAngle)) {
        throw OutOfConeError("zenith ontic state x = " + std::to_string(s.x) +
                             " is outside the validity cone (x < " + std::to_string(kConeAngle) + ")");
    }
    if (std::sin(s.x) >= 1.0 - kZenithDenominatorGuard) {
        throw OutOfConeError("zenith ontic state has a vanishing denominator");
    }
}

inline double conditional_probability(const BlochVector& w, const QubitOnticState& s) {
    require_in_cone(s);
    return conditional_probability_unchecked(w, s);
}

/// Ensemble probability of w for a state inside the cone: the weighted sum over
/// the two delta components of the ontic distribution.
inline double exact_event_probability(const BlochVector& v, const BlochVector& w) {
    const auto a = to_spherical(v);
    if (!(a.theta < kConeAngle)) {
        throw OutOfConeError("prepared state zenith " + std::to_string(a.theta) +
                             " is outside the validity cone");
    }
    const double s = std::sin(a.theta);
    return s * conditional_probability(w, {a.phi, Branch::Azimuth}) +
           (1.0 - s) * conditional_probability(w, {a.theta, Branch::Zenith});
}

/// Minimum of the azimuth-branch probability over x and over the transverse
/// direction of w at fixed w_z: 1 - sqrt(1 - w_z^2).
inline double positivity_minimum_n0(double wz) {
    return 1.0 - std::sqrt(std::max(0.0, (1.0 - wz) * (1.0 + wz)));
}

/// Deterministic, nearly uniform set of n points on the sphere.
inline std::vector<BlochVector> fibonacci_sphere(std::size_t n) {
    std::vector<BlochVector> pts;
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double r = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
        const double phi = golden * static_cast<double>(i);
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
}

struct Extremum {
    double value = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    BlochVector w{};
};

struct BranchSweep {
    Branch branch = Branch::Zenith;
    double x_begin = 0.0;
    double x_end = 0.0;
    std::size_t evaluations = 0;
    Extremum min;
    Extremum max;
};

struct PositivityReport {
    BranchSweep azimuth;
    BranchSweep zenith;

    double global_min() const { return std::min(azimuth.min.value, zenith.min.value); }
    double global_max() const { return std::max(azimuth.max.value, zenith.max.value); }
};

/// Raw conditional probabilities on x in [x_begin, x_end) with the given step,
/// against every event in `events`.
inline BranchSweep sweep_branch(Branch branch, double x_begin, double x_end, double step,
                                const std::vector<BlochVector>& events) {
    if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (events.empty()) throw std::invalid_argument("sweep needs at least one event");
    BranchSweep out{branch, x_begin, x_end, 0, {}, {}};
    out.min.value = std::numeric_limits<double>::infinity();
    out.max.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0;; ++i) {
        const double x = x_begin + static_cast<double>(i) * step;
        if (!(x < x_end)) break;
        const QubitOnticState s{x, branch};
        for (const auto& w : events) {
            const double p = conditional_probability_unchecked(w, s);
            ++out.evaluations;
            if (p < out.min.value) out.min = {p, x, w};
            if (p > out.max.value) out.max = {p, x, w};
        }
    }
    return out;
}

/// Sweeps both branches over their validity domains: x in [0, 2 pi) for the
/// azimuth branch, x in [0, theta0) for the zenith branch.
inline PositivityReport sweep_positivity(double x_grid_step, std::size_t n_event_points) {
    if (n_event_points < 1) throw std::invalid_argument("sweep needs at least one event");
    const auto events = fibonacci_sphere(n_event_points);
    return {sweep_branch(Branch::Azimuth, 0.0, kTwoPi, x_grid_step, events),
            sweep_branch(Branch::Zenith, 0.0, kConeAngle, x_grid_step, events)};
}

}  // namespace ontic
