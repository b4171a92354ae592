#pragma once

// Extension of the cone model to the whole Bloch sphere.
//
// Twelve reference axes at the vertices of an icosahedron split the sphere into
// pentagonal patches. Every point lies within theta1 = arcsin(L / sqrt(3)) of its
// nearest vertex, where L is the edge length, and theta1 < theta0. The preparer
// rotates the state so that its nearest vertex becomes +z, runs the cone model,
// and sends (x, n, k); the measurer applies the same rotation to the event.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>

#include "ontic/cone_model.hpp"
#include "ontic/geometry.hpp"
#include "ontic/rng.hpp"

namespace ontic {

inline constexpr std::size_t kPatchCount = 12;

/// Edge length of the icosahedron inscribed in the unit sphere, 4 / sqrt(10 + 2 sqrt 5).
inline const double kIcosaEdge = 4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0));

/// Covering radius: largest angle from any point to its nearest vertex.
inline const double kCoveringAngle = std::asin(kIcosaEdge / std::sqrt(3.0));

using Rotation = Eigen::Matrix3d;

inline BlochVector apply(const Rotation& r, const BlochVector& v) {
    return {r(0, 0) * v.x + r(0, 1) * v.y + r(0, 2) * v.z,
            r(1, 0) * v.x + r(1, 1) * v.y + r(1, 2) * v.z,
            r(2, 0) * v.x + r(2, 1) * v.y + r(2, 2) * v.z};
}

/// Patch index, 1..12. Patch 1 is centred on +z, patch 12 on -z.
using PatchIndex = std::uint8_t;

struct IcosaFrame {
    std::array<BlochVector, kPatchCount> vertices;
    /// rotations[k - 1] maps vertices[k - 1] onto +z.
    std::array<Rotation, kPatchCount> rotations;

    const BlochVector& vertex(PatchIndex k) const { return vertices.at(k - 1); }
    const Rotation& rotation(PatchIndex k) const { return rotations.at(k - 1); }
};

struct PatchedOnticState {
    double x = 0.0;
    Branch n = Branch::Zenith;
    PatchIndex k = 1;

    QubitOnticState ontic() const { return {x, n}; }
    friend bool operator==(const PatchedOnticState&, const PatchedOnticState&) = default;
};

namespace detail {

/// Minimal-angle rotation taking unit vector a onto +z; a half turn about x for -z.
inline Rotation rotation_to_pole(const BlochVector& a) {
    const BlochVector pole{0.0, 0.0, 1.0};
    const BlochVector axis = cross(a, pole);
    const double s = norm(axis);
    const double c = dot(a, pole);
    if (s < 1e-15) {
        if (c > 0.0) return Rotation::Identity();
        return Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d::UnitX()).toRotationMatrix();
    }
    const Eigen::Vector3d u(axis.x / s, axis.y / s, axis.z / s);
    return Eigen::AngleAxisd(std::atan2(s, c), u).toRotationMatrix();
}

}  // namespace detail

/// Vertices in polar orientation: +z, an upper ring of five at zenith
/// arccos(1/sqrt 5) with azimuths 2 pi j / 5, a lower ring offset by pi / 5, -z.
inline IcosaFrame build_frame() {
    IcosaFrame f;
    const double ring = std::atan(2.0);  // arccos(1 / sqrt 5)
    f.vertices[0] = {0.0, 0.0, 1.0};
    for (int j = 0; j < 5; ++j) {
        const double az = 2.0 * std::numbers::pi * j / 5.0;
        f.vertices[1 + j] = from_spherical({ring, az});
        f.vertices[6 + j] = from_spherical({std::numbers::pi - ring, az + std::numbers::pi / 5.0});
    }
    f.vertices[11] = {0.0, 0.0, -1.0};
    for (std::size_t k = 0; k < kPatchCount; ++k) {
        f.rotations[k] = detail::rotation_to_pole(f.vertices[k]);
    }
    return f;
}

/// Vertex with the largest scalar product with v; lowest index wins ties.
inline PatchIndex assign_patch(const IcosaFrame& frame, const BlochVector& v) {
    std::size_t best = 0;
    double best_dot = dot(frame.vertices[0], v);
    for (std::size_t k = 1; k < kPatchCount; ++k) {
        const double d = dot(frame.vertices[k], v);
        if (d > best_dot) {
            best_dot = d;
            best = k;
        }
    }
    return static_cast<PatchIndex>(best + 1);
}

inline PatchedOnticState prepare(const IcosaFrame& frame, const BlochVector& v, Rng& rng) {
    const PatchIndex k = assign_patch(frame, v);
    const auto s = sample_ontic(apply(frame.rotation(k), v), rng);
    return {s.x, s.n, k};
}

inline double measure_probability(const IcosaFrame& frame, const BlochVector& w,
                                  const PatchedOnticState& s) {
    if (s.k < 1 || s.k > kPatchCount) throw std::invalid_argument("patch index out of range");
    return conditional_probability(apply(frame.rotation(s.k), w), s.ontic());
}

/// Born probability reconstructed by summing the model over its two ontic
/// states in the rotated frame. Valid for every pair on the sphere.
inline double extended_exact_probability(const IcosaFrame& frame, const BlochVector& v,
                                         const BlochVector& w) {
    const Rotation& r = frame.rotation(assign_patch(frame, v));
    return exact_event_probability(apply(r, v), apply(r, w));
}

/// 1 if the event w occurs, 0 if its complement -w occurs.
inline int simulate_outcome(const IcosaFrame& frame, const BlochVector& w,
                            const PatchedOnticState& s, Rng& rng) {
    return rng.bernoulli(measure_probability(frame, w, s)) ? 1 : 0;
}

}  // namespace ontic
