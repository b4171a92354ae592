#pragma once

// Two-real-dimension hidden-variable model for an N-level system.
//
// The ontic state is a pair of basis indices (n, m), drawn with weight R(n, m),
// plus one complex number X = conj(psi_n) psi_m. An event phi then occurs with
//   P(phi | X, n, m) = 1 - |conj(phi_n) phi_m - X|^2 / (2 R(n, m)),
// which sums to |<phi|psi>|^2 for every pair but is a valid probability only
// where |conj(psi_n) psi_m - conj(phi_n) phi_m|^2 < 2 R(n, m) for all (n, m).
//
// Indices are 0-based; index 0 is the ground state.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontic/geometry.hpp"
#include "ontic/rng.hpp"

namespace ontic {

class WeightScheme {
public:
    /// Row-major N x N weights. Every entry must be positive and they must sum
    /// to 1 within 1e-12.
    WeightScheme(std::size_t dim, std::vector<double> weights)
        : dim_(dim), weights_(std::move(weights)) {
        if (dim_ < 2) throw std::invalid_argument("weight scheme needs dimension >= 2");
        if (weights_.size() != dim_ * dim_) {
            throw std::invalid_argument("weight scheme needs N*N entries");
        }
        double total = 0.0;
        for (double r : weights_) {
            if (!(r > 0.0) || !std::isfinite(r)) {
                throw std::invalid_argument("weights must be positive and finite");
            }
            total += r;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("weights must sum to 1, got " + std::to_string(total));
        }
    }

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t n, std::size_t m) const { return weights_[n * dim_ + m]; }
    const std::vector<double>& weights() const { return weights_; }

    /// The common value if every entry is equal, NaN otherwise.
    double constant_value() const {
        for (double r : weights_) {
            if (r != weights_.front()) return std::numeric_limits<double>::quiet_NaN();
        }
        return weights_.front();
    }

private:
    std::size_t dim_;
    std::vector<double> weights_;
};

/// R(n, m) = 1 / N^2.
inline WeightScheme uniform_weights(std::size_t dim) {
    if (dim < 2) throw std::invalid_argument("weight scheme needs dimension >= 2");
    const double r = 1.0 / static_cast<double>(dim * dim);
    return {dim, std::vector<double>(dim * dim, r)};
}

/// pole_mass is spread evenly over the 2N - 1 cells of row 0 and column 0; the
/// remaining 1 - pole_mass is spread evenly over the other (N - 1)^2 cells.
inline WeightScheme ground_weighted(std::size_t dim, double pole_mass) {
    if (dim < 2) throw std::invalid_argument("weight scheme needs dimension >= 2");
    if (!(pole_mass > 0.0 && pole_mass < 1.0)) {
        throw std::invalid_argument("pole_mass must lie in (0, 1)");
    }
    const double edge = pole_mass / static_cast<double>(2 * dim - 1);
    const double bulk = (1.0 - pole_mass) / static_cast<double>((dim - 1) * (dim - 1));
    std::vector<double> w(dim * dim);
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = 0; m < dim; ++m) w[n * dim + m] = (n == 0 || m == 0) ? edge : bulk;
    }
    return {dim, std::move(w)};
}

struct NdimOnticState {
    std::size_t n = 0;
    std::size_t m = 0;
    Complex value{};  // X

    friend bool operator==(const NdimOnticState&, const NdimOnticState&) = default;
};

inline void require_same_dim(const AmplitudeVector& psi, const WeightScheme& r) {
    if (psi.dim() != r.dim()) {
        throw std::invalid_argument("dimension mismatch between state (" + std::to_string(psi.dim()) +
                                    ") and weight scheme (" + std::to_string(r.dim()) + ")");
    }
}

/// Off-diagonal product conj(a_n) a_m.
inline Complex coherence(const AmplitudeVector& a, std::size_t n, std::size_t m) {
    return std::conj(a[n]) * a[m];
}

inline NdimOnticState sample_ndim(const AmplitudeVector& psi, const WeightScheme& r, Rng& rng) {
    require_same_dim(psi, r);
    const auto& w = r.weights();
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t idx = w.size() - 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (u < acc) {
            idx = i;
            break;
        }
    }
    const std::size_t n = idx / r.dim();
    const std::size_t m = idx % r.dim();
    return {n, m, coherence(psi, n, m)};
}

/// Raw model value; negative outside the positivity region.
inline double conditional_probability_ndim(const AmplitudeVector& phi, const NdimOnticState& s,
                                           const WeightScheme& r) {
    require_same_dim(phi, r);
    return 1.0 - std::norm(coherence(phi, s.n, s.m) - s.value) / (2.0 * r(s.n, s.m));
}

struct PositivityResult {
    bool ok = false;
    /// min over (n, m) of 2 R(n, m) - |conj(psi_n) psi_m - conj(phi_n) phi_m|^2
    double margin = 0.0;
    std::size_t worst_n = 0;
    std::size_t worst_m = 0;
};

inline PositivityResult positivity_check(const AmplitudeVector& psi, const AmplitudeVector& phi,
                                         const WeightScheme& r) {
    require_same_dim(psi, phi);
    require_same_dim(psi, r);
    PositivityResult res{true, std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t n = 0; n < r.dim(); ++n) {
        for (std::size_t m = 0; m < r.dim(); ++m) {
            const double gap = 2.0 * r(n, m) - std::norm(coherence(psi, n, m) - coherence(phi, n, m));
            if (gap < res.margin) {
                res.margin = gap;
                res.worst_n = n;
                res.worst_m = m;
            }
        }
    }
    res.ok = res.margin > 0.0;
    return res;
}

/// Componentwise |psi_n - phi_n|^2 < R / 2 for a constant scheme. Amplitudes are
/// compared as given; no global phase is removed.
inline bool sufficient_condition(const AmplitudeVector& psi, const AmplitudeVector& phi,
                                 double r_const) {
    require_same_dim(psi, phi);
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        if (!(std::norm(psi[n] - phi[n]) < 0.5 * r_const)) return false;
    }
    return true;
}

class PositivityViolation : public std::domain_error {
public:
    explicit PositivityViolation(const PositivityResult& r)
        : std::domain_error("positivity violated at (n, m) = (" + std::to_string(r.worst_n) + ", " +
                            std::to_string(r.worst_m) + "), margin " + std::to_string(r.margin)),
          result(r) {}

    PositivityResult result;
};

/// sum_{n,m} R(n, m) P(phi | conj(psi_n) psi_m, n, m) with no positivity gate.
/// Equals |<phi|psi>|^2 for every normalized pair.
inline double weighted_event_sum(const AmplitudeVector& psi, const AmplitudeVector& phi,
                                 const WeightScheme& r) {
    require_same_dim(psi, phi);
    require_same_dim(psi, r);
    double total = 0.0;
    for (std::size_t n = 0; n < r.dim(); ++n) {
        for (std::size_t m = 0; m < r.dim(); ++m) {
            total += r(n, m) * conditional_probability_ndim(phi, {n, m, coherence(psi, n, m)}, r);
        }
    }
    return total;
}

/// Throws PositivityViolation outside the positivity region.
inline double exact_event_probability_ndim(const AmplitudeVector& psi, const AmplitudeVector& phi,
                                           const WeightScheme& r) {
    const auto check = positivity_check(psi, phi, r);
    if (!check.ok) throw PositivityViolation(check);
    return weighted_event_sum(psi, phi, r);
}

struct InRegionPair {
    AmplitudeVector psi;
    AmplitudeVector phi;
    std::size_t rejections = 0;
};

class RegionSamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultPerturbation = 0.1;
inline constexpr std::size_t kDefaultMaxAttempts = 1000;

/// Haar-random psi and a nearby phi (each amplitude moved uniformly within a
/// complex disk of the given radius, then renormalized), resampled until the
/// pair is inside the positivity region.
inline InRegionPair make_in_region_pair(std::size_t dim, const WeightScheme& r, Rng& rng,
                                        double radius = kDefaultPerturbation,
                                        std::size_t max_attempts = kDefaultMaxAttempts) {
    if (r.dim() != dim) throw std::invalid_argument("weight scheme dimension mismatch");
    auto psi = random_amplitudes(dim, rng);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<Complex> amps(psi.amplitudes().begin(), psi.amplitudes().end());
        for (auto& a : amps) {
            const double rad = radius * std::sqrt(rng.uniform());
            const double ang = rng.uniform(0.0, kTwoPi);
            a += std::polar(rad, ang);
        }
        auto phi = AmplitudeVector::normalize(std::move(amps));
        if (positivity_check(psi, phi, r).ok) return {std::move(psi), std::move(phi), attempt};
    }
    throw RegionSamplingError("no in-region partner found after " + std::to_string(max_attempts) +
                              " attempts; perturbation radius " + std::to_string(radius) +
                              " is too large for N = " + std::to_string(dim));
}

}  // namespace ontic
