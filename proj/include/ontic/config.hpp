#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "ontic/ndim_model.hpp"

namespace ontic {

enum class ExperimentKind { ExactQubit, McQubit, ExactNdim, McNdim, PositivitySweep, Covering, Witness };

/// Where prepared qubit states are drawn from: the whole sphere (patched model)
/// or the validity cone (base model, no patching).
enum class Region { Sphere, Cone };

enum class SchemeKind { Uniform, Ground };

namespace detail {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::string_view, N>& names, const char* what) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) return static_cast<E>(i);
    }
    throw std::invalid_argument(fmt::format("unknown {} '{}'", what, text));
}

inline constexpr std::array<std::string_view, 7> kKindNames{
    "exact-qubit", "mc-qubit", "exact-ndim", "mc-ndim", "positivity-sweep", "covering", "witness"};
inline constexpr std::array<std::string_view, 2> kRegionNames{"sphere", "cone"};
inline constexpr std::array<std::string_view, 2> kSchemeNames{"uniform", "ground"};

}  // namespace detail

inline std::string_view to_string(ExperimentKind k) { return detail::kKindNames[static_cast<std::size_t>(k)]; }
inline std::string_view to_string(Region r) { return detail::kRegionNames[static_cast<std::size_t>(r)]; }
inline std::string_view to_string(SchemeKind s) { return detail::kSchemeNames[static_cast<std::size_t>(s)]; }

inline ExperimentKind parse_kind(std::string_view s) {
    return detail::parse_enum<ExperimentKind>(s, detail::kKindNames, "experiment kind");
}
inline Region parse_region(std::string_view s) { return detail::parse_enum<Region>(s, detail::kRegionNames, "region"); }
inline SchemeKind parse_scheme(std::string_view s) {
    return detail::parse_enum<SchemeKind>(s, detail::kSchemeNames, "weight scheme");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ExactQubit;
    /// Monte Carlo rounds per case; total draws for the covering check.
    std::uint64_t samples = 1'000'000;
    /// Number of (state, event) cases.
    std::uint64_t pairs = 100;
    Region region = Region::Sphere;

    std::size_t dim = 2;
    SchemeKind scheme = SchemeKind::Uniform;
    double pole_mass = 0.5;
    double perturbation = kDefaultPerturbation;

    double grid_step = 1e-3;
    std::uint64_t events = 10'000;

    double theta = 0.5;
    double phi_a = 0.0;
    double phi_b = std::numbers::pi / 2;
    double fd_step = 1e-4;

    std::uint64_t seed = 0;
    /// Parallelism only; never affects results and is not echoed in reports.
    unsigned workers = 1;

    WeightScheme weight_scheme() const {
        return scheme == SchemeKind::Uniform ? uniform_weights(dim) : ground_weighted(dim, pole_mass);
    }

    /// Throws std::invalid_argument describing the first bad field.
    void validate() const {
        if (samples < 1) throw std::invalid_argument("samples must be >= 1");
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        switch (kind) {
            case ExperimentKind::ExactQubit:
            case ExperimentKind::McQubit:
                if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
                break;
            case ExperimentKind::ExactNdim:
            case ExperimentKind::McNdim:
                if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
                if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
                if (!(perturbation > 0.0)) throw std::invalid_argument("perturbation must be positive");
                (void)weight_scheme();
                break;
            case ExperimentKind::PositivitySweep:
                if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
                if (events < 1) throw std::invalid_argument("events must be >= 1");
                break;
            case ExperimentKind::Covering:
                break;
            case ExperimentKind::Witness:
                if (!(fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
                break;
        }
    }

    /// Canonical key=value echo of every result-affecting field, one per line.
    std::string echo() const {
        std::string out;
        auto put = [&out](std::string_view key, const auto& value) {
            out += fmt::format("{}={}\n", key, value);
        };
        auto put_real = [&out](std::string_view key, double value) {
            out += fmt::format("{}={:.17g}\n", key, value);
        };
        put("kind", to_string(kind));
        put("samples", samples);
        put("pairs", pairs);
        put("region", to_string(region));
        put("dim", dim);
        put("scheme", to_string(scheme));
        put_real("pole_mass", pole_mass);
        put_real("perturbation", perturbation);
        put_real("grid_step", grid_step);
        put("events", events);
        put_real("theta", theta);
        put_real("phi_a", phi_a);
        put_real("phi_b", phi_b);
        put_real("fd_step", fd_step);
        put("seed", seed);
        return out;
    }
};

}  // namespace ontic
