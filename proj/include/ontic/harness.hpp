#pragma once

// Verification experiments: exact identity suites, Monte Carlo frequency tests
// and positivity sweeps, producing ExperimentReport values.
//
// Each case draws from its own generator, Rng::for_case(seed, case_index), and
// results are stored by case index, so a report depends only on the config and
// not on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "ontic/cone_model.hpp"
#include "ontic/config.hpp"
#include "ontic/dynamics.hpp"
#include "ontic/geometry.hpp"
#include "ontic/icosa.hpp"
#include "ontic/ndim_model.hpp"
#include "ontic/report.hpp"
#include "ontic/rng.hpp"
#include "ontic/stats.hpp"

namespace ontic {

// Tolerances of the pass/fail criteria.
inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kZThreshold = 5.0;
/// Monte Carlo cases allowed outside |z| <= 5, per hundred cases.
inline constexpr std::uint64_t kZFailuresPerHundred = 1;
inline constexpr double kRangeTolerance = 1e-12;
inline constexpr double kCoveringTolerance = 1e-9;
inline constexpr double kEdgeTolerance = 1e-9;
inline constexpr double kRateTolerance = 1e-7;
inline constexpr double kConeProbeOffset = 0.05;
inline constexpr std::uint64_t kCoveringChunk = 10'000;

struct CaseResult {
    CaseRecord record;
    std::uint64_t regenerated = 0;
};

/// Runs fn(i) for i in [0, count) on up to `workers` threads; results are in
/// index order. If any case throws, the exception of the lowest failing index
/// is rethrown.
template <class Fn>
std::vector<CaseResult> run_cases(std::uint64_t count, unsigned workers, Fn&& fn) {
    std::vector<CaseResult> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
                out[i].record.index = i;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(workers, count)));
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

namespace detail {

inline void fill_frequency(CaseRecord& rec, std::uint64_t hits, std::uint64_t samples) {
    rec.freq = static_cast<double>(hits) / static_cast<double>(samples);
    if (rec.born_p > 0.0 && rec.born_p < 1.0) {
        rec.z = stats::z_score(rec.freq, rec.born_p, samples);
    } else {
        rec.exact_match = (rec.born_p <= 0.0) ? hits == 0 : hits == samples;
    }
}

inline void append_bloch(std::vector<double>& xs, const BlochVector& v) {
    xs.insert(xs.end(), {v.x, v.y, v.z});
}

inline void append_amplitudes(std::vector<double>& xs, const AmplitudeVector& a) {
    for (const auto& c : a.amplitudes()) xs.insert(xs.end(), {c.real(), c.imag()});
}

inline std::vector<std::string> amplitude_columns(std::string_view name, std::size_t dim) {
    std::vector<std::string> cols;
    for (std::size_t n = 0; n < dim; ++n) {
        cols.push_back(fmt::format("{}{}_re", name, n));
        cols.push_back(fmt::format("{}{}_im", name, n));
    }
    return cols;
}

inline BlochVector draw_state(Region region, Rng& rng) {
    return region == Region::Cone ? random_bloch_in_cap(rng, kConeAngle) : random_bloch(rng);
}

inline void add_frequency_criteria(ExperimentReport& rep) {
    std::uint64_t z_fail = 0;
    std::uint64_t degenerate_fail = 0;
    double max_abs_z = 0.0;
    for (const auto& c : rep.cases) {
        if (c.exact_match) {
            if (!*c.exact_match) ++degenerate_fail;
        } else {
            max_abs_z = std::max(max_abs_z, std::abs(c.z));
            if (!(std::abs(c.z) <= kZThreshold)) ++z_fail;
        }
    }
    const std::uint64_t allowed = rep.cases.size() / 100 * kZFailuresPerHundred;
    rep.metrics.push_back({"max_abs_z", max_abs_z});
    rep.metrics.push_back({"z_failures", static_cast<double>(z_fail)});
    rep.criteria.push_back({"z_within_5", z_fail <= allowed,
                            fmt::format("{} of {} cases with |z| > {} (allowed {})", z_fail,
                                        rep.cases.size(), kZThreshold, allowed)});
    rep.criteria.push_back({"degenerate_exact", degenerate_fail == 0,
                            fmt::format("{} degenerate cases mismatched", degenerate_fail)});
}

inline void add_exact_criterion(ExperimentReport& rep, std::string name, double max_err) {
    rep.metrics.push_back({"max_abs_error", max_err});
    rep.criteria.push_back({std::move(name), max_err < kExactTolerance,
                            fmt::format("max |exact - born| = {:.3e}", max_err)});
}

inline double max_abs_error(const ExperimentReport& rep) {
    double m = 0.0;
    for (const auto& c : rep.cases) m = std::max(m, std::abs(c.exact_p - c.born_p));
    return m;
}

inline void exact_qubit(ExperimentReport& rep, const IcosaFrame& frame) {
    const auto& cfg = rep.config;
    rep.input_columns = {"vx", "vy", "vz", "wx", "wy", "wz", "patch"};
    auto results = run_cases(cfg.pairs, cfg.workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_case(cfg.seed, i);
        const BlochVector v = draw_state(cfg.region, rng);
        const BlochVector w = random_bloch(rng);
        CaseResult res;
        auto& rec = res.record;
        append_bloch(rec.inputs, v);
        append_bloch(rec.inputs, w);
        if (cfg.region == Region::Cone) {
            rec.inputs.push_back(kNaN);
            rec.exact_p = exact_event_probability(v, w);
        } else {
            rec.inputs.push_back(assign_patch(frame, v));
            rec.exact_p = extended_exact_probability(frame, v, w);
        }
        rec.born_p = born_probability_qubit(v, w);
        return res;
    });
    for (auto& r : results) rep.cases.push_back(std::move(r.record));
    add_exact_criterion(rep, "born_identity", max_abs_error(rep));
}

inline void mc_qubit(ExperimentReport& rep, const IcosaFrame& frame) {
    const auto& cfg = rep.config;
    rep.input_columns = {"vx", "vy", "vz", "wx", "wy", "wz", "patch"};
    auto results = run_cases(cfg.pairs, cfg.workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_case(cfg.seed, i);
        const BlochVector v = draw_state(cfg.region, rng);
        const BlochVector w = random_bloch(rng);
        CaseResult res;
        auto& rec = res.record;
        append_bloch(rec.inputs, v);
        append_bloch(rec.inputs, w);
        std::uint64_t hits = 0;
        if (cfg.region == Region::Cone) {
            rec.inputs.push_back(kNaN);
            rec.exact_p = exact_event_probability(v, w);
            for (std::uint64_t s = 0; s < cfg.samples; ++s) {
                const auto ontic = sample_ontic(v, rng);
                hits += rng.bernoulli(conditional_probability(w, ontic)) ? 1 : 0;
            }
        } else {
            rec.inputs.push_back(assign_patch(frame, v));
            rec.exact_p = extended_exact_probability(frame, v, w);
            for (std::uint64_t s = 0; s < cfg.samples; ++s) {
                const auto ontic = prepare(frame, v, rng);
                hits += static_cast<std::uint64_t>(simulate_outcome(frame, w, ontic, rng));
            }
        }
        rec.born_p = born_probability_qubit(v, w);
        fill_frequency(rec, hits, cfg.samples);
        return res;
    });
    for (auto& r : results) rep.cases.push_back(std::move(r.record));
    rep.metrics.push_back({"max_abs_exact_error", max_abs_error(rep)});
    add_frequency_criteria(rep);
}

inline void exact_ndim(ExperimentReport& rep) {
    const auto& cfg = rep.config;
    const WeightScheme scheme = cfg.weight_scheme();
    rep.input_columns = amplitude_columns("psi", cfg.dim);
    for (auto& c : amplitude_columns("phi", cfg.dim)) rep.input_columns.push_back(std::move(c));
    for (const char* c : {"margin", "min_conditional", "max_conditional", "ungated_error"}) {
        rep.input_columns.emplace_back(c);
    }
    auto results = run_cases(cfg.pairs, cfg.workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_case(cfg.seed, i);
        auto pair = make_in_region_pair(cfg.dim, scheme, rng, cfg.perturbation);
        CaseResult res;
        res.regenerated = pair.rejections;
        auto& rec = res.record;
        append_amplitudes(rec.inputs, pair.psi);
        append_amplitudes(rec.inputs, pair.phi);
        rec.inputs.push_back(positivity_check(pair.psi, pair.phi, scheme).margin);
        double lo = 1.0;
        double hi = 0.0;
        for (std::size_t n = 0; n < cfg.dim; ++n) {
            for (std::size_t m = 0; m < cfg.dim; ++m) {
                const double p = conditional_probability_ndim(pair.phi, {n, m, coherence(pair.psi, n, m)}, scheme);
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
        }
        rec.inputs.push_back(lo);
        rec.inputs.push_back(hi);
        // ungated identity on an unrelated pair, in or out of the region
        const auto a = random_amplitudes(cfg.dim, rng);
        const auto b = random_amplitudes(cfg.dim, rng);
        rec.inputs.push_back(std::abs(weighted_event_sum(a, b, scheme) - born_probability_ndim(a, b)));
        rec.exact_p = exact_event_probability_ndim(pair.psi, pair.phi, scheme);
        rec.born_p = born_probability_ndim(pair.psi, pair.phi);
        return res;
    });
    double min_cond = 1.0;
    double max_cond = 0.0;
    double max_ungated = 0.0;
    const std::size_t base = 4 * cfg.dim;
    for (auto& r : results) {
        rep.regenerated += r.regenerated;
        min_cond = std::min(min_cond, r.record.inputs[base + 1]);
        max_cond = std::max(max_cond, r.record.inputs[base + 2]);
        max_ungated = std::max(max_ungated, r.record.inputs[base + 3]);
        rep.cases.push_back(std::move(r.record));
    }
    add_exact_criterion(rep, "born_identity_gated", max_abs_error(rep));
    rep.metrics.push_back({"max_ungated_error", max_ungated});
    rep.metrics.push_back({"min_conditional", min_cond});
    rep.metrics.push_back({"max_conditional", max_cond});
    rep.criteria.push_back({"algebraic_identity_ungated", max_ungated < kExactTolerance,
                            fmt::format("max ungated error {:.3e}", max_ungated)});
    rep.criteria.push_back({"conditionals_in_unit_interval", min_cond > 0.0 && max_cond <= 1.0,
                            fmt::format("conditionals in [{:.6g}, {:.6g}]", min_cond, max_cond)});
}

inline void mc_ndim(ExperimentReport& rep) {
    const auto& cfg = rep.config;
    const WeightScheme scheme = cfg.weight_scheme();
    rep.input_columns = amplitude_columns("psi", cfg.dim);
    for (auto& c : amplitude_columns("phi", cfg.dim)) rep.input_columns.push_back(std::move(c));
    auto results = run_cases(cfg.pairs, cfg.workers, [&](std::uint64_t i) {
        Rng rng = Rng::for_case(cfg.seed, i);
        auto pair = make_in_region_pair(cfg.dim, scheme, rng, cfg.perturbation);
        CaseResult res;
        res.regenerated = pair.rejections;
        auto& rec = res.record;
        append_amplitudes(rec.inputs, pair.psi);
        append_amplitudes(rec.inputs, pair.phi);
        rec.exact_p = exact_event_probability_ndim(pair.psi, pair.phi, scheme);
        rec.born_p = born_probability_ndim(pair.psi, pair.phi);
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < cfg.samples; ++s) {
            const auto ontic = sample_ndim(pair.psi, scheme, rng);
            hits += rng.bernoulli(conditional_probability_ndim(pair.phi, ontic, scheme)) ? 1 : 0;
        }
        fill_frequency(rec, hits, cfg.samples);
        return res;
    });
    for (auto& r : results) {
        rep.regenerated += r.regenerated;
        rep.cases.push_back(std::move(r.record));
    }
    rep.metrics.push_back({"max_abs_exact_error", max_abs_error(rep)});
    add_frequency_criteria(rep);
}

inline void append_extremum(std::vector<double>& xs, const Extremum& e) {
    xs.insert(xs.end(), {e.value, e.x, e.w.x, e.w.y, e.w.z});
}

inline void positivity(ExperimentReport& rep) {
    const auto& cfg = rep.config;
    rep.input_columns = {"branch", "x_begin", "x_end", "min", "min_x", "min_wx", "min_wy", "min_wz",
                         "max", "max_x", "max_wx", "max_wy", "max_wz"};
    const auto sweep = sweep_positivity(cfg.grid_step, cfg.events);
    std::uint64_t idx = 0;
    for (const auto* b : {&sweep.azimuth, &sweep.zenith}) {
        CaseRecord rec;
        rec.index = idx++;
        rec.inputs = {static_cast<double>(b->branch), b->x_begin, b->x_end};
        append_extremum(rec.inputs, b->min);
        append_extremum(rec.inputs, b->max);
        rep.cases.push_back(std::move(rec));
    }
    const BlochVector pole{0.0, 0.0, 1.0};
    const double at_boundary = conditional_probability_unchecked(pole, {kConeAngle, Branch::Zenith});
    const double beyond = conditional_probability_unchecked(pole, {kConeAngle + kConeProbeOffset, Branch::Zenith});
    rep.metrics.push_back({"global_min", sweep.global_min()});
    rep.metrics.push_back({"global_max", sweep.global_max()});
    rep.metrics.push_back({"zenith_at_cone_edge", at_boundary});
    rep.metrics.push_back({"zenith_beyond_cone_edge", beyond});
    rep.criteria.push_back({"range_in_unit_interval",
                            sweep.global_min() >= -kRangeTolerance && sweep.global_max() <= 1.0 + kRangeTolerance,
                            fmt::format("values in [{:.17g}, {:.17g}]", sweep.global_min(), sweep.global_max())});
    rep.criteria.push_back({"zero_at_cone_edge", std::abs(at_boundary) <= kRangeTolerance,
                            fmt::format("P(z | theta0, 1) = {:.3e}", at_boundary)});
    rep.criteria.push_back({"negative_beyond_cone_edge", beyond < 0.0,
                            fmt::format("P(z | theta0 + {}, 1) = {:.6g}", kConeProbeOffset, beyond)});
}

inline double nearest_vertex_angle(const IcosaFrame& frame, const BlochVector& v) {
    return angle_between(v, frame.vertex(assign_patch(frame, v)));
}

struct CoveringChunk {
    double max_angle = 0.0;
    BlochVector argmax{};
};

inline CoveringChunk covering_chunk(const IcosaFrame& frame, std::uint64_t seed, std::uint64_t chunk,
                                    std::uint64_t count) {
    Rng rng = Rng::for_case(seed, chunk);
    CoveringChunk out;
    for (std::uint64_t i = 0; i < count; ++i) {
        const BlochVector v = random_bloch(rng);
        const double a = nearest_vertex_angle(frame, v);
        if (a > out.max_angle) out = {a, v};
    }
    return out;
}

inline std::uint64_t chunk_count(std::uint64_t samples) { return (samples + kCoveringChunk - 1) / kCoveringChunk; }

inline std::uint64_t chunk_size(std::uint64_t samples, std::uint64_t chunk) {
    return std::min(kCoveringChunk, samples - chunk * kCoveringChunk);
}

/// Largest edge-length deviation over adjacent vertex pairs (those at the minimal distance).
inline double edge_length_error(const IcosaFrame& frame) {
    double worst = 0.0;
    for (std::size_t a = 0; a < kPatchCount; ++a) {
        for (std::size_t b = a + 1; b < kPatchCount; ++b) {
            const BlochVector d{frame.vertices[a].x - frame.vertices[b].x, frame.vertices[a].y - frame.vertices[b].y,
                                frame.vertices[a].z - frame.vertices[b].z};
            const double len = norm(d);
            if (len < 1.5 * kIcosaEdge) worst = std::max(worst, std::abs(len - kIcosaEdge));
        }
    }
    return worst;
}

inline void covering(ExperimentReport& rep, const IcosaFrame& frame) {
    const auto& cfg = rep.config;
    rep.input_columns = {"samples", "max_angle", "argmax_vx", "argmax_vy", "argmax_vz"};
    auto results = run_cases(chunk_count(cfg.samples), cfg.workers, [&](std::uint64_t i) {
        const auto n = chunk_size(cfg.samples, i);
        const auto c = covering_chunk(frame, cfg.seed, i, n);
        CaseResult res;
        res.record.inputs = {static_cast<double>(n), c.max_angle, c.argmax.x, c.argmax.y, c.argmax.z};
        return res;
    });
    double max_angle = 0.0;
    for (auto& r : results) {
        max_angle = std::max(max_angle, r.record.inputs[1]);
        rep.cases.push_back(std::move(r.record));
    }
    const double edge_err = edge_length_error(frame);
    rep.metrics.push_back({"max_angle", max_angle});
    rep.metrics.push_back({"covering_radius", kCoveringAngle});
    rep.metrics.push_back({"cone_angle", kConeAngle});
    rep.metrics.push_back({"edge_length_error", edge_err});
    rep.criteria.push_back({"within_covering_radius", max_angle <= kCoveringAngle + kCoveringTolerance,
                            fmt::format("max angle {:.17g} vs theta1 {:.17g}", max_angle, kCoveringAngle)});
    rep.criteria.push_back({"inside_validity_cone", max_angle < kConeAngle,
                            fmt::format("max angle {:.17g} vs theta0 {:.17g}", max_angle, kConeAngle)});
    rep.criteria.push_back({"edge_length", edge_err <= kEdgeTolerance, fmt::format("edge error {:.3e}", edge_err)});
}

inline void witness(ExperimentReport& rep) {
    const auto& cfg = rep.config;
    rep.input_columns = {"theta", "phi_a", "phi_b", "rate_a", "rate_b", "discrepancy", "fd_rate_a", "fd_rate_b"};
    const auto w = non_markov_witness(cfg.theta, cfg.phi_a, cfg.phi_b);
    const double fd_a = centered_theta_rate(w.state_a, cfg.fd_step);
    const double fd_b = centered_theta_rate(w.state_b, cfg.fd_step);
    CaseRecord rec;
    rec.inputs = {cfg.theta, cfg.phi_a, cfg.phi_b, w.rate_a, w.rate_b, w.discrepancy, fd_a, fd_b};
    rep.cases.push_back(std::move(rec));
    const double fd_err = std::max(std::abs(fd_a - w.rate_a), std::abs(fd_b - w.rate_b));
    rep.metrics.push_back({"discrepancy", w.discrepancy});
    rep.metrics.push_back({"max_rate_fd_error", fd_err});
    rep.criteria.push_back({"rates_differ", w.discrepancy > 0.0,
                            fmt::format("dtheta/dt = {:.17g} vs {:.17g}", w.rate_a, w.rate_b)});
    rep.criteria.push_back({"rates_match_flow", fd_err <= kRateTolerance,
                            fmt::format("max |rate - finite difference| = {:.3e}", fd_err)});
}

}  // namespace detail

/// Largest angle between a Haar-random point and its assigned vertex over
/// n_samples draws.
inline double covering_check(const IcosaFrame& frame, std::uint64_t n_samples, std::uint64_t seed = 0) {
    if (n_samples < 1) throw std::invalid_argument("covering check needs at least one sample");
    double max_angle = 0.0;
    for (std::uint64_t c = 0; c < detail::chunk_count(n_samples); ++c) {
        max_angle = std::max(max_angle,
                             detail::covering_chunk(frame, seed, c, detail::chunk_size(n_samples, c)).max_angle);
    }
    return max_angle;
}

/// Throws std::invalid_argument on an invalid config.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport rep;
    rep.config = cfg;
    rep.config_digest = config_digest(cfg);
    const IcosaFrame frame = build_frame();
    switch (cfg.kind) {
        case ExperimentKind::ExactQubit: detail::exact_qubit(rep, frame); break;
        case ExperimentKind::McQubit: detail::mc_qubit(rep, frame); break;
        case ExperimentKind::ExactNdim: detail::exact_ndim(rep); break;
        case ExperimentKind::McNdim: detail::mc_ndim(rep); break;
        case ExperimentKind::PositivitySweep: detail::positivity(rep); break;
        case ExperimentKind::Covering: detail::covering(rep, frame); break;
        case ExperimentKind::Witness: detail::witness(rep); break;
    }
    return rep;
}

}  // namespace ontic
