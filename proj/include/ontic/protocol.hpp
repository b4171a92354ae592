#pragma once

// In-process run of the two-party protocol. The preparer turns a Bloch vector
// into a 10-byte ontic message; the measurer sees only that message and decides
// whether the event w occurs.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "ontic/geometry.hpp"
#include "ontic/harness.hpp"
#include "ontic/icosa.hpp"
#include "ontic/message.hpp"
#include "ontic/rng.hpp"
#include "ontic/stats.hpp"

namespace ontic {

struct ProtocolConfig {
    /// Explicit (state, event) pairs; random_pairs more are drawn after them.
    std::vector<std::pair<BlochVector, BlochVector>> pairs;
    std::uint64_t random_pairs = 0;
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 0;
};

struct RunningFrequency {
    std::uint64_t rounds = 0;
    double freq = 0.0;
};

struct PairTranscript {
    BlochVector v;
    BlochVector w;
    PatchIndex patch = 1;
    double born_p = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t hits = 0;
    std::uint64_t message_bytes = 0;
    double freq = 0.0;
    double z = kNaN;
    std::vector<RunningFrequency> running;
};

struct Transcript {
    ProtocolConfig config;
    std::vector<PairTranscript> pairs;

    /// Same rule as the Monte Carlo experiments: |z| <= 5 for all but one case in
    /// a hundred, and degenerate probabilities matched exactly.
    bool passed() const {
        std::uint64_t fails = 0;
        for (const auto& p : pairs) {
            if (std::isnan(p.z)) {
                const bool ok = p.born_p <= 0.0 ? p.hits == 0 : p.hits == p.rounds;
                if (!ok) return false;
            } else if (!(std::abs(p.z) <= kZThreshold)) {
                ++fails;
            }
        }
        return !pairs.empty() && fails <= pairs.size() / 100 * kZFailuresPerHundred;
    }
};

/// Receives each message as it crosses from preparer to measurer.
using MessageSink = std::function<void(std::uint64_t pair, const OnticMessage&)>;

inline Transcript simulate_protocol(const ProtocolConfig& cfg, const MessageSink& sink = {}) {
    if (cfg.rounds < 1) throw std::invalid_argument("protocol needs at least one round");
    if (cfg.pairs.empty() && cfg.random_pairs == 0) throw std::invalid_argument("protocol needs at least one pair");
    const IcosaFrame frame = build_frame();
    Transcript t{cfg, {}};
    const std::uint64_t total = cfg.pairs.size() + cfg.random_pairs;
    for (std::uint64_t i = 0; i < total; ++i) {
        // separate streams for the two parties; the measurer never sees the preparer's
        Rng bob = Rng::for_case(cfg.seed, 2 * i);
        Rng alice = Rng::for_case(cfg.seed, 2 * i + 1);
        PairTranscript p;
        if (i < cfg.pairs.size()) {
            p.v = cfg.pairs[i].first;
            p.w = cfg.pairs[i].second;
        } else {
            p.v = random_bloch(bob);
            p.w = random_bloch(bob);
        }
        p.patch = assign_patch(frame, p.v);
        p.born_p = born_probability_qubit(p.v, p.w);
        std::uint64_t next_checkpoint = 10;
        for (std::uint64_t r = 1; r <= cfg.rounds; ++r) {
            const OnticMessage msg = serialize(prepare(frame, p.v, bob));
            p.message_bytes += msg.size();
            if (sink) sink(i, msg);
            const PatchedOnticState received = deserialize(msg);
            p.hits += static_cast<std::uint64_t>(simulate_outcome(frame, p.w, received, alice));
            if (r == next_checkpoint || r == cfg.rounds) {
                p.running.push_back({r, static_cast<double>(p.hits) / static_cast<double>(r)});
                if (r == next_checkpoint) next_checkpoint *= 10;
            }
        }
        p.rounds = cfg.rounds;
        p.freq = static_cast<double>(p.hits) / static_cast<double>(p.rounds);
        p.z = stats::z_score(p.freq, p.born_p, p.rounds);
        t.pairs.push_back(std::move(p));
    }
    return t;
}

inline std::string to_json(const Transcript& t) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["report_version"] = kReportVersion;
    doc["config"] = {{"rounds", t.config.rounds},
                     {"seed", t.config.seed},
                     {"explicit_pairs", t.config.pairs.size()},
                     {"random_pairs", t.config.random_pairs}};
    doc["message_format"] = {{"size_bytes", kMessageSize}, {"fields", {"x:f64le", "n:u8", "k:u8"}}};
    ordered_json pairs = ordered_json::array();
    for (const auto& p : t.pairs) {
        ordered_json run = ordered_json::array();
        for (const auto& r : p.running) run.push_back({{"rounds", r.rounds}, {"freq", r.freq}});
        pairs.push_back({{"v", {p.v.x, p.v.y, p.v.z}},
                         {"w", {p.w.x, p.w.y, p.w.z}},
                         {"patch", p.patch},
                         {"born_p", p.born_p},
                         {"rounds", p.rounds},
                         {"hits", p.hits},
                         {"freq", p.freq},
                         {"z", detail::real(p.z)},
                         {"message_bytes", p.message_bytes},
                         {"running", std::move(run)}});
    }
    doc["pairs"] = std::move(pairs);
    doc["passed"] = t.passed();
    return doc.dump(2) + "\n";
}

/// Columns: case_index, vx, vy, vz, wx, wy, wz, patch, born_p, freq, z, message_bytes.
inline std::string to_csv(const Transcript& t) {
    std::string out = "case_index,vx,vy,vz,wx,wy,wz,patch,born_p,freq,z,message_bytes\n";
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
        const auto& p = t.pairs[i];
        out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{},{}\n", i, p.v.x,
                           p.v.y, p.v.z, p.w.x, p.w.y, p.w.z, p.patch, p.born_p, p.freq, detail::csv_real(p.z),
                           p.message_bytes);
    }
    return out;
}

}  // namespace ontic
