#pragma once

// Experiment reports and their two serializations: a versioned JSON document and
// a flat CSV table with one row per case.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "ontic/config.hpp"

namespace ontic {

inline constexpr int kReportVersion = 1;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CaseRecord {
    std::uint64_t index = 0;
    /// Values for the report's input_columns, in order.
    std::vector<double> inputs;
    double exact_p = kNaN;
    double born_p = kNaN;
    double freq = kNaN;
    /// NaN when born_p is 0 or 1; exact_match is set instead.
    double z = kNaN;
    std::optional<bool> exact_match;
};

struct Metric {
    std::string name;
    double value = kNaN;
};

struct Criterion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string config_digest;
    std::vector<std::string> input_columns;
    std::vector<CaseRecord> cases;
    std::vector<Metric> metrics;
    std::vector<Criterion> criteria;
    /// Candidate cases discarded and redrawn (N-level pairs outside the positivity region).
    std::uint64_t regenerated = 0;

    bool passed() const {
        for (const auto& c : criteria) {
            if (!c.passed) return false;
        }
        return !criteria.empty();
    }

    double metric(std::string_view name) const {
        for (const auto& m : metrics) {
            if (m.name == name) return m.value;
        }
        return kNaN;
    }
};

/// Lower-case hex SHA-256 of the input.
inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

inline std::string config_digest(const ExperimentConfig& cfg) { return sha256_hex(cfg.echo()); }

namespace detail {

inline nlohmann::ordered_json real(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

inline std::string csv_real(double v) {
    if (std::isnan(v)) return "";
    return fmt::format("{:.17g}", v);
}

}  // namespace detail

/// Deterministic JSON rendering. Contains no wall-clock data.
inline std::string to_json(const ExperimentReport& r) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["report_version"] = kReportVersion;
    ordered_json cfg;
    const auto& c = r.config;
    cfg["kind"] = to_string(c.kind);
    cfg["samples"] = c.samples;
    cfg["pairs"] = c.pairs;
    cfg["region"] = to_string(c.region);
    cfg["dim"] = c.dim;
    cfg["scheme"] = to_string(c.scheme);
    cfg["pole_mass"] = c.pole_mass;
    cfg["perturbation"] = c.perturbation;
    cfg["grid_step"] = c.grid_step;
    cfg["events"] = c.events;
    cfg["theta"] = c.theta;
    cfg["phi_a"] = c.phi_a;
    cfg["phi_b"] = c.phi_b;
    cfg["fd_step"] = c.fd_step;
    cfg["seed"] = c.seed;
    doc["config"] = std::move(cfg);
    doc["provenance"] = {{"seed", c.seed}, {"config_digest", r.config_digest}};
    doc["input_columns"] = r.input_columns;

    ordered_json cases = ordered_json::array();
    for (const auto& rec : r.cases) {
        ordered_json jc;
        jc["case_index"] = rec.index;
        ordered_json in = ordered_json::array();
        for (double v : rec.inputs) in.push_back(detail::real(v));
        jc["inputs"] = std::move(in);
        jc["exact_p"] = detail::real(rec.exact_p);
        jc["born_p"] = detail::real(rec.born_p);
        jc["freq"] = detail::real(rec.freq);
        jc["z"] = detail::real(rec.z);
        if (rec.exact_match) jc["exact_match"] = *rec.exact_match;
        cases.push_back(std::move(jc));
    }
    doc["cases"] = std::move(cases);

    ordered_json summary;
    ordered_json metrics = ordered_json::object();
    for (const auto& m : r.metrics) metrics[m.name] = detail::real(m.value);
    summary["metrics"] = std::move(metrics);
    ordered_json crit = ordered_json::array();
    for (const auto& k : r.criteria) {
        crit.push_back({{"name", k.name}, {"passed", k.passed}, {"detail", k.detail}});
    }
    summary["criteria"] = std::move(crit);
    summary["regenerated_cases"] = r.regenerated;
    summary["passed"] = r.passed();
    doc["summary"] = std::move(summary);
    return doc.dump(2) + "\n";
}

/// Columns: case_index, inputs..., exact_p, born_p, freq, z, exact_match.
inline std::string to_csv(const ExperimentReport& r) {
    std::string out = "case_index";
    for (const auto& col : r.input_columns) out += "," + col;
    out += ",exact_p,born_p,freq,z,exact_match\n";
    for (const auto& rec : r.cases) {
        out += std::to_string(rec.index);
        for (double v : rec.inputs) out += "," + detail::csv_real(v);
        out += "," + detail::csv_real(rec.exact_p);
        out += "," + detail::csv_real(rec.born_p);
        out += "," + detail::csv_real(rec.freq);
        out += "," + detail::csv_real(rec.z);
        out += ",";
        if (rec.exact_match) out += *rec.exact_match ? "true" : "false";
        out += "\n";
    }
    return out;
}

}  // namespace ontic
