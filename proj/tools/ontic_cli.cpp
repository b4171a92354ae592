// Command-line front end for the verification experiments.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 usage or config error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ontic/ontic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

constexpr const char* kOutputDirEnv = "ONTIC_OUTPUT_DIR";

struct Options {
    std::string out_dir;
    std::string format = "structured";
    std::string mode = "exact";
    std::string region = "sphere";
    std::string scheme = "uniform";
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t pairs = 0;
    std::uint64_t rounds = 1'000'000;
    std::uint64_t events = 10'000;
    unsigned workers = 1;
    std::size_t dim = 2;
    double pole_mass = 0.5;
    double perturbation = ontic::kDefaultPerturbation;
    double step = 1e-3;
    double theta = 0.5;
    double phi_a = 0.0;
    double phi_b = std::numbers::pi / 2;
    double fd_step = 1e-4;
    std::string v;
    std::string w;
    bool save_messages = false;
};

/// Writes to a sibling temp file, then renames over the target.
void write_atomic(const fs::path& path, std::string_view data) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string utc_stamp() {
    const auto now = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
    const auto ms = (now.time_since_epoch() % std::chrono::seconds(1)).count();
    return fmt::format("{:%Y%m%dT%H%M%S}{:03d}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)), ms);
}

fs::path make_run_dir(const Options& o, std::string_view subcommand, const std::string& stamp) {
    const fs::path base = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
    fs::create_directories(base);
    fs::path dir = base / fmt::format("{}-{}-{}", subcommand, o.seed, stamp);
    for (int i = 1; fs::exists(dir); ++i) dir = base / fmt::format("{}-{}-{}-{}", subcommand, o.seed, stamp, i);
    fs::create_directories(dir);
    return dir;
}

ontic::BlochVector parse_vector(const std::string& text) {
    std::vector<double> xs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        xs.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    }
    if (xs.size() != 3) throw std::invalid_argument("vector '" + text + "' needs three comma-separated components");
    return ontic::normalized({xs[0], xs[1], xs[2]});
}

void write_sidecar(const fs::path& dir, const std::string& stamp, const std::string& subcommand,
                   const Options& o, const std::vector<std::string>& argv, int status) {
    nlohmann::ordered_json run;
    run["subcommand"] = subcommand;
    run["timestamp"] = stamp;
    run["workers"] = o.workers;
    run["argv"] = argv;
    run["exit_status"] = status;
    write_atomic(dir / "run.json", run.dump(2) + "\n");
}

ontic::ExperimentConfig base_config(const Options& o) {
    ontic::ExperimentConfig cfg;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    cfg.region = ontic::parse_region(o.region);
    cfg.dim = o.dim;
    cfg.scheme = ontic::parse_scheme(o.scheme);
    cfg.pole_mass = o.pole_mass;
    cfg.perturbation = o.perturbation;
    cfg.grid_step = o.step;
    cfg.events = o.events;
    cfg.theta = o.theta;
    cfg.phi_a = o.phi_a;
    cfg.phi_b = o.phi_b;
    cfg.fd_step = o.fd_step;
    return cfg;
}

int finish_experiment(const ontic::ExperimentReport& rep, const Options& o, const std::string& subcommand,
                      const std::vector<std::string>& argv) {
    const std::string stamp = utc_stamp();
    const fs::path dir = make_run_dir(o, subcommand, stamp);
    const bool tabular = o.format == "tabular";
    const fs::path report = dir / (tabular ? "report.csv" : "report.json");
    write_atomic(report, tabular ? ontic::to_csv(rep) : ontic::to_json(rep));
    for (const auto& c : rep.criteria) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    if (rep.regenerated > 0) std::cout << "regenerated cases: " << rep.regenerated << "\n";
    std::cout << "report: " << report.string() << "\n";
    const int status = rep.passed() ? kExitPass : kExitFail;
    write_sidecar(dir, stamp, subcommand, o, argv, status);
    return status;
}

int run_protocol(const Options& o, const std::vector<std::string>& argv) {
    ontic::ProtocolConfig cfg;
    cfg.seed = o.seed;
    cfg.rounds = o.rounds;
    if (!o.v.empty() || !o.w.empty()) {
        if (o.v.empty() || o.w.empty()) throw std::invalid_argument("--v and --w must be given together");
        cfg.pairs.emplace_back(parse_vector(o.v), parse_vector(o.w));
        cfg.random_pairs = o.pairs;
    } else {
        cfg.random_pairs = o.pairs == 0 ? 1 : o.pairs;
    }
    const std::string stamp = utc_stamp();
    const fs::path dir = make_run_dir(o, "simulate-protocol", stamp);
    std::optional<std::ofstream> messages;
    const fs::path msg_path = dir / "messages.bin";
    fs::path msg_tmp = msg_path;
    msg_tmp += ".tmp";
    if (o.save_messages) messages.emplace(msg_tmp, std::ios::binary | std::ios::trunc);
    ontic::MessageSink sink;
    if (messages) {
        sink = [&](std::uint64_t, const ontic::OnticMessage& m) {
            messages->write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size()));
        };
    }
    const auto t = ontic::simulate_protocol(cfg, sink);
    if (messages) {
        messages->close();
        fs::rename(msg_tmp, msg_path);
    }
    const bool tabular = o.format == "tabular";
    const fs::path report = dir / (tabular ? "transcript.csv" : "transcript.json");
    write_atomic(report, tabular ? ontic::to_csv(t) : ontic::to_json(t));
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
        const auto& p = t.pairs[i];
        std::cout << fmt::format("pair {}: born {:.6f} freq {:.6f} z {:.3f} ({} bytes/round)\n", i, p.born_p, p.freq,
                                 p.z, p.message_bytes / p.rounds);
    }
    std::cout << "transcript: " << report.string() << "\n";
    const int status = t.passed() ? kExitPass : kExitFail;
    write_sidecar(dir, stamp, "simulate-protocol", o, argv, status);
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden-variable qubit and N-level models: Born-rule verification experiments"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "Flat key = value config file; command-line flags override it");

    Options o;
    if (const char* env = std::getenv(kOutputDirEnv)) o.out_dir = env;

    app.add_option("--out", o.out_dir, fmt::format("Output directory (default ${} or .)", kOutputDirEnv));
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"structured", "tabular"}));
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--samples", o.samples, "Monte Carlo samples per case, or covering draws");
    app.add_option("--pairs", o.pairs, "Number of (state, event) cases");
    app.add_option("--workers", o.workers, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    app.add_option("--mode", o.mode, "exact identity or Monte Carlo")->check(CLI::IsMember({"exact", "mc"}));
    app.add_option("--region", o.region, "Qubit states from the whole sphere or the validity cone")
        ->check(CLI::IsMember({"sphere", "cone"}));
    app.add_option("--dim", o.dim, "Hilbert space dimension N");
    app.add_option("--scheme", o.scheme, "Weight scheme")->check(CLI::IsMember({"uniform", "ground"}));
    app.add_option("--pole-mass", o.pole_mass, "Mass on row/column 0 for the ground scheme");
    app.add_option("--perturbation", o.perturbation, "Amplitude perturbation radius for in-region pairs");
    app.add_option("--step", o.step, "Grid step of the positivity sweep");
    app.add_option("--events", o.events, "Event directions in the positivity sweep");
    app.add_option("--theta", o.theta, "Zenith of the witness states");
    app.add_option("--phi-a", o.phi_a, "Azimuth of the first witness state");
    app.add_option("--phi-b", o.phi_b, "Azimuth of the second witness state");
    app.add_option("--fd-step", o.fd_step, "Finite-difference step for the witness");
    app.add_option("--rounds", o.rounds, "Protocol rounds per pair");
    app.add_option("--v", o.v, "Prepared Bloch vector x,y,z (normalized)");
    app.add_option("--w", o.w, "Measured Bloch vector x,y,z (normalized)");
    app.add_flag("--save-messages", o.save_messages, "Write every 10-byte message to messages.bin");

    auto* verify_qubit = app.add_subcommand("verify-qubit", "Qubit model against the Born rule")->fallthrough();
    auto* verify_ndim = app.add_subcommand("verify-ndim", "N-level model against the Born rule")->fallthrough();
    auto* sweep = app.add_subcommand("sweep-positivity", "Conditional probabilities over the validity domain")
                      ->fallthrough();
    auto* covering = app.add_subcommand("covering", "Icosahedral covering radius")->fallthrough();
    auto* protocol = app.add_subcommand("simulate-protocol", "Two-party message protocol")->fallthrough();
    auto* demo = app.add_subcommand("demo-nonmarkov", "Zenith-rate witness of non-Markovian dynamics")
                     ->fallthrough();

    const std::vector<std::string> args(argv, argv + argc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto given = [&](const char* name) { return app.count(name) > 0; };

    try {
        if (protocol->parsed()) return run_protocol(o, args);

        auto cfg = base_config(o);
        std::string name;
        if (verify_qubit->parsed() || verify_ndim->parsed()) {
            const bool mc = o.mode == "mc";
            const bool qubit = verify_qubit->parsed();
            name = qubit ? "verify-qubit" : "verify-ndim";
            cfg.kind = qubit ? (mc ? ontic::ExperimentKind::McQubit : ontic::ExperimentKind::ExactQubit)
                             : (mc ? ontic::ExperimentKind::McNdim : ontic::ExperimentKind::ExactNdim);
            cfg.pairs = given("--pairs") ? o.pairs : (mc ? 100 : (qubit ? 10'000 : 1'000));
            cfg.samples = given("--samples") ? o.samples : 1'000'000;
        } else if (sweep->parsed()) {
            name = "sweep-positivity";
            cfg.kind = ontic::ExperimentKind::PositivitySweep;
        } else if (covering->parsed()) {
            name = "covering";
            cfg.kind = ontic::ExperimentKind::Covering;
            cfg.samples = given("--samples") ? o.samples : 100'000;
        } else if (demo->parsed()) {
            name = "demo-nonmarkov";
            cfg.kind = ontic::ExperimentKind::Witness;
        }
        const auto rep = ontic::run_experiment(cfg);
        if (demo->parsed()) {
            const auto& in = rep.cases.front().inputs;
            std::cout << fmt::format("theta = {:.17g}, shared zenith-branch ontic state x = {:.17g}\n", in[0], in[0]);
            std::cout << fmt::format("dtheta/dt at phi_a = {:.17g}: {:.17g} (finite difference {:.17g})\n", in[1],
                                     in[3], in[6]);
            std::cout << fmt::format("dtheta/dt at phi_b = {:.17g}: {:.17g} (finite difference {:.17g})\n", in[2],
                                     in[4], in[7]);
            std::cout << fmt::format("discrepancy = {:.17g}\n", in[5]);
        }
        return finish_experiment(rep, o, name, args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ontic::RegionSamplingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
