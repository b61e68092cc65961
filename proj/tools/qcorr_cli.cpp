// qcorr command-line tool: JSON on stdout, a short summary on stderr.
//
// Exit codes: 0 ok, 1 usage/parse, 2 validation, 3 sweep violation,
// 4 twin verdict false, 5 internal consistency.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "qcorr/report.hpp"

namespace {

using namespace qcorr;

enum Exit : int { kOk = 0, kUsage = 1, kValidation = 2, kViolation = 3, kNotTwins = 4, kInconsistent = 5 };

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Malformed: return kUsage;
        case ErrorKind::InternalConsistency:
        case ErrorKind::NegativeInformation: return kInconsistent;
        default: return kValidation;
    }
}

Dims parse_dims(const std::string& text) {
    static const std::regex pattern(R"((\d+)x(\d+))");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) throw Error(ErrorKind::Malformed, "--dims expects AxB, got " + text);
    const auto d1 = std::stoul(m[1]), d2 = std::stoul(m[2]);
    if (d1 < 1 || d2 < 1) throw Error(ErrorKind::Malformed, "--dims entries must be positive");
    return Dims(d1, d2);
}

Subsystem parse_direction(const std::string& text) { return text == "2to1" ? Subsystem::second : Subsystem::first; }

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

struct Options {
    std::string state_path, obs_a_path, obs_b_path;
    std::string dims = "2x2";
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    double twin_tol = kTwinTol;
    std::size_t restarts = OptimizationConfig{}.restarts;
    std::string direction = "1to2";
    std::string out = "./violations";
    bool optimize = false;
};

OptimizationConfig optimization_config(const Options& o) {
    OptimizationConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    return cfg;
}

Json optimization_echo(const Options& o) {
    Json c;
    c["direction"] = o.direction;
    c["restarts"] = o.restarts;
    return c;
}

Json run_optimization(const BipartiteState& state, const Options& o) {
    const OptimizationConfig cfg = optimization_config(o);
    const auto discord = quantum_discord(state, parse_direction(o.direction), cfg);
    const auto joint = sup_joint_mutual_information(state, cfg);
    std::fprintf(stderr, "I(1:2) = %.12g bits, sup gain (%s) = %.12g, discord = %.12g, restarts agreeing %zu/%zu\n",
                 discord.mutual_information.value, o.direction.c_str(), discord.gain.value.value,
                 discord.discord.value, discord.gain.restarts_agreeing, cfg.restarts);
    return optimization_block(discord, joint);
}

int cmd_report(const Options& o) {
    const auto state = to_state(load_state_file(o.state_path));
    Json config = Json::object();
    config["state"] = o.state_path;
    config["optimize"] = o.optimize;
    config["optimization"] = o.optimize ? optimization_echo(o) : Json(nullptr);
    Json doc = report_envelope("report", o.seed, std::move(config));
    doc["state"] = state_block(state);
    std::fprintf(stderr, "S(1) = %.12g, S(2) = %.12g, S(12) = %.12g, I(1:2) = %.12g bits\n",
                 doc["state"]["S1"].get<double>(), doc["state"]["S2"].get<double>(),
                 doc["state"]["S12"].get<double>(), mutual_information(state).value);
    if (o.optimize) doc["optimization"] = run_optimization(state, o);
    emit(doc);
    return kOk;
}

int cmd_discord(const Options& o) {
    const auto state = to_state(load_state_file(o.state_path));
    Json config = optimization_echo(o);
    config["state"] = o.state_path;
    Json doc = report_envelope("discord", o.seed, std::move(config));
    doc["state"] = state_block(state);
    doc["optimization"] = run_optimization(state, o);
    emit(doc);
    return kOk;
}

int cmd_twins(const Options& o) {
    const auto state = to_state(load_state_file(o.state_path));
    const SubsystemObservable a1{to_observable(load_state_file(o.obs_a_path)), Subsystem::first};
    const SubsystemObservable b2{to_observable(load_state_file(o.obs_b_path)), Subsystem::second};
    Json config;
    config["state"] = o.state_path;
    config["observable_a"] = o.obs_a_path;
    config["observable_b"] = o.obs_b_path;
    config["tol"] = o.twin_tol;
    Json doc = report_envelope("twins", std::nullopt, std::move(config));
    doc["state"] = state_block(state);

    TwinReport report;
    int code = kOk;
    try {
        report = verify_twins(state, a1, b2, o.twin_tol);
        code = report.verdict ? kOk : kNotTwins;
    } catch (const TwinConsistencyError& e) {
        report = e.report();
        code = kInconsistent;
        std::fprintf(stderr, "%s\n", e.what());
    }
    doc["twins"] = twin_block(report, state, a1, b2);
    std::fprintf(stderr, "twins: %s (complete: %s); residuals a=%.3g b=%.3g c=%.3g d=%.3g\n",
                 report.verdict ? "yes" : "no", report.complete ? "yes" : "no", report.residual_a, report.residual_b,
                 report.residual_c, report.residual_d);
    emit(doc);
    return code;
}

int cmd_schmidt(const Options& o) {
    const auto file = load_state_file(o.state_path);
    const Dims dims = bipartite_dims(file);
    const ComplexVector phi = to_pure_vector(file);
    Json config;
    config["state"] = o.state_path;
    Json doc = report_envelope("schmidt", std::nullopt, std::move(config));
    doc["state"] = state_block(BipartiteState::pure(phi, dims));
    const SchmidtForm form = schmidt_decompose(phi, dims);
    doc["schmidt"] = schmidt_block(form, phi);
    std::fprintf(stderr, "Schmidt rank %zu\n", form.rank());
    emit(doc);
    return kOk;
}

int cmd_sweep(const Options& o) {
    SweepConfig cfg;
    cfg.dims = parse_dims(o.dims);
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.tol = o.tol;
    cfg.check();
    const SweepResult result = run_sweep(cfg);

    std::optional<std::string> dump_dir;
    if (result.violation_count() > 0) {
        namespace fs = std::filesystem;
        fs::create_directories(o.out);
        dump_dir = o.out;
        for (const auto& s : result.violating_samples) {
            const std::string stem = (fs::path(o.out) / ("sample-" + std::to_string(s.index))).string();
            save_state_file(density_file(s.rho, cfg.dims), stem + "-state.json");
            save_state_file(density_file(s.reference, cfg.dims), stem + "-reference.json");
            save_state_file(observable_file(s.basis_a), stem + "-basis-a.json");
            save_state_file(observable_file(s.basis_b), stem + "-basis-b.json");
            save_state_file(observable_file(s.coarse_a), stem + "-coarse-a.json");
            save_state_file(observable_file(s.coarse_b), stem + "-coarse-b.json");
        }
    }

    Json config;
    config["dims"] = json_dims(cfg.dims);
    config["samples"] = cfg.samples;
    config["tol"] = cfg.tol;
    config["out"] = o.out;
    Json doc = report_envelope("sweep", cfg.seed, std::move(config));
    doc["sweep"] = sweep_block(result, dump_dir);
    std::fprintf(stderr, "%zu samples, %zu violations\n", cfg.samples, result.violation_count());
    emit(doc);
    return result.violation_count() == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation and information measures for bipartite quantum states", "qcorr_cli"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    Options o;

    auto* report = app.add_subcommand("report", "Entropies, mutual information and Schmidt data of a state file");
    report->add_option("state", o.state_path, "State file")->required()->check(CLI::ExistingFile);
    report->add_flag("--optimize", o.optimize, "Also run the measurement-basis suprema");
    report->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::Range(1, 100000));
    report->add_option("--seed", o.seed, "Optimizer seed");
    report->add_option("--direction", o.direction, "Measured side")->check(CLI::IsMember({"1to2", "2to1"}));

    auto* discord = app.add_subcommand("discord", "Quantum discord with the supremum of the information gain");
    discord->add_option("state", o.state_path, "State file")->required()->check(CLI::ExistingFile);
    discord->add_option("--direction", o.direction, "Measured side")->check(CLI::IsMember({"1to2", "2to1"}));
    discord->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::Range(1, 100000));
    discord->add_option("--seed", o.seed, "Optimizer seed");

    auto* twins = app.add_subcommand("twins", "Verify a candidate pair of twin observables");
    twins->add_option("state", o.state_path, "State file")->required()->check(CLI::ExistingFile);
    twins->add_option("observable_a", o.obs_a_path, "Observable file for subsystem 1")->required()->check(CLI::ExistingFile);
    twins->add_option("observable_b", o.obs_b_path, "Observable file for subsystem 2")->required()->check(CLI::ExistingFile);
    twins->add_option("--tol", o.twin_tol, "Condition tolerance")->check(CLI::PositiveNumber);

    auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a pure state");
    schmidt->add_option("state", o.state_path, "State file")->required()->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "Randomized check of the information inequalities and identities");
    sweep->add_option("--dims", o.dims, "Subsystem dimensions AxB (each at most 8)");
    sweep->add_option("--samples", o.samples, "Number of random states")->check(CLI::Range(1, 100000000));
    sweep->add_option("--seed", o.seed, "Sampling seed");
    sweep->add_option("--tol", o.tol, "Allowed slack (negative values demand a strict margin)");
    sweep->add_option("--out", o.out, "Directory for violation dumps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*report) return cmd_report(o);
        if (*discord) return cmd_discord(o);
        if (*twins) return cmd_twins(o);
        if (*schmidt) return cmd_schmidt(o);
        if (*sweep) return cmd_sweep(o);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
