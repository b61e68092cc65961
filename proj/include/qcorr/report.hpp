#pragma once

// JSON documents emitted by the command-line tool. Every document carries the
// same top-level keys; blocks a command does not produce are null.

#include <string>

#include "qcorr/io.hpp"
#include "qcorr/suprema.hpp"
#include "qcorr/sweep.hpp"
#include "qcorr/twins.hpp"

#ifndef QCORR_VERSION
#define QCORR_VERSION "0.0.0"
#endif

namespace qcorr {

inline constexpr const char* kToolName = "qcorr";
inline constexpr const char* kToolVersion = QCORR_VERSION;

inline Json report_envelope(const std::string& command, std::optional<std::uint64_t> seed, Json config) {
    Json out;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["command"] = command;
    out["seed"] = seed ? Json(*seed) : Json(nullptr);
    out["config"] = std::move(config);
    for (const char* block : {"state", "optimization", "twins", "schmidt", "sweep"}) out[block] = nullptr;
    return out;
}

inline Json json_dims(const Dims& dims) { return Json::array({dims.d1, dims.d2}); }

inline Json schmidt_block(const SchmidtForm& form, const ComplexVector& phi) {
    Json out;
    out["coefficients"] = form.coefficients;
    out["weights"] = form.weights();
    Json b1 = Json::array(), b2 = Json::array();
    for (const auto& v : form.basis1) b1.push_back(json_vector(v));
    for (const auto& v : form.basis2) b2.push_back(json_vector(v));
    out["basis1"] = std::move(b1);
    out["basis2"] = std::move(b2);
    out["reconstruction_residual"] = (form.reconstruct() - phi).norm();
    return out;
}

/// Per-state quantities in bits.
inline Json state_block(const BipartiteState& state) {
    const double s1 = von_neumann_entropy(state.rho1()).value;
    const double s2 = von_neumann_entropy(state.rho2()).value;
    const double s12 = von_neumann_entropy(state.rho12()).value;
    const Bits mi = mutual_information(state);
    Json out;
    out["dims"] = json_dims(state.dims());
    out["S1"] = s1;
    out["S2"] = s2;
    out["S12"] = s12;
    out["mutual_information"] = json_number(mi);
    out["mutual_information_relative"] = json_number(mutual_information_via_relative(state));
    out["lieb_slack"] = 2.0 * std::min(s1, s2) - mi.value;
    const Purity purity = purity_class(state.rho12());
    out["purity"] = to_string(purity);
    out["schmidt_coefficients"] = nullptr;
    if (purity == Purity::pure) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.matrix());
        const ComplexVector phi = es.eigenvectors().col(es.eigenvectors().cols() - 1);
        out["schmidt_coefficients"] = schmidt_decompose(phi / phi.norm(), state.dims()).coefficients;
    }
    return out;
}

inline Json supremum_json(const SupremumResult& r) {
    Json out;
    out["value"] = json_number(r.value);
    out["restarts_agreeing"] = r.restarts_agreeing;
    out["converged"] = r.converged;
    return out;
}

inline Json optimization_block(const DiscordResult& discord, const SupremumResult& joint) {
    Json out;
    out["direction"] = discord.measured == Subsystem::first ? "1to2" : "2to1";
    out["mutual_information"] = json_number(discord.mutual_information);
    out["sup_information_gain"] = supremum_json(discord.gain);
    out["sup_joint_mutual_information"] = supremum_json(joint);
    out["discord"] = json_number(discord.discord);
    out["restarts_agreeing"] = discord.gain.restarts_agreeing;
    return out;
}

inline Json twin_block(const TwinReport& r, const BipartiteState& state, const SubsystemObservable& a1,
                       const SubsystemObservable& b2) {
    Json out;
    out["commutator_a"] = r.commutator_a;
    out["commutator_b"] = r.commutator_b;
    out["detectable_a"] = r.detectable_a;
    out["detectable_b"] = r.detectable_b;
    out["spectra_match"] = r.spectra_match;
    out["pairing"] = nullptr;
    if (r.pairing) {
        const auto a = detectable_spectrum(state, a1);
        const auto b = detectable_spectrum(state, b2);
        Json pairs = Json::array();
        for (const auto& [i, j] : r.pairing->pairs) {
            Json p;
            p["a_eigenvalue"] = a.eigenvalues[i];
            p["b_eigenvalue"] = b.eigenvalues[j];
            p["probability"] = a.probabilities[i];
            pairs.push_back(std::move(p));
        }
        out["pairing"] = std::move(pairs);
    }
    out["residual_a"] = r.residual_a;
    out["residual_b"] = r.residual_b;
    out["residual_c"] = r.residual_c;
    out["residual_d"] = r.residual_d;
    out["conditions_agree"] = r.conditions_agree();
    out["verdict"] = r.verdict;
    out["complete"] = r.complete;
    out["strong_algebraic_residual"] =
        r.strong_algebraic_residual ? Json(*r.strong_algebraic_residual) : Json(nullptr);
    out["tol"] = r.tol;
    return out;
}

inline Json sweep_block(const SweepResult& r, const std::optional<std::string>& dump_dir) {
    Json out;
    out["samples"] = r.config.samples;
    out["violations"] = r.violation_count();
    Json checks = Json::object();
    for (const auto& [name, s] : r.checks) {
        Json c;
        c["evaluated"] = s.evaluated;
        c["violations"] = s.violations;
        c["worst_slack"] = json_number(s.worst_slack);
        checks[name] = std::move(c);
    }
    out["checks"] = std::move(checks);
    Json list = Json::array();
    for (const auto& v : r.violations) {
        Json e;
        e["sample"] = v.sample;
        e["check"] = v.check;
        e["slack"] = json_number(v.slack);
        list.push_back(std::move(e));
    }
    out["violation_list"] = std::move(list);
    out["dump_dir"] = dump_dir ? Json(*dump_dir) : Json(nullptr);
    return out;
}

}  // namespace qcorr
