#pragma once

// Randomized property sweep: each sample draws a state (ranks cycled through
// 1..d1·d2), a pair of complete bases, a pair of coarse observables and a
// full-rank reference state, then checks the inequality chains and identities.

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "qcorr/entropy.hpp"
#include "qcorr/measurement.hpp"

namespace qcorr {

struct SweepConfig {
    Dims dims{2, 2};
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    double tol = 1e-9;

    void check() const {
        if (samples < 1) throw Error(ErrorKind::Malformed, "sweep needs at least one sample");
        if (dims.d1 > 8 || dims.d2 > 8) throw Error(ErrorKind::Malformed, "sweep dimensions are limited to 8");
    }
};

/// Everything needed to replay one sample.
struct SweepSample {
    std::size_t index = 0;
    std::size_t rank = 0;
    ComplexMatrix rho;        // sampled state
    ComplexMatrix reference;  // full-rank second argument of the relative entropy
    Observable basis_a;       // complete, side 1
    Observable basis_b;       // complete, side 2
    Observable coarse_a;      // random grouping, side 1
    Observable coarse_b;      // random grouping, side 2
};

inline SweepSample draw_sweep_sample(const SweepConfig& cfg, std::size_t index) {
    Rng rng(cfg.seed, index);
    const std::size_t n = cfg.dims.total();
    const std::size_t rank = 1 + index % n;
    ComplexMatrix rho = sample_random_density(cfg.dims, rank, rng);
    ComplexMatrix reference = sample_random_density(cfg.dims, n, rng);
    Observable basis_a = random_complete_observable(cfg.dims.d1, rng);
    Observable basis_b = random_complete_observable(cfg.dims.d2, rng);
    Observable coarse_a = random_observable(cfg.dims.d1, rng);
    Observable coarse_b = random_observable(cfg.dims.d2, rng);
    return {index, rank, std::move(rho), std::move(reference), std::move(basis_a), std::move(basis_b),
            std::move(coarse_a), std::move(coarse_b)};
}

/// Slack of one check on one sample; negative beyond tolerance is a violation.
struct CheckValue {
    std::string name;
    double slack = 0.0;
};

/// Positive slack means the inequality holds. Identities report −residual.
inline std::vector<CheckValue> evaluate_sweep_sample(const SweepSample& s, const Dims& dims) {
    std::vector<CheckValue> out;
    const auto state = BipartiteState::make(DensityOperator::trusted(s.rho), dims);
    const SubsystemObservable a{s.basis_a, Subsystem::first};
    const SubsystemObservable b{s.basis_b, Subsystem::second};

    const double mi = mutual_information(state).value;
    const double jmi = joint_mutual_information(joint_distribution(state, a, b)).value;
    const double gain1 = information_gain(state, a).value;
    const double gain2 = information_gain(state, b).value;
    out.push_back({"chain.joint-nonnegative", jmi});
    out.push_back({"chain.joint-le-gain-1to2", gain1 - jmi});
    out.push_back({"chain.gain-1to2-le-mutual", mi - gain1});
    out.push_back({"chain.joint-le-gain-2to1", gain2 - jmi});
    out.push_back({"chain.gain-2to1-le-mutual", mi - gain2});

    const Bits mi_rel = mutual_information_via_relative(state);
    out.push_back({"mutual-information.relative-form",
                   mi_rel.infinite ? -std::numeric_limits<double>::infinity() : -std::abs(mi - mi_rel.value)});

    const SubsystemObservable ca{s.coarse_a, Subsystem::first};
    const SubsystemObservable cb{s.coarse_b, Subsystem::second};
    const auto both = luders_apply_subsystem(ca, luders_apply_subsystem(cb, state));
    out.push_back({"partial-trace.side-1",
                   -frobenius_distance(both.rho1().matrix(), luders_apply(s.coarse_a, state.rho1()).matrix())});
    out.push_back({"partial-trace.side-2",
                   -frobenius_distance(both.rho2().matrix(), luders_apply(s.coarse_b, state.rho2()).matrix())});

    const auto reference = BipartiteState::make(DensityOperator::trusted(s.reference), dims);
    auto rel = [](const BipartiteState& sigma, const BipartiteState& rho) {
        const Bits r = relative_entropy(sigma.rho12(), rho.rho12());
        return r.infinite ? std::numeric_limits<double>::infinity() : r.value;
    };
    const double s0 = rel(state, reference);
    const auto sigma_a = luders_apply_subsystem(ca, state);
    const auto rho_a = luders_apply_subsystem(ca, reference);
    const double s1 = rel(sigma_a, rho_a);
    const double s2 = rel(luders_apply_subsystem(cb, sigma_a), luders_apply_subsystem(cb, rho_a));
    out.push_back({"lindblad.one-step", s0 - s1});
    out.push_back({"lindblad.two-step", s1 - s2});

    const double s_1 = von_neumann_entropy(state.rho1()).value;
    const double s_2 = von_neumann_entropy(state.rho2()).value;
    out.push_back({"lieb", 2.0 * std::min(s_1, s_2) - mi});
    return out;
}

struct SweepViolation {
    std::size_t sample = 0;
    std::string check;
    double slack = 0.0;
};

struct CheckSummary {
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
};

struct SweepResult {
    SweepConfig config;
    std::map<std::string, CheckSummary> checks;  // sorted by name
    std::vector<SweepViolation> violations;      // sample order
    std::vector<SweepSample> violating_samples;

    std::size_t violation_count() const { return violations.size(); }
};

inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.check();
    SweepResult result;
    result.config = cfg;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SweepSample sample = draw_sweep_sample(cfg, i);
        bool violated = false;
        for (const auto& c : evaluate_sweep_sample(sample, cfg.dims)) {
            auto& summary = result.checks[c.name];
            ++summary.evaluated;
            summary.worst_slack = std::min(summary.worst_slack, c.slack);
            if (!(c.slack >= -cfg.tol)) {
                ++summary.violations;
                result.violations.push_back({i, c.name, c.slack});
                violated = true;
            }
        }
        if (violated) result.violating_samples.push_back(std::move(sample));
    }
    return result;
}

}  // namespace qcorr
