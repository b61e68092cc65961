#pragma once

// Twin observables: verification of properties (i)-(iii) through the four
// equivalent correspondence conditions, plus the constructive pure-state and
// Schmidt-dephased cases.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qcorr/measurement.hpp"

namespace qcorr {

inline constexpr double kTwinTol = 1e-8;

/// Part of a subsystem observable's spectrum with positive probability.
struct DetectableSpectrum {
    Subsystem side = Subsystem::first;
    std::vector<double> eigenvalues;
    std::vector<ComplexMatrix> projectors;  // on the subsystem alone
    std::vector<double> probabilities;
    std::vector<std::size_t> indices;       // positions in the observable's spectral form
    std::vector<double> undetectable;
    std::vector<double> undetectable_probabilities;
    ComplexMatrix range_projector;          // Q_s of ρ_s

    std::size_t size() const { return eigenvalues.size(); }
};

inline DetectableSpectrum detectable_spectrum(const BipartiteState& state, const SubsystemObservable& sobs,
                                              double epsilon = kDetectable) {
    sobs.check(state.dims());
    const DensityOperator& rho_s = state.reduced(sobs.side);
    DetectableSpectrum out;
    out.side = sobs.side;
    out.range_projector = range_projector(rho_s.matrix());
    for (std::size_t i = 0; i < sobs.observable.size(); ++i) {
        const ComplexMatrix& p = sobs.observable.projector(i);
        const double prob = trace_product(rho_s.matrix(), p).real();
        if (prob > epsilon) {
            out.eigenvalues.push_back(sobs.observable.eigenvalues()[i]);
            out.projectors.push_back(p);
            out.probabilities.push_back(prob);
            out.indices.push_back(i);
        } else {
            out.undetectable.push_back(sobs.observable.eigenvalues()[i]);
            out.undetectable_probabilities.push_back(prob);
        }
    }
    return out;
}

/// One-to-one correspondence between detectable spectra: (index in A, index in B).
struct SpectralPairing {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::optional<std::size_t> partner_of(std::size_t i) const {
        for (const auto& [a, b] : pairs)
            if (a == i) return b;
        return std::nullopt;
    }
};

/// p_{ii'} = Tr ρ₁₂ (P₁ⁱ ⊗ P₂ⁱ') over the detectable projectors.
inline Eigen::MatrixXd detectable_joint_table(const BipartiteState& state, const DetectableSpectrum& a,
                                              const DetectableSpectrum& b) {
    Eigen::MatrixXd table(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                trace_product(state.matrix(), tensor_product(a.projectors[i], b.projectors[j])).real();
    return table;
}

/// Pairs i with i' when p_{ii'} > (1−tol)·pᵢ; none unless that is a bijection.
inline std::optional<SpectralPairing> pair_spectra(const BipartiteState& state, const DetectableSpectrum& a,
                                                   const DetectableSpectrum& b, double tol = kTwinTol) {
    if (a.side != Subsystem::first || b.side != Subsystem::second) {
        throw Error(ErrorKind::DimensionMismatch, "pair_spectra expects side-1 then side-2 spectra");
    }
    if (a.size() != b.size()) return std::nullopt;
    const Eigen::MatrixXd table = detectable_joint_table(state, a, b);
    SpectralPairing out;
    std::vector<bool> used(b.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::optional<std::size_t> partner;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > (1.0 - tol) * a.probabilities[i]) {
                if (partner) return std::nullopt;
                partner = j;
            }
        }
        if (!partner || used[*partner]) return std::nullopt;
        used[*partner] = true;
        out.pairs.emplace_back(i, *partner);
    }
    return out;
}

struct TwinReport {
    double commutator_a = 0.0;  // ‖[A₁, ρ₁]‖_F
    double commutator_b = 0.0;  // ‖[B₂, ρ₂]‖_F
    bool spectra_match = false;
    std::optional<SpectralPairing> pairing;
    double residual_a = 0.0;  // information-theoretic
    double residual_b = 0.0;  // measurement-theoretic
    double residual_c = 0.0;  // quantum logic
    double residual_d = 0.0;  // algebraic
    bool verdict = false;
    bool complete = false;
    std::optional<double> strong_algebraic_residual;
    std::size_t detectable_a = 0;
    std::size_t detectable_b = 0;
    double tol = kTwinTol;

    std::array<double, 4> residuals() const { return {residual_a, residual_b, residual_c, residual_d}; }

    /// Appendix-style equivalence: no condition may hold while another fails by 10×.
    bool conditions_agree() const {
        bool any_hold = false, any_fail = false;
        for (double r : residuals()) {
            any_hold = any_hold || r < tol;
            any_fail = any_fail || r > 10 * tol;
        }
        return !(any_hold && any_fail);
    }
};

class TwinConsistencyError : public Error {
public:
    explicit TwinConsistencyError(TwinReport report)
        : Error(ErrorKind::InternalConsistency, "twin conditions (a)-(d) disagree"), report_(std::move(report)) {}

    const TwinReport& report() const { return report_; }

private:
    TwinReport report_;
};

namespace detail {

/// Greedy partial bijection by descending p_{ii'} (lowest indices win ties);
/// used to evaluate residuals when no exact pairing exists.
inline SpectralPairing best_match(const Eigen::MatrixXd& table) {
    SpectralPairing out;
    std::vector<bool> row_used(static_cast<std::size_t>(table.rows()), false);
    std::vector<bool> col_used(static_cast<std::size_t>(table.cols()), false);
    const auto n = std::min(table.rows(), table.cols());
    for (Eigen::Index k = 0; k < n; ++k) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (Eigen::Index i = 0; i < table.rows(); ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            for (Eigen::Index j = 0; j < table.cols(); ++j) {
                if (col_used[static_cast<std::size_t>(j)]) continue;
                if (table(i, j) > best) {
                    best = table(i, j);
                    bi = static_cast<std::size_t>(i);
                    bj = static_cast<std::size_t>(j);
                }
            }
        }
        row_used[bi] = col_used[bj] = true;
        out.pairs.emplace_back(bi, bj);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

inline bool labels_equal(const DetectableSpectrum& a, const DetectableSpectrum& b, const SpectralPairing& pairing,
                         double tol) {
    for (const auto& [i, j] : pairing.pairs) {
        if (std::abs(a.eigenvalues[i] - b.eigenvalues[j]) > tol * (1.0 + std::abs(a.eigenvalues[i]))) return false;
    }
    return true;
}

inline double strong_algebraic(const BipartiteState& state, const DetectableSpectrum& a, const DetectableSpectrum& b) {
    const Dims& dims = state.dims();
    ComplexMatrix a_det = ComplexMatrix::Zero(static_cast<Eigen::Index>(dims.d1), static_cast<Eigen::Index>(dims.d1));
    ComplexMatrix b_det = ComplexMatrix::Zero(static_cast<Eigen::Index>(dims.d2), static_cast<Eigen::Index>(dims.d2));
    for (std::size_t i = 0; i < a.size(); ++i) a_det += a.eigenvalues[i] * a.projectors[i];
    for (std::size_t j = 0; j < b.size(); ++j) b_det += b.eigenvalues[j] * b.projectors[j];
    return (embed(a_det, dims, Subsystem::first) * state.matrix() - embed(b_det, dims, Subsystem::second) * state.matrix())
        .norm();
}

}  // namespace detail

/// ‖A₁ρ₁₂ − B₂ρ₁₂‖_F with both operators restricted to their detectable parts;
/// absent unless every paired eigenvalue coincides.
inline std::optional<double> check_strong_algebraic(const BipartiteState& state, const SubsystemObservable& a1,
                                                    const SubsystemObservable& b2, const SpectralPairing& pairing,
                                                    double tol = kTwinTol) {
    const auto a = detectable_spectrum(state, a1);
    const auto b = detectable_spectrum(state, b2);
    if (!detail::labels_equal(a, b, pairing, tol)) return std::nullopt;
    return detail::strong_algebraic(state, a, b);
}

/// Evaluates all four correspondence conditions unconditionally. Throws
/// TwinConsistencyError when they contradict each other.
inline TwinReport verify_twins(const BipartiteState& state, const SubsystemObservable& a1,
                               const SubsystemObservable& b2, double tol = kTwinTol) {
    if (a1.side != Subsystem::first || b2.side != Subsystem::second) {
        throw Error(ErrorKind::DimensionMismatch, "verify_twins expects a side-1 and a side-2 observable");
    }
    a1.check(state.dims());
    b2.check(state.dims());
    const Dims& dims = state.dims();
    TwinReport report;
    report.tol = tol;
    report.commutator_a = commutator(a1.observable.matrix(), state.rho1().matrix()).norm();
    report.commutator_b = commutator(b2.observable.matrix(), state.rho2().matrix()).norm();

    const auto a = detectable_spectrum(state, a1);
    const auto b = detectable_spectrum(state, b2);
    report.detectable_a = a.size();
    report.detectable_b = b.size();
    report.spectra_match = a.size() == b.size();
    report.pairing = pair_spectra(state, a, b, tol);

    const Eigen::MatrixXd table = detectable_joint_table(state, a, b);
    const SpectralPairing pairing = report.pairing ? *report.pairing : detail::best_match(table);

    // (a) p_{ii'} = δ_{ii'} pᵢ, checked against both marginals.
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(table.rows(), table.cols());
    for (const auto& [i, j] : pairing.pairs) {
        target(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.probabilities[i];
    }
    double res_a = (table - target).cwiseAbs().maxCoeff();
    for (std::size_t j = 0; j < b.size(); ++j) {
        res_a = std::max(res_a, std::abs(b.probabilities[j] - target.col(static_cast<Eigen::Index>(j)).sum()));
    }
    report.residual_a = res_a;

    const double scale = state.matrix().norm();
    std::vector<bool> row_paired(a.size(), false), col_paired(b.size(), false);
    for (const auto& [i, j] : pairing.pairs) {
        row_paired[i] = col_paired[j] = true;
        const ComplexMatrix p1 = embed(a.projectors[i], dims, Subsystem::first);
        const ComplexMatrix p2 = embed(b.projectors[j], dims, Subsystem::second);
        const ComplexMatrix p1_rho = p1 * state.matrix();
        const ComplexMatrix p2_rho = p2 * state.matrix();
        // (b) P₁ⁱρP₁ⁱ = P₂ⁱρP₂ⁱ
        report.residual_b = std::max(report.residual_b, (p1_rho * p1 - p2_rho * p2).norm() / scale);
        // (c) Tr[ρ₂(P₁ⁱ) P₂ⁱ] = 1, ρ₂(P₁ⁱ) = pᵢ⁻¹ Tr₁ ρ₁₂P₁ⁱ
        const ComplexMatrix conditional = partial_trace(p1_rho, dims, Subsystem::second) / a.probabilities[i];
        report.residual_c =
            std::max(report.residual_c, std::abs(1.0 - trace_product(conditional, b.projectors[j]).real()));
        // (d) P₁ⁱρ = P₂ⁱρ
        report.residual_d = std::max(report.residual_d, (p1_rho - p2_rho).norm() / scale);
    }
    // A detectable value without a partner fails every condition against the zero projector.
    auto unpaired = [&](const ComplexMatrix& p) {
        const ComplexMatrix p_rho = p * state.matrix();
        report.residual_b = std::max(report.residual_b, (p_rho * p).norm() / scale);
        report.residual_c = 1.0;
        report.residual_d = std::max(report.residual_d, p_rho.norm() / scale);
    };
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!row_paired[i]) unpaired(embed(a.projectors[i], dims, Subsystem::first));
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!col_paired[j]) unpaired(embed(b.projectors[j], dims, Subsystem::second));

    const bool commute = report.commutator_a < tol && report.commutator_b < tol;
    bool all_conditions = true;
    for (double r : report.residuals()) all_conditions = all_conditions && r < tol;
    report.verdict = commute && report.pairing.has_value() && all_conditions;

    auto complete_side = [tol](const DetectableSpectrum& s) {
        for (const auto& p : s.projectors) {
            if (std::abs(trace_product(p, s.range_projector).real() - 1.0) >= tol) return false;
        }
        return true;
    };
    report.complete = report.verdict && complete_side(a) && complete_side(b);

    if (report.verdict && detail::labels_equal(a, b, *report.pairing, tol)) {
        report.strong_algebraic_residual = detail::strong_algebraic(state, a, b);
    }
    if (!report.conditions_agree()) throw TwinConsistencyError(report);
    return report;
}

namespace detail {

/// Extends orthonormal vectors to an orthonormal basis of C^d (as unitary columns).
inline ComplexMatrix complete_basis(const std::vector<ComplexVector>& vectors, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix u(n, n);
    ComplexMatrix covered = ComplexMatrix::Zero(n, n);
    Eigen::Index col = 0;
    for (const auto& v : vectors) {
        u.col(col++) = v;
        covered += outer(v);
    }
    if (col < n) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(ComplexMatrix::Identity(n, n) - covered));
        // Eigenvalue 1 directions sit at the top of the ascending spectrum.
        for (Eigen::Index k = n - 1; col < n; --k) u.col(col++) = solver.eigenvectors().col(k);
    }
    return u;
}

}  // namespace detail

/// Complete observables diagonal in the Schmidt bases of phi, labels 1, 2, 3, …
inline std::pair<SubsystemObservable, SubsystemObservable> construct_pure_twins(const ComplexVector& phi,
                                                                                const Dims& dims) {
    const SchmidtForm form = schmidt_decompose(phi, dims);
    const ComplexMatrix u1 = detail::complete_basis(form.basis1, dims.d1);
    const ComplexMatrix u2 = detail::complete_basis(form.basis2, dims.d2);
    return {SubsystemObservable{Observable::from_basis(u1), Subsystem::first},
            SubsystemObservable{Observable::from_basis(u2), Subsystem::second}};
}

/// Σ rᵢ |i⟩⟨i|₁ ⊗ |i⟩⟨i|₂ from the Schmidt form of phi.
inline BipartiteState dephase_in_schmidt_basis(const ComplexVector& phi, const Dims& dims) {
    const SchmidtForm form = schmidt_decompose(phi, dims);
    const auto n = static_cast<Eigen::Index>(dims.total());
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    const auto weights = form.weights();
    for (std::size_t i = 0; i < form.rank(); ++i) {
        rho += weights[i] * tensor_product(outer(form.basis1[i]), outer(form.basis2[i]));
    }
    rho /= rho.trace().real();
    return BipartiteState::make(DensityOperator::trusted(rho), dims);
}

}  // namespace qcorr
