#pragma once

// Projective observables and what their ideal (Lüders) measurement does to
// single-system and bipartite states.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/entropy.hpp"

namespace qcorr {

inline constexpr double kDetectable = 1e-10;

/// A Hermitian observable held in its unique spectral form Σ aᵢ Pᵢ.
class Observable {
public:
    static Observable from_matrix(const ComplexMatrix& m, double group_tol = kDefaultGroupTol) {
        return Observable(hermitian_eig(m, group_tol));
    }

    /// Labels must be distinct; projectors must be orthogonal and resolve the identity.
    static Observable from_spectrum(std::vector<double> labels, std::vector<ComplexMatrix> projectors) {
        if (labels.size() != projectors.size() || labels.empty()) {
            throw Error(ErrorKind::DimensionMismatch, "need one projector per eigenvalue");
        }
        const auto d = projectors.front().rows();
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (std::size_t i = 0; i < projectors.size(); ++i) {
            if (projectors[i].rows() != d || projectors[i].cols() != d) {
                throw Error(ErrorKind::DimensionMismatch, "projectors of differing sizes");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (labels[i] == labels[j]) {
                    throw Error(ErrorKind::InternalConsistency, "repeated eigenvalue " + std::to_string(labels[i]));
                }
                if ((projectors[i] * projectors[j]).norm() > 1e-8) {
                    throw Error(ErrorKind::InternalConsistency, "spectral projectors are not orthogonal");
                }
            }
            sum += projectors[i];
        }
        if ((sum - ComplexMatrix::Identity(d, d)).norm() > 1e-8) {
            throw Error(ErrorKind::InternalConsistency, "spectral projectors do not sum to the identity");
        }
        std::vector<std::size_t> order(labels.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
        SpectralDecomposition spec;
        for (auto i : order) {
            spec.eigenvalues.push_back(labels[i]);
            spec.multiplicities.push_back(static_cast<std::size_t>(std::lround(projectors[i].trace().real())));
            spec.projectors.push_back(hermitian_part(projectors[i]));
        }
        return Observable(std::move(spec));
    }

    /// Complete observable Σ labels[i] |uᵢ⟩⟨uᵢ| over the columns of a unitary.
    static Observable from_basis(const ComplexMatrix& unitary, std::vector<double> labels = {}) {
        if (labels.empty()) {
            labels.resize(static_cast<std::size_t>(unitary.cols()));
            std::iota(labels.begin(), labels.end(), 1.0);
        }
        std::vector<ComplexMatrix> projectors;
        for (Eigen::Index j = 0; j < unitary.cols(); ++j) projectors.push_back(outer(unitary.col(j)));
        return from_spectrum(std::move(labels), std::move(projectors));
    }

    const SpectralDecomposition& spectral() const { return spectral_; }
    const std::vector<double>& eigenvalues() const { return spectral_.eigenvalues; }
    const std::vector<ComplexMatrix>& projectors() const { return spectral_.projectors; }
    const ComplexMatrix& projector(std::size_t i) const { return spectral_.projectors[i]; }
    std::size_t size() const { return spectral_.size(); }
    std::size_t dim() const { return spectral_.dim(); }
    ComplexMatrix matrix() const { return spectral_.reconstruct(); }

    /// True iff every spectral projector has rank one.
    bool complete() const {
        return std::all_of(spectral_.multiplicities.begin(), spectral_.multiplicities.end(),
                           [](std::size_t m) { return m == 1; });
    }

private:
    explicit Observable(SpectralDecomposition spec) : spectral_(std::move(spec)) {}

    SpectralDecomposition spectral_;
};

/// An observable acting on one side of a bipartite system (A₁⊗1 or 1⊗B₂).
struct SubsystemObservable {
    Observable observable;
    Subsystem side = Subsystem::first;

    void check(const Dims& dims) const {
        if (observable.dim() != dims.of(side)) {
            throw Error(ErrorKind::DimensionMismatch,
                        "observable of dimension " + std::to_string(observable.dim()) + " on subsystem " +
                            std::to_string(static_cast<int>(side)) + " of " + to_string(dims));
        }
    }

    ComplexMatrix embedded_projector(std::size_t i, const Dims& dims) const {
        return embed(observable.projector(i), dims, side);
    }

    ComplexMatrix embedded_matrix(const Dims& dims) const { return embed(observable.matrix(), dims, side); }
};

/// Tr[ρ M] without forming the product.
inline Complex trace_product(const ComplexMatrix& rho, const ComplexMatrix& m) {
    return rho.cwiseProduct(m.transpose()).sum();
}

/// Nonselective ideal measurement: ρ ↦ Σ Pᵢ ρ Pᵢ.
inline ComplexMatrix luders_map(const std::vector<ComplexMatrix>& projectors, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& p : projectors) out += p * rho * p;
    return out;
}

inline DensityOperator luders_apply(const Observable& obs, const DensityOperator& rho) {
    if (obs.dim() != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "observable of dimension " + std::to_string(obs.dim()) +
                                                      " applied to state of dimension " + std::to_string(rho.dim()));
    }
    return DensityOperator::trusted(luders_map(obs.projectors(), rho.matrix()));
}

inline BipartiteState luders_apply_subsystem(const SubsystemObservable& sobs, const BipartiteState& state) {
    sobs.check(state.dims());
    std::vector<ComplexMatrix> embedded;
    embedded.reserve(sobs.observable.size());
    for (std::size_t i = 0; i < sobs.observable.size(); ++i) {
        embedded.push_back(sobs.embedded_projector(i, state.dims()));
    }
    return BipartiteState::make(DensityOperator::trusted(luders_map(embedded, state.matrix())), state.dims());
}

struct ConditionalOutcome {
    double probability = 0.0;
    DensityOperator state;
    double eigenvalue = 0.0;
    std::size_t index = 0;  // position in the observable's spectral form
};

/// ρ_opposite = Σ pᵢ ρ_oppositeⁱ induced by measuring on one side.
struct DistantDecomposition {
    std::vector<ConditionalOutcome> outcomes;
    std::vector<double> undetectable;

    ComplexMatrix mixture() const {
        ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(outcomes.front().state.dim()),
                                                static_cast<Eigen::Index>(outcomes.front().state.dim()));
        for (const auto& o : outcomes) out += o.probability * o.state.matrix();
        return out;
    }
};

/// Conditional states of the unmeasured side: ρⁱ = p⁻¹ Tr_s[(Pᵢ)ρ₁₂(Pᵢ)] for pᵢ > ε.
inline DistantDecomposition distant_decomposition(const BipartiteState& state, const SubsystemObservable& sobs,
                                                  double epsilon = kDetectable) {
    sobs.check(state.dims());
    const Subsystem other = opposite(sobs.side);
    DistantDecomposition out;
    for (std::size_t i = 0; i < sobs.observable.size(); ++i) {
        const ComplexMatrix p = sobs.embedded_projector(i, state.dims());
        const ComplexMatrix projected = p * state.matrix() * p;
        const double prob = projected.trace().real();
        if (prob > epsilon) {
            ComplexMatrix cond = partial_trace(projected, state.dims(), other) / prob;
            out.outcomes.push_back({prob, DensityOperator::trusted(cond), sobs.observable.eigenvalues()[i], i});
        } else {
            out.undetectable.push_back(sobs.observable.eigenvalues()[i]);
        }
    }
    return out;
}

/// I(m→opposite)_A = S(opposite) − Σ pᵢ S(ρ_oppositeⁱ).
inline Bits information_gain(const BipartiteState& state, const SubsystemObservable& sobs) {
    const auto decomposition = distant_decomposition(state, sobs);
    double average = 0.0;
    for (const auto& o : decomposition.outcomes) average += o.probability * entropy_of_matrix(o.state.matrix());
    const double s_other = entropy_of_matrix(state.reduced(opposite(sobs.side)).matrix());
    return Bits::clamped(s_other - average, "information gain");
}

/// Classical outcome table of the simultaneous measurement A₁ ∧ B₂.
struct JointDistribution {
    Eigen::MatrixXd p;
    std::vector<double> row_marginals;
    std::vector<double> col_marginals;
    std::vector<double> row_labels;
    std::vector<double> col_labels;

    static JointDistribution from_table(Eigen::MatrixXd table, std::vector<double> row_labels = {},
                                        std::vector<double> col_labels = {}) {
        for (Eigen::Index i = 0; i < table.size(); ++i) {
            double& x = table.data()[i];
            if (x < -1e-12) throw Error(ErrorKind::NotADistribution, "negative joint probability");
            if (x < 0.0) x = 0.0;
        }
        if (std::abs(table.sum() - 1.0) > 1e-8) {
            throw Error(ErrorKind::NotADistribution, "joint probabilities sum to " + std::to_string(table.sum()));
        }
        JointDistribution jd;
        for (Eigen::Index i = 0; i < table.rows(); ++i) jd.row_marginals.push_back(table.row(i).sum());
        for (Eigen::Index j = 0; j < table.cols(); ++j) jd.col_marginals.push_back(table.col(j).sum());
        if (row_labels.empty()) row_labels.assign(static_cast<std::size_t>(table.rows()), 0.0);
        if (col_labels.empty()) col_labels.assign(static_cast<std::size_t>(table.cols()), 0.0);
        jd.row_labels = std::move(row_labels);
        jd.col_labels = std::move(col_labels);
        jd.p = std::move(table);
        return jd;
    }
};

/// pᵢⱼ = Tr[ρ₁₂ (P₁ⁱ ⊗ P₂ʲ)].
inline JointDistribution joint_distribution(const BipartiteState& state, const SubsystemObservable& a1,
                                            const SubsystemObservable& b2) {
    if (a1.side != Subsystem::first || b2.side != Subsystem::second) {
        throw Error(ErrorKind::DimensionMismatch, "joint_distribution expects a side-1 and a side-2 observable");
    }
    a1.check(state.dims());
    b2.check(state.dims());
    const auto n1 = static_cast<Eigen::Index>(a1.observable.size());
    const auto n2 = static_cast<Eigen::Index>(b2.observable.size());
    Eigen::MatrixXd table(n1, n2);
    for (Eigen::Index i = 0; i < n1; ++i) {
        for (Eigen::Index j = 0; j < n2; ++j) {
            const ComplexMatrix pq = tensor_product(a1.observable.projector(static_cast<std::size_t>(i)),
                                                    b2.observable.projector(static_cast<std::size_t>(j)));
            table(i, j) = trace_product(state.matrix(), pq).real();
        }
    }
    return JointDistribution::from_table(std::move(table), a1.observable.eigenvalues(), b2.observable.eigenvalues());
}

/// I(m1:m2)_{A∧B} = H(A) + H(B) − H(A,B).
inline Bits joint_mutual_information(const JointDistribution& jd) {
    const std::vector<double> flat(jd.p.data(), jd.p.data() + jd.p.size());
    const double h_ab = shannon_entropy(flat);
    const double h_a = shannon_entropy(jd.row_marginals);
    const double h_b = shannon_entropy(jd.col_marginals);
    return Bits::clamped(h_a + h_b - h_ab, "joint mutual information");
}

/// E_C(A, ρ) = S(T_A ρ) − S(ρ).
inline Bits entropy_of_coherence(const Observable& obs, const DensityOperator& rho) {
    const DensityOperator dephased = luders_apply(obs, rho);
    return Bits::clamped(entropy_of_matrix(dephased.matrix()) - entropy_of_matrix(rho.matrix()),
                         "entropy of coherence");
}

/// E_C split by the mixing property: E_C = H(A) − [S(ρ) − Σ wᵢ S(ρᵢ)].
struct CoherenceDecomposition {
    Bits mixing_entropy;  // H(A) = H(wᵢ)
    Bits deficit;         // S(ρ) − Σ wᵢ S(ρᵢ)
    std::vector<double> weights;
    std::vector<std::optional<DensityOperator>> conditionals;  // empty where wᵢ ≤ ε

    double value() const { return mixing_entropy.value - deficit.value; }
};

inline CoherenceDecomposition coherence_decomposition(const Observable& obs, const DensityOperator& rho,
                                                      double epsilon = kDetectable) {
    if (obs.dim() != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "coherence_decomposition: dimension mismatch");
    }
    CoherenceDecomposition out;
    double average = 0.0;
    for (const auto& p : obs.projectors()) {
        const ComplexMatrix projected = p * rho.matrix() * p;
        const double w = projected.trace().real();
        out.weights.push_back(std::max(w, 0.0));
        if (w > epsilon) {
            auto cond = DensityOperator::trusted(projected / w);
            average += w * entropy_of_matrix(cond.matrix());
            out.conditionals.emplace_back(std::move(cond));
        } else {
            out.conditionals.emplace_back(std::nullopt);
        }
    }
    double total = 0.0;
    for (double w : out.weights) total += w;
    for (double& w : out.weights) w /= total;
    out.mixing_entropy = shannon_entropy(out.weights);
    out.deficit = Bits::clamped(entropy_of_matrix(rho.matrix()) - average, "coherence deficit");
    return out;
}

// ---------------------------------------------------------------------------
// Random observables for sweeps and property tests.

/// Complete observable in a Haar-random basis with labels 1..d.
inline Observable random_complete_observable(std::size_t d, Rng& rng) {
    return Observable::from_basis(random_unitary(d, rng));
}

/// Observable in a Haar-random basis whose basis vectors are split into a random
/// number of nonempty groups (incomplete whenever a group has two or more vectors).
inline Observable random_observable(std::size_t d, Rng& rng) {
    const ComplexMatrix u = random_unitary(d, rng);
    const std::size_t groups = 1 + rng.index(d);
    std::vector<std::size_t> assignment(d);
    for (std::size_t j = 0; j < d; ++j) assignment[j] = j < groups ? j : rng.index(groups);
    std::vector<ComplexMatrix> projectors(groups, ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                                                      static_cast<Eigen::Index>(d)));
    for (std::size_t j = 0; j < d; ++j) projectors[assignment[j]] += outer(u.col(static_cast<Eigen::Index>(j)));
    std::vector<double> labels(groups);
    for (std::size_t g = 0; g < groups; ++g) labels[g] = static_cast<double>(g) + rng.uniform(0.1, 0.9);
    return Observable::from_spectrum(std::move(labels), std::move(projectors));
}

}  // namespace qcorr
