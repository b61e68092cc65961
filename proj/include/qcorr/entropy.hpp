#pragma once

// Entropies in bits and the correlation quantities built from them.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qcorr/state.hpp"

namespace qcorr {

inline constexpr double kNegativeClamp = 1e-9;
inline constexpr double kSupportLeak = 1e-10;

/// An information quantity in bits; either finite and nonnegative or +∞.
struct Bits {
    double value = 0.0;
    bool infinite = false;

    static Bits inf() { return Bits{std::numeric_limits<double>::infinity(), true}; }

    /// Round-off negatives down to -1e-9 become 0; anything lower is an error.
    static Bits clamped(double v, const char* what = "information quantity") {
        if (v < -kNegativeClamp) {
            throw Error(ErrorKind::NegativeInformation, std::string(what) + " = " + std::to_string(v));
        }
        return Bits{v < 0.0 ? 0.0 : v, false};
    }

    operator double() const { return value; }
};

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/// −Σ λ log₂ λ over the entries above clip.
inline double spectrum_entropy(const RealVector& eigenvalues, double clip = kDefaultClip) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) > clip) s -= xlog2x(eigenvalues(i));
    }
    return s;
}

inline double entropy_of_matrix(const ComplexMatrix& rho) { return spectrum_entropy(hermitian_eigenvalues(rho)); }

inline Bits von_neumann_entropy(const DensityOperator& rho) {
    return Bits::clamped(entropy_of_matrix(rho.matrix()), "von Neumann entropy");
}

inline Bits shannon_entropy(std::span<const double> p) {
    double total = 0.0;
    for (double x : p) {
        if (x < -1e-12) throw Error(ErrorKind::NotADistribution, "negative probability " + std::to_string(x));
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw Error(ErrorKind::NotADistribution, "probabilities sum to " + std::to_string(total));
    }
    double h = 0.0;
    for (double x : p) h -= xlog2x(x);
    return Bits::clamped(h, "Shannon entropy");
}

/// S(σ|ρ) = Tr σ log σ − Tr σ log ρ, evaluated on the range of ρ. Returns +∞
/// when σ puts more than 1e-10 of its weight outside that range.
inline Bits relative_entropy(const DensityOperator& sigma, const DensityOperator& rho) {
    if (sigma.dim() != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "relative_entropy of operators with sides " +
                                                      std::to_string(sigma.dim()) + " and " +
                                                      std::to_string(rho.dim()));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
    const RealVector& lambda = solver.eigenvalues();
    const ComplexMatrix& v = solver.eigenvectors();
    const ComplexMatrix sigma_in_rho_basis = v.adjoint() * sigma.matrix() * v;

    double leak = 0.0;
    double cross = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        const double w = sigma_in_rho_basis(k, k).real();
        if (lambda(k) > kDefaultClip) {
            cross += w * std::log2(lambda(k));
        } else {
            leak += w;
        }
    }
    if (leak > kSupportLeak) return Bits::inf();
    const double neg_entropy = -entropy_of_matrix(sigma.matrix());
    return Bits::clamped(neg_entropy - cross, "relative entropy");
}

/// I(1:2) = S(1) + S(2) − S(12).
inline Bits mutual_information(const BipartiteState& state) {
    const double s1 = entropy_of_matrix(state.rho1().matrix());
    const double s2 = entropy_of_matrix(state.rho2().matrix());
    const double s12 = entropy_of_matrix(state.matrix());
    return Bits::clamped(s1 + s2 - s12, "mutual information");
}

inline DensityOperator product_of_marginals(const BipartiteState& state) {
    return DensityOperator::trusted(tensor_product(state.rho1().matrix(), state.rho2().matrix()));
}

/// I(1:2) as S(ρ₁₂ | ρ₁⊗ρ₂).
inline Bits mutual_information_via_relative(const BipartiteState& state) {
    return relative_entropy(state.rho12(), product_of_marginals(state));
}

/// S(ρ₁) of a pure bipartite vector.
inline Bits entanglement_entropy(const ComplexVector& phi, const Dims& dims) {
    const BipartiteState state = BipartiteState::pure(phi, dims);
    return von_neumann_entropy(state.rho1());
}

}  // namespace qcorr
