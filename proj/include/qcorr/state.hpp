#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "qcorr/numeric.hpp"

namespace qcorr {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kSchmidtDrop = 1e-10;

/// A validated statistical operator: Hermitian, positive semidefinite, unit trace.
class DensityOperator {
public:
    /// Throws NotHermitian, TraceNotOne or NegativeEigenvalue (checked in that order).
    static DensityOperator validate(const ComplexMatrix& m, double tol = kStateTol) {
        if (m.rows() != m.cols() || m.rows() < 1) {
            throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
        }
        const double asym = (m - m.adjoint()).norm();
        if (asym > tol) {
            throw Error(ErrorKind::NotHermitian, "||rho - rho^dagger||_F = " + std::to_string(asym));
        }
        const double trace = m.trace().real();
        if (std::abs(trace - 1.0) > tol) {
            throw Error(ErrorKind::TraceNotOne, "trace = " + std::to_string(trace));
        }
        const ComplexMatrix h = hermitian_part(m);
        const double min_eig = hermitian_eigenvalues(h).minCoeff();
        if (min_eig < -tol) {
            throw Error(ErrorKind::NegativeEigenvalue, "smallest eigenvalue = " + std::to_string(min_eig));
        }
        return DensityOperator(h);
    }

    /// For operators that are states by construction (Lüders images, conditional
    /// states, products of states). Only the Hermitian part is kept.
    static DensityOperator trusted(const ComplexMatrix& m) { return DensityOperator(hermitian_part(m)); }

    static DensityOperator pure(const ComplexVector& phi) { return DensityOperator(outer(phi)); }

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    double purity() const { return (matrix_ * matrix_).trace().real(); }

private:
    explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {}

    ComplexMatrix matrix_;
};

/// ρ₁₂ with its two reductions computed once at construction.
class BipartiteState {
public:
    static BipartiteState make(const ComplexMatrix& m, const Dims& dims) {
        check_side(m, dims);
        return BipartiteState(DensityOperator::validate(m), dims);
    }

    static BipartiteState make(const DensityOperator& rho, const Dims& dims) {
        check_side(rho.matrix(), dims);
        return BipartiteState(rho, dims);
    }

    static BipartiteState pure(const ComplexVector& phi, const Dims& dims);

    const DensityOperator& rho12() const { return rho12_; }
    const DensityOperator& rho1() const { return rho1_; }
    const DensityOperator& rho2() const { return rho2_; }
    const DensityOperator& reduced(Subsystem s) const { return s == Subsystem::first ? rho1_ : rho2_; }
    const Dims& dims() const { return dims_; }
    const ComplexMatrix& matrix() const { return rho12_.matrix(); }

private:
    BipartiteState(DensityOperator rho, const Dims& dims)
        : rho12_(std::move(rho)),
          dims_(dims),
          rho1_(DensityOperator::trusted(partial_trace(rho12_.matrix(), dims, Subsystem::first))),
          rho2_(DensityOperator::trusted(partial_trace(rho12_.matrix(), dims, Subsystem::second))) {}

    static void check_side(const ComplexMatrix& m, const Dims& dims) {
        if (static_cast<std::size_t>(m.rows()) != dims.total() || m.rows() != m.cols()) {
            throw Error(ErrorKind::DimensionMismatch, "matrix of side " + std::to_string(m.rows()) +
                                                          " does not match dims " + to_string(dims));
        }
    }

    DensityOperator rho12_;
    Dims dims_;
    DensityOperator rho1_;
    DensityOperator rho2_;
};

inline BipartiteState make_bipartite(const ComplexMatrix& m, const Dims& dims) {
    return BipartiteState::make(m, dims);
}

enum class Purity { pure, mixed };

inline const char* to_string(Purity p) { return p == Purity::pure ? "pure" : "mixed"; }

inline Purity purity_class(const DensityOperator& rho, double tol = 1e-9) {
    return rho.purity() > 1.0 - tol ? Purity::pure : Purity::mixed;
}

inline void require_unit_vector(const ComplexVector& phi, double tol = kStateTol) {
    const double norm = phi.norm();
    if (std::abs(norm - 1.0) > tol) {
        throw Error(ErrorKind::NonUnitVector, "||phi|| = " + std::to_string(norm));
    }
}

inline BipartiteState BipartiteState::pure(const ComplexVector& phi, const Dims& dims) {
    require_unit_vector(phi);
    if (static_cast<std::size_t>(phi.size()) != dims.total()) {
        throw Error(ErrorKind::DimensionMismatch, "vector length " + std::to_string(phi.size()) +
                                                      " does not match dims " + to_string(dims));
    }
    return BipartiteState(DensityOperator::pure(phi), dims);
}

/// |Φ⟩ = Σ coefficients[i]·basis1[i]⊗basis2[i], coefficients nonincreasing.
struct SchmidtForm {
    std::vector<double> coefficients;
    std::vector<ComplexVector> basis1;
    std::vector<ComplexVector> basis2;

    std::size_t rank() const { return coefficients.size(); }

    /// Squared coefficients r_i, the common nonzero spectrum of ρ₁ and ρ₂.
    std::vector<double> weights() const {
        std::vector<double> out;
        out.reserve(coefficients.size());
        for (double c : coefficients) out.push_back(c * c);
        return out;
    }

    ComplexVector reconstruct() const {
        const auto n = basis1.front().size() * basis2.front().size();
        ComplexVector out = ComplexVector::Zero(n);
        for (std::size_t i = 0; i < rank(); ++i) out += coefficients[i] * tensor_product(basis1[i], basis2[i]);
        return out;
    }
};

namespace detail {

inline Complex first_nonzero_phase(const ComplexVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-12) return v(i) / mag;
    }
    return Complex(1.0, 0.0);
}

}  // namespace detail

/// SVD of the d1×d2 coefficient matrix. Each basis-1 vector is rephased so its
/// first nonzero component is real and positive; the compensating phase lives
/// in the paired basis-2 vector.
inline SchmidtForm schmidt_decompose(const ComplexVector& phi, const Dims& dims) {
    require_unit_vector(phi);
    if (static_cast<std::size_t>(phi.size()) != dims.total()) {
        throw Error(ErrorKind::DimensionMismatch, "vector length does not match dims " + to_string(dims));
    }
    const auto d1 = static_cast<Eigen::Index>(dims.d1);
    const auto d2 = static_cast<Eigen::Index>(dims.d2);
    ComplexMatrix coeff(d1, d2);
    for (Eigen::Index a = 0; a < d1; ++a)
        for (Eigen::Index b = 0; b < d2; ++b) coeff(a, b) = phi(a * d2 + b);

    Eigen::JacobiSVD<ComplexMatrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    SchmidtForm out;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) < kSchmidtDrop) continue;
        ComplexVector u = svd.matrixU().col(k);
        ComplexVector v = svd.matrixV().col(k).conjugate();
        const Complex phase = detail::first_nonzero_phase(u);
        u *= std::conj(phase);
        v *= phase;
        out.coefficients.push_back(sv(k));
        out.basis1.push_back(std::move(u));
        out.basis2.push_back(std::move(v));
    }
    return out;
}

}  // namespace qcorr
