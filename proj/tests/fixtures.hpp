#pragma once

// Shared states and helpers for the test suites.

#include <cmath>
#include <vector>

#include "qcorr/measurement.hpp"

namespace qcorr::testing {

inline ComplexVector ket(std::initializer_list<Complex> amps) {
    ComplexVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (auto a : amps) v(i++) = a;
    return v;
}

inline ComplexVector basis_ket(std::size_t d, std::size_t i) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                          static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

inline ComplexMatrix sigma_x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix sigma_y() {
    return (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
inline ComplexMatrix sigma_z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }

inline ComplexVector bell_phi_plus() {
    return ket({M_SQRT1_2, 0, 0, M_SQRT1_2});
}

inline ComplexVector plus_ket() { return ket({M_SQRT1_2, M_SQRT1_2}); }

inline BipartiteState bell_state() { return BipartiteState::pure(bell_phi_plus(), Dims(2, 2)); }

inline SubsystemObservable z_on(Subsystem s) { return {Observable::from_matrix(sigma_z()), s}; }
inline SubsystemObservable x_on(Subsystem s) { return {Observable::from_matrix(sigma_x()), s}; }

inline double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0) h -= p * std::log2(p);
    if (p < 1) h -= (1 - p) * std::log2(1 - p);
    return h;
}

/// ρ₁⊗ρ₂ from two independent random states.
inline BipartiteState random_product_state(const Dims& dims, Rng& rng) {
    const ComplexMatrix r1 = sample_random_density(Dims(dims.d1, 1), 1 + rng.index(dims.d1), rng);
    const ComplexMatrix r2 = sample_random_density(Dims(dims.d2, 1), 1 + rng.index(dims.d2), rng);
    return BipartiteState::make(tensor_product(r1, r2), dims);
}

/// Σ rᵢ |i⟩⟨i| ⊗ |i⟩⟨i| in the Schmidt bases of phi, built directly from an SVD
/// of the coefficient matrix (independent of the library's Schmidt routine).
inline ComplexMatrix dephased_by_svd(const ComplexVector& phi, const Dims& dims) {
    const auto d1 = static_cast<Eigen::Index>(dims.d1);
    const auto d2 = static_cast<Eigen::Index>(dims.d2);
    ComplexMatrix c(d1, d2);
    for (Eigen::Index a = 0; a < d1; ++a)
        for (Eigen::Index b = 0; b < d2; ++b) c(a, b) = phi(a * d2 + b);
    Eigen::BDCSVD<ComplexMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ComplexMatrix out = ComplexMatrix::Zero(d1 * d2, d1 * d2);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double s = svd.singularValues()(k);
        const ComplexVector v = tensor_product(ComplexVector(svd.matrixU().col(k)),
                                               ComplexVector(svd.matrixV().col(k).conjugate()));
        out += s * s * outer(v);
    }
    return out;
}

}  // namespace qcorr::testing
