#pragma once

// Dense complex linear algebra for small bipartite systems: Kronecker
// products, partial traces, grouped Hermitian spectral decompositions,
// spectral matrix functions and seeded Haar sampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcorr/error.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultGroupTol = 1e-8;
inline constexpr double kDefaultClip = 1e-12;
inline constexpr double kHermitianTol = 1e-10;

enum class Subsystem { first = 1, second = 2 };

inline Subsystem opposite(Subsystem s) {
    return s == Subsystem::first ? Subsystem::second : Subsystem::first;
}

struct Dims {
    std::size_t d1 = 1;
    std::size_t d2 = 1;

    Dims() = default;
    Dims(std::size_t a, std::size_t b) : d1(a), d2(b) {
        if (d1 < 1 || d2 < 1) {
            throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions must be >= 1");
        }
    }

    std::size_t total() const { return d1 * d2; }
    std::size_t of(Subsystem s) const { return s == Subsystem::first ? d1 : d2; }

    friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string to_string(const Dims& dims) {
    return std::to_string(dims.d1) + "x" + std::to_string(dims.d2);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "frobenius_distance on differently shaped matrices");
    }
    return (a - b).norm();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexMatrix identity(std::size_t d) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Embeds a single-subsystem operator into the composite space as op⊗1 or 1⊗op.
inline ComplexMatrix embed(const ComplexMatrix& op, const Dims& dims, Subsystem side) {
    if (static_cast<std::size_t>(op.rows()) != dims.of(side) || op.rows() != op.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "operator of side " + std::to_string(op.rows()) + " does not fit subsystem " +
                        std::to_string(static_cast<int>(side)) + " of " + to_string(dims));
    }
    return side == Subsystem::first ? tensor_product(op, identity(dims.d2))
                                    : tensor_product(identity(dims.d1), op);
}

/// Traces out the subsystem that is not `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, Subsystem keep) {
    const auto d1 = static_cast<Eigen::Index>(dims.d1);
    const auto d2 = static_cast<Eigen::Index>(dims.d2);
    if (m.rows() != d1 * d2 || m.cols() != d1 * d2) {
        throw Error(ErrorKind::DimensionMismatch,
                    "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", dims are " + to_string(dims));
    }
    if (keep == Subsystem::first) {
        ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
        for (Eigen::Index a = 0; a < d1; ++a)
            for (Eigen::Index b = 0; b < d1; ++b)
                for (Eigen::Index k = 0; k < d2; ++k) out(a, b) += m(a * d2 + k, b * d2 + k);
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (Eigen::Index a = 0; a < d1; ++a) out += m.block(a * d2, a * d2, d2, d2);
    return out;
}

/// Spectral form with distinct eigenvalues: m = Σ eigenvalues[i]·projectors[i].
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<ComplexMatrix> projectors;
    std::vector<std::size_t> multiplicities;

    std::size_t size() const { return eigenvalues.size(); }
    std::size_t dim() const { return projectors.empty() ? 0 : static_cast<std::size_t>(projectors.front().rows()); }

    ComplexMatrix reconstruct() const {
        ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
        for (std::size_t i = 0; i < size(); ++i) out += eigenvalues[i] * projectors[i];
        return out;
    }
};

inline void require_hermitian(const ComplexMatrix& m, const char* where) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(where) + ": matrix is not square");
    }
    if (!is_hermitian(m)) {
        throw Error(ErrorKind::NotHermitian,
                    std::string(where) + ": ||m - m^dagger||_F = " + std::to_string((m - m.adjoint()).norm()));
    }
}

/// Eigenvalues closer than group_tol·(1+|λ|) to their predecessor are merged
/// into one spectral projector before the projectors are formed.
inline SpectralDecomposition hermitian_eig(const ComplexMatrix& m, double group_tol = kDefaultGroupTol) {
    require_hermitian(m, "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    const RealVector& values = solver.eigenvalues();
    const ComplexMatrix& vectors = solver.eigenvectors();

    SpectralDecomposition out;
    Eigen::Index start = 0;
    const Eigen::Index n = values.size();
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && values(end) - values(end - 1) < group_tol * (1.0 + std::abs(values(end - 1)))) ++end;
        const Eigen::Index count = end - start;
        auto block = vectors.middleCols(start, count);
        out.eigenvalues.push_back(values.segment(start, count).mean());
        out.projectors.push_back(block * block.adjoint());
        out.multiplicities.push_back(static_cast<std::size_t>(count));
        start = end;
    }
    return out;
}

/// Eigenvalues of a Hermitian matrix in ascending order (no grouping).
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

/// Applies f to the eigenvalues above clip; the rest of the spectrum maps to 0.
inline ComplexMatrix matrix_fn_on_support(const ComplexMatrix& m, const std::function<double(double)>& f,
                                          double clip = kDefaultClip) {
    require_hermitian(m, "matrix_fn_on_support");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    RealVector mapped = solver.eigenvalues();
    for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = mapped(i) > clip ? f(mapped(i)) : 0.0;
    const ComplexMatrix& v = solver.eigenvectors();
    return v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
}

/// Orthogonal projector onto the eigenvectors whose eigenvalue exceeds clip.
inline ComplexMatrix range_projector(const ComplexMatrix& m, double clip = kDefaultClip) {
    return matrix_fn_on_support(m, [](double) { return 1.0; }, clip);
}

// ---------------------------------------------------------------------------
// Seeded sampling

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed for stream `index` of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Deterministic generator: every draw is a pure function of (seed, stream, call order).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive_seed(seed, stream)) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    /// Standard complex Gaussian, E|z|² = 1.
    Complex complex_normal() { return Complex(normal(), normal()) * M_SQRT1_2; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
    return g;
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's diagonal
/// moved into Q.
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const Complex diag = r(j, j);
        const double mag = std::abs(diag);
        if (mag > 0.0) q.col(j) *= diag / mag;
    }
    return q;
}

inline ComplexVector random_unit_vector(std::size_t n, Rng& rng) {
    ComplexVector v = ginibre(n, 1, rng).col(0);
    return v / v.norm();
}

inline ComplexVector sample_random_pure(const Dims& dims, Rng& rng) {
    return random_unit_vector(dims.total(), rng);
}

inline ComplexVector sample_random_pure(const Dims& dims, std::uint64_t seed) {
    Rng rng(seed);
    return sample_random_pure(dims, rng);
}

/// Reduced state of a Haar-random purification with an ancilla of dimension `rank`.
inline ComplexMatrix sample_random_density(const Dims& dims, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > dims.total()) {
        throw Error(ErrorKind::RankOutOfRange,
                    "rank " + std::to_string(rank) + " not in [1, " + std::to_string(dims.total()) + "]");
    }
    ComplexMatrix g = ginibre(dims.total(), rank, rng);
    g /= g.norm();
    return hermitian_part(g * g.adjoint());
}

inline ComplexMatrix sample_random_density(const Dims& dims, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return sample_random_density(dims, rank, rng);
}

}  // namespace qcorr
