#pragma once

// Suprema of the measurement-accessible informations over complete
// measurement bases, and the quantum discord built on them.
//
// Bases are parametrized locally: U = U₀·exp(−i·G(p)/2), where G(p) is a
// Hermitian generator expanded in a fixed operator basis and U₀ is the
// restart's starting basis. Every restart runs Nelder–Mead on p from 0.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qcorr/measurement.hpp"
#include "qcorr/nelder_mead.hpp"

namespace qcorr {

struct OptimizationConfig {
    std::size_t restarts = 32;
    std::size_t max_iterations = 2000;
    double f_tol = 1e-8;
    std::uint64_t seed = 0;
    bool grid_refine = true;  // qubit-only deterministic (θ, φ) grid prepass
    std::size_t max_sweeps = 10;

    void check() const {
        if (restarts < 1) throw Error(ErrorKind::RankOutOfRange, "restarts must be >= 1");
        if (!(f_tol > 0.0)) throw Error(ErrorKind::RankOutOfRange, "f_tol must be > 0");
    }
};

/// Coordinates of a Hermitian generator. Layout for dimension d: for each
/// pair j<k the symmetric (E_jk + E_kj) and antisymmetric −i(E_jk − E_kj)
/// coefficients, then d−1 diagonal generalized Gell-Mann coefficients, then
/// the identity coefficient. For d = 2 this is (σx, σy, σz, 1).
struct BasisParams {
    RealVector params;

    static BasisParams zero(std::size_t d) { return {RealVector::Zero(static_cast<Eigen::Index>(d * d))}; }
};

inline ComplexMatrix generator_from_params(const RealVector& p, std::size_t d) {
    if (static_cast<std::size_t>(p.size()) != d * d) {
        throw Error(ErrorKind::DimensionMismatch,
                    "basis parameters of length " + std::to_string(p.size()) + " for dimension " + std::to_string(d));
    }
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j + 1; k < n; ++k) {
            const double s = p(idx++);
            const double a = p(idx++);
            g(j, k) += Complex(s, -a);
            g(k, j) += Complex(s, a);
        }
    }
    for (Eigen::Index l = 1; l < n; ++l) {
        const double c = p(idx++) * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        for (Eigen::Index m = 0; m < l; ++m) g(m, m) += c;
        g(l, l) -= c * static_cast<double>(l);
    }
    const double id = p(idx);
    for (Eigen::Index m = 0; m < n; ++m) g(m, m) += id;
    return g;
}

/// exp(−i·G/2) for Hermitian G.
inline ComplexMatrix unitary_from_generator(const ComplexMatrix& g) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(g);
    const RealVector& lambda = solver.eigenvalues();
    Eigen::VectorXcd phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -0.5 * lambda(i));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

inline ComplexMatrix unitary_from_params(const BasisParams& p, std::size_t d) {
    return unitary_from_generator(generator_from_params(p.params, d));
}

/// Rank-one PVM on the columns of exp(−i·G(p)/2), labels 1..d.
inline Observable basis_from_params(const BasisParams& p, std::size_t d) {
    return Observable::from_basis(unitary_from_params(p, d));
}

/// Columns of the returned unitary are the orthonormal basis found.
struct SupremumResult {
    Bits value;
    ComplexMatrix argmax_basis;
    std::optional<ComplexMatrix> argmax_partner;  // side-2 basis for joint suprema
    std::size_t restarts_agreeing = 0;
    bool converged = false;
    std::vector<double> restart_values;
};

namespace detail {

inline ComplexMatrix local_rotation(const ComplexMatrix& u, const Dims& dims, Subsystem side) {
    return side == Subsystem::first ? tensor_product(u, identity(dims.d2)) : tensor_product(identity(dims.d1), u);
}

/// I(m_side → opposite) for the rank-one measurement on the columns of u.
inline double gain_for_basis(const BipartiteState& state, const ComplexMatrix& u, Subsystem side, double s_opposite) {
    const Dims& dims = state.dims();
    const ComplexMatrix w = local_rotation(u, dims, side);
    const ComplexMatrix rotated = w.adjoint() * state.matrix() * w;
    const auto d1 = static_cast<Eigen::Index>(dims.d1);
    const auto d2 = static_cast<Eigen::Index>(dims.d2);
    double average = 0.0;
    if (side == Subsystem::first) {
        for (Eigen::Index i = 0; i < d1; ++i) {
            const ComplexMatrix block = rotated.block(i * d2, i * d2, d2, d2);
            const double p = block.trace().real();
            if (p > kDetectable) average += p * spectrum_entropy(hermitian_eigenvalues(block / p));
        }
    } else {
        for (Eigen::Index j = 0; j < d2; ++j) {
            ComplexMatrix block(d1, d1);
            for (Eigen::Index a = 0; a < d1; ++a)
                for (Eigen::Index b = 0; b < d1; ++b) block(a, b) = rotated(a * d2 + j, b * d2 + j);
            const double p = block.trace().real();
            if (p > kDetectable) average += p * spectrum_entropy(hermitian_eigenvalues(block / p));
        }
    }
    return s_opposite - average;
}

inline double jmi_for_bases(const BipartiteState& state, const ComplexMatrix& ua, const ComplexMatrix& ub) {
    const ComplexMatrix w = tensor_product(ua, ub);
    const ComplexMatrix rotated = w.adjoint() * state.matrix() * w;
    const auto d1 = ua.cols();
    const auto d2 = ub.cols();
    Eigen::MatrixXd p(d1, d2);
    for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d2; ++j) p(i, j) = std::max(rotated(i * d2 + j, i * d2 + j).real(), 0.0);
    p /= p.sum();
    double h_ab = 0.0, h_a = 0.0, h_b = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) h_ab -= xlog2x(p.data()[i]);
    for (Eigen::Index i = 0; i < d1; ++i) h_a -= xlog2x(p.row(i).sum());
    for (Eigen::Index j = 0; j < d2; ++j) h_b -= xlog2x(p.col(j).sum());
    return h_a + h_b - h_ab;
}

/// Only the off-diagonal generator coordinates move the basis; the diagonal
/// and identity directions only rephase columns.
inline std::size_t search_dim(std::size_t d) { return d * (d - 1); }

inline ComplexMatrix chart(const ComplexMatrix& u0, const Eigen::VectorXd& x, std::size_t d) {
    BasisParams p = BasisParams::zero(d);
    p.params.head(x.size()) = x;
    return u0 * unitary_from_params(p, d);
}

struct LocalRun {
    ComplexMatrix basis;
    double value = 0.0;
    bool converged = false;
};

/// Maximizes objective(U) starting at u0, then polishes once from the optimum.
inline LocalRun maximize_basis(const std::function<double(const ComplexMatrix&)>& objective, const ComplexMatrix& u0,
                               const OptimizationConfig& cfg) {
    const auto d = static_cast<std::size_t>(u0.rows());
    NelderMeadOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.f_tol = cfg.f_tol;
    LocalRun run{u0, objective(u0), true};
    if (d < 2) return run;
    ComplexMatrix current = u0;
    for (int pass = 0; pass < 2; ++pass) {
        opt.initial_step = pass == 0 ? 0.5 : 0.05;
        const auto res = nelder_mead([&](const Eigen::VectorXd& x) { return -objective(chart(current, x, d)); },
                                     Eigen::VectorXd::Zero(static_cast<Eigen::Index>(search_dim(d))), opt);
        run.converged = res.converged;
        if (-res.value > run.value) {
            current = chart(current, res.x, d);
            run.value = -res.value;
            run.basis = current;
        }
    }
    return run;
}

inline ComplexMatrix eigenbasis(const DensityOperator& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
    return solver.eigenvectors().rowwise().reverse();
}

inline ComplexMatrix bloch_basis(double theta, double phi) {
    ComplexMatrix u(2, 2);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    u(0, 0) = c;
    u(1, 0) = std::polar(s, phi);
    u(0, 1) = -std::polar(s, -phi);
    u(1, 1) = c;
    return u;
}

}  // namespace detail

struct GridOptimum {
    double value = -std::numeric_limits<double>::infinity();
    double theta = 0.0;
    double phi = 0.0;
    ComplexMatrix basis;
};

/// Deterministic scan of qubit measurement directions on the Bloch sphere.
inline GridOptimum qubit_grid_information_gain(const BipartiteState& state, Subsystem side,
                                               std::size_t n_theta = 41, std::size_t n_phi = 80) {
    if (state.dims().of(side) != 2) {
        throw Error(ErrorKind::DimensionMismatch, "qubit grid needs a two-dimensional measured side");
    }
    const double s_opp = entropy_of_matrix(state.reduced(opposite(side)).matrix());
    GridOptimum best;
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double theta = M_PI * static_cast<double>(i) / static_cast<double>(n_theta - 1);
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double phi = 2 * M_PI * static_cast<double>(j) / static_cast<double>(n_phi);
            const ComplexMatrix u = detail::bloch_basis(theta, phi);
            const double v = detail::gain_for_basis(state, u, side, s_opp);
            if (v > best.value) best = {v, theta, phi, u};
            if (i == 0 || i + 1 == n_theta) break;  // poles: φ is irrelevant
        }
    }
    return best;
}

namespace detail {

inline void finalize(SupremumResult& out, const std::vector<bool>& converged, std::size_t best) {
    out.converged = converged[best];
    const double top = out.restart_values[best];
    out.restarts_agreeing = 0;
    for (double v : out.restart_values) out.restarts_agreeing += v >= top - 1e-6 ? 1 : 0;
    out.value = Bits::clamped(top, "supremum");
}

}  // namespace detail

/// sup over complete bases on `side` of the information gain about the other side.
inline SupremumResult sup_information_gain(const BipartiteState& state, Subsystem side,
                                           const OptimizationConfig& cfg = {}) {
    cfg.check();
    const std::size_t d = state.dims().of(side);
    const double s_opp = entropy_of_matrix(state.reduced(opposite(side)).matrix());
    const auto objective = [&](const ComplexMatrix& u) { return detail::gain_for_basis(state, u, side, s_opp); };

    std::vector<ComplexMatrix> starts;
    starts.push_back(detail::eigenbasis(state.reduced(side)));
    for (std::size_t r = 1; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed, r);
        starts.push_back(random_unitary(d, rng));
    }
    if (cfg.grid_refine && d == 2) starts.push_back(qubit_grid_information_gain(state, side).basis);

    SupremumResult out;
    std::vector<bool> converged;
    std::size_t best = 0;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        const auto run = detail::maximize_basis(objective, starts[r], cfg);
        out.restart_values.push_back(run.value);
        converged.push_back(run.converged);
        if (r == 0 || run.value > out.restart_values[best]) {
            best = r;
            out.argmax_basis = run.basis;
        }
    }
    detail::finalize(out, converged, best);
    return out;
}

/// sup over basis pairs of I(m1:m2)_{A∧B}, by alternating single-side maximization.
inline SupremumResult sup_joint_mutual_information(const BipartiteState& state, const OptimizationConfig& cfg = {}) {
    cfg.check();
    const Dims& dims = state.dims();
    SupremumResult out;
    std::vector<bool> converged;
    std::size_t best = 0;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        ComplexMatrix ua, ub;
        if (r == 0) {
            ua = detail::eigenbasis(state.rho1());
            ub = detail::eigenbasis(state.rho2());
        } else {
            Rng rng(cfg.seed, r);
            ua = random_unitary(dims.d1, rng);
            ub = random_unitary(dims.d2, rng);
        }
        double value = detail::jmi_for_bases(state, ua, ub);
        bool run_converged = false;
        for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
            const double before = value;
            const auto a = detail::maximize_basis(
                [&](const ComplexMatrix& u) { return detail::jmi_for_bases(state, u, ub); }, ua, cfg);
            ua = a.basis;
            const auto b = detail::maximize_basis(
                [&](const ComplexMatrix& u) { return detail::jmi_for_bases(state, ua, u); }, ub, cfg);
            ub = b.basis;
            value = std::max(value, b.value);
            if (value - before < cfg.f_tol) {
                run_converged = a.converged && b.converged;
                break;
            }
        }
        out.restart_values.push_back(value);
        converged.push_back(run_converged);
        if (r == 0 || value > out.restart_values[best]) {
            best = r;
            out.argmax_basis = ua;
            out.argmax_partner = ub;
        }
    }
    detail::finalize(out, converged, best);
    return out;
}

struct DiscordResult {
    Bits mutual_information;
    SupremumResult gain;
    Bits discord;
    Subsystem measured = Subsystem::first;
};

/// δ = I(1:2) − sup I(m_measured → other).
inline DiscordResult quantum_discord(const BipartiteState& state, Subsystem measured,
                                     const OptimizationConfig& cfg = {}) {
    DiscordResult out;
    out.measured = measured;
    out.mutual_information = mutual_information(state);
    out.gain = sup_information_gain(state, measured, cfg);
    const double delta = out.mutual_information.value - out.gain.value.value;
    if (delta < -1e-6) {
        throw Error(ErrorKind::InternalConsistency,
                    "information gain exceeds mutual information by " + std::to_string(-delta));
    }
    out.discord = Bits{std::max(delta, 0.0), false};
    return out;
}

}  // namespace qcorr
