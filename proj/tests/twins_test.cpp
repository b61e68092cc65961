#include <gtest/gtest.h>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "qcorr/twins.hpp"

namespace qcorr {
namespace {

using testing::basis_ket;
using testing::ket;
using testing::x_on;
using testing::z_on;

// σz spectral order is ascending: index 0 is −1 (|1⟩), index 1 is +1 (|0⟩).
constexpr std::size_t kMinus = 0;
constexpr std::size_t kPlus = 1;

BipartiteState pure(const ComplexVector& phi, const Dims& dims = Dims(2, 2)) { return BipartiteState::pure(phi, dims); }

ComplexVector skewed_ket() { return ket({std::sqrt(0.75), 0, 0, std::sqrt(0.25)}); }

TEST(DetectableSpectrum, BellHasBothOutcomes) {
    const auto spec = detectable_spectrum(testing::bell_state(), z_on(Subsystem::first));
    ASSERT_EQ(spec.size(), 2u);
    EXPECT_NEAR(spec.probabilities[0], 0.5, 1e-14);
    EXPECT_NEAR(spec.probabilities[1], 0.5, 1e-14);
    EXPECT_TRUE(spec.undetectable.empty());
    EXPECT_LT(frobenius_distance(spec.range_projector, identity(2)), 1e-12);
}

TEST(DetectableSpectrum, ProductKeepsOnlyOccupiedOutcome) {
    const auto spec = detectable_spectrum(pure(basis_ket(4, 0)), z_on(Subsystem::first));
    ASSERT_EQ(spec.size(), 1u);
    EXPECT_EQ(spec.eigenvalues[0], 1.0);
    EXPECT_NEAR(spec.probabilities[0], 1.0, 1e-14);
    ASSERT_EQ(spec.undetectable.size(), 1u);
    EXPECT_EQ(spec.undetectable[0], -1.0);
}

TEST(DetectableSpectrum, KernelProjectorIsUndetectable) {
    const Dims dims(3, 2);
    const ComplexVector phi = (basis_ket(6, 0) + basis_ket(6, 3)) / std::sqrt(2.0);  // |00⟩ + |11⟩
    const SubsystemObservable a{Observable::from_matrix(testing::diag({1, 2, 3})), Subsystem::first};
    const auto spec = detectable_spectrum(pure(phi, dims), a);
    EXPECT_EQ(spec.eigenvalues, (std::vector<double>{1, 2}));
    EXPECT_EQ(spec.undetectable, (std::vector<double>{3}));
    EXPECT_NEAR(trace_product(spec.range_projector, testing::diag({0, 0, 1})).real(), 0.0, 1e-12);
}

TEST(DetectableSpectrum, ProbabilitiesSumToOne) {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Dims dims(2 + rng.index(2), 2 + rng.index(2));
        const auto state = make_bipartite(sample_random_density(dims, 1 + rng.index(dims.total()), rng), dims);
        const SubsystemObservable obs{random_observable(dims.d2, rng), Subsystem::second};
        const auto spec = detectable_spectrum(state, obs);
        double total = 0.0;
        for (double p : spec.probabilities) {
            EXPECT_GT(p, kDetectable);
            total += p;
        }
        for (double p : spec.undetectable_probabilities) total += p;
        EXPECT_NEAR(total, 1.0, 1e-8);
    }
}

TEST(PairSpectra, ZZOnBellIsDiagonal) {
    const auto state = testing::bell_state();
    const auto a = detectable_spectrum(state, z_on(Subsystem::first));
    const auto b = detectable_spectrum(state, z_on(Subsystem::second));
    const auto pairing = pair_spectra(state, a, b);
    ASSERT_TRUE(pairing);
    EXPECT_EQ(pairing->partner_of(kPlus), kPlus);
    EXPECT_EQ(pairing->partner_of(kMinus), kMinus);
}

TEST(PairSpectra, ZXOnBellHasNoPairing) {
    const auto state = testing::bell_state();
    const auto a = detectable_spectrum(state, z_on(Subsystem::first));
    const auto b = detectable_spectrum(state, x_on(Subsystem::second));
    const Eigen::MatrixXd table = detectable_joint_table(state, a, b);
    EXPECT_LT((table - Eigen::MatrixXd::Constant(2, 2, 0.25)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_FALSE(pair_spectra(state, a, b));
}

TEST(PairSpectra, SwappedLabelsCross) {
    const auto state = pure(ket({0, std::sqrt(0.75), std::sqrt(0.25), 0}));
    const auto a = detectable_spectrum(state, z_on(Subsystem::first));
    const auto b = detectable_spectrum(state, z_on(Subsystem::second));
    const auto pairing = pair_spectra(state, a, b);
    ASSERT_TRUE(pairing);
    EXPECT_EQ(pairing->partner_of(kPlus), kMinus);
    EXPECT_EQ(pairing->partner_of(kMinus), kPlus);
    EXPECT_TRUE(verify_twins(state, z_on(Subsystem::first), z_on(Subsystem::second)).verdict);
}

TEST(PairSpectra, RequiresSideOrder) {
    const auto state = testing::bell_state();
    const auto a = detectable_spectrum(state, z_on(Subsystem::first));
    EXPECT_THROW(pair_spectra(state, a, a), Error);
}

TEST(VerifyTwins, ZZOnBell) {
    const auto report = verify_twins(testing::bell_state(), z_on(Subsystem::first), z_on(Subsystem::second));
    EXPECT_TRUE(report.verdict);
    EXPECT_TRUE(report.complete);
    EXPECT_TRUE(report.spectra_match);
    for (double r : report.residuals()) EXPECT_LT(r, 1e-12);
}

TEST(VerifyTwins, ZXOnBellFailsEveryCondition) {
    const auto state = testing::bell_state();
    const auto report = verify_twins(state, z_on(Subsystem::first), x_on(Subsystem::second));
    EXPECT_FALSE(report.verdict);
    EXPECT_FALSE(report.complete);
    EXPECT_FALSE(report.pairing);
    for (double r : report.residuals()) EXPECT_GT(r, report.tol);

    // Direct evaluation with the outcome pairs (|1⟩, |−⟩) and (|0⟩, |+⟩):
    // |11⟩ and |−−⟩ overlap by ½, every p_{ii'} is ¼.
    const ComplexVector minus = ket({M_SQRT1_2, -M_SQRT1_2});
    const ComplexVector u = tensor_product(basis_ket(2, 1), basis_ket(2, 1));
    const ComplexVector v = tensor_product(minus, minus);
    const double overlap = std::abs(u.dot(v));
    EXPECT_NEAR(report.residual_a, 0.25, 1e-12);
    EXPECT_NEAR(report.residual_b, 0.5 * std::sqrt(2.0 * (1.0 - overlap * overlap)), 1e-12);
    EXPECT_NEAR(report.residual_c, 0.5, 1e-12);
    EXPECT_NEAR(report.residual_d, std::sqrt(2.0 - 2.0 * overlap) / std::sqrt(2.0), 1e-12);
}

TEST(VerifyTwins, SchmidtTwinsOnPureAndDephasedStates) {
    for (const Dims dims : {Dims(2, 2), Dims(2, 3), Dims(3, 3), Dims(3, 2)}) {
        const ComplexVector phi = sample_random_pure(dims, 30 + dims.total());
        const auto [a1, b2] = construct_pure_twins(phi, dims);
        const auto on_pure = verify_twins(pure(phi, dims), a1, b2);
        EXPECT_TRUE(on_pure.verdict) << to_string(dims);
        EXPECT_TRUE(on_pure.complete) << to_string(dims);
        const auto on_dephased = verify_twins(dephase_in_schmidt_basis(phi, dims), a1, b2);
        EXPECT_TRUE(on_dephased.verdict) << to_string(dims);
        EXPECT_TRUE(on_dephased.complete) << to_string(dims);
    }
}

TEST(VerifyTwins, IncompleteTwinsOnFullRankMarginal) {
    // Grouped projectors on a full-rank ρ₁ are twins but not complete ones.
    const Dims dims(3, 3);
    const ComplexVector phi = ket({0.6, 0, 0, 0, 0.64, 0, 0, 0, 0.48});
    const SubsystemObservable a{Observable::from_matrix(testing::diag({1, 1, 2})), Subsystem::first};
    const SubsystemObservable b{Observable::from_matrix(testing::diag({4, 4, 9})), Subsystem::second};
    const auto report = verify_twins(pure(phi, dims), a, b);
    EXPECT_TRUE(report.verdict);
    EXPECT_FALSE(report.complete);  // Tr(PQ₁) = 2 for the grouped projector
}

TEST(VerifyTwins, WrongSides) {
    EXPECT_THROW(verify_twins(testing::bell_state(), z_on(Subsystem::second), z_on(Subsystem::first)), Error);
}

TEST(VerifyTwins, ConsistencyErrorCarriesReport) {
    TwinReport report;
    report.residual_a = 0.0;
    report.residual_b = 1.0;
    EXPECT_FALSE(report.conditions_agree());
    const TwinConsistencyError error(report);
    EXPECT_EQ(error.kind(), ErrorKind::InternalConsistency);
    EXPECT_EQ(error.report().residual_b, 1.0);
    report.residual_b = 5 * report.tol;  // inside the 10× grey zone
    EXPECT_TRUE(report.conditions_agree());
}

TEST(StrongAlgebraic, ZZOnBell) {
    const auto state = testing::bell_state();
    const auto report = verify_twins(state, z_on(Subsystem::first), z_on(Subsystem::second));
    ASSERT_TRUE(report.strong_algebraic_residual);
    EXPECT_LT(*report.strong_algebraic_residual, 1e-10);
    const auto direct = check_strong_algebraic(state, z_on(Subsystem::first), z_on(Subsystem::second), *report.pairing);
    ASSERT_TRUE(direct);
    EXPECT_LT(*direct, 1e-10);
}

TEST(StrongAlgebraic, RelabeledPartnerIsAbsent) {
    const auto state = testing::bell_state();
    const SubsystemObservable b{Observable::from_matrix(testing::diag({5, 7})), Subsystem::second};
    const auto report = verify_twins(state, z_on(Subsystem::first), b);
    EXPECT_TRUE(report.verdict);
    EXPECT_FALSE(report.strong_algebraic_residual);
    EXPECT_FALSE(check_strong_algebraic(state, z_on(Subsystem::first), b, *report.pairing));
}

TEST(StrongAlgebraic, SkewedSchmidtAligned) {
    const auto report = verify_twins(pure(skewed_ket()), z_on(Subsystem::first), z_on(Subsystem::second));
    ASSERT_TRUE(report.strong_algebraic_residual);
    EXPECT_LT(*report.strong_algebraic_residual, 1e-10);
}

TEST(ConstructPureTwins, BellGivesVerifiedPair) {
    const auto [a1, b2] = construct_pure_twins(testing::bell_phi_plus(), Dims(2, 2));
    EXPECT_TRUE(a1.observable.complete());
    EXPECT_TRUE(b2.observable.complete());
    EXPECT_EQ(a1.observable.eigenvalues(), (std::vector<double>{1, 2}));
    EXPECT_TRUE(verify_twins(testing::bell_state(), a1, b2).verdict);
}

TEST(ConstructPureTwins, ProductHasSingleDetectablePair) {
    const Dims dims(2, 3);
    const ComplexVector phi = tensor_product(testing::plus_ket(), basis_ket(3, 2));
    const auto [a1, b2] = construct_pure_twins(phi, dims);
    const auto state = pure(phi, dims);
    const auto report = verify_twins(state, a1, b2);
    EXPECT_TRUE(report.verdict);
    EXPECT_EQ(report.detectable_a, 1u);
    EXPECT_EQ(report.detectable_b, 1u);
    ASSERT_TRUE(report.pairing);
    EXPECT_EQ(report.pairing->pairs.size(), 1u);
}

TEST(ConstructPureTwins, JointMutualInformationIsMarginalEntropy) {
    const Dims dims(3, 3);
    const ComplexVector phi = sample_random_pure(dims, 5);
    const auto [a1, b2] = construct_pure_twins(phi, dims);
    const auto state = pure(phi, dims);
    const auto jd = joint_distribution(state, a1, b2);
    const double s1 = von_neumann_entropy(state.rho1()).value;
    EXPECT_NEAR(joint_mutual_information(jd).value, s1, 1e-8);
    // p_ij = δ_ij rᵢ
    const auto form = schmidt_decompose(phi, dims);
    const auto weights = form.weights();
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            EXPECT_NEAR(jd.p(i, j), i == j ? weights[static_cast<std::size_t>(i)] : 0.0, 1e-12);
}

TEST(ConstructPureTwins, VerifiedOnRandomPureStates) {
    for (const Dims dims : {Dims(2, 2), Dims(2, 3), Dims(3, 3)}) {
        Rng rng(100 + dims.total());
        for (int trial = 0; trial < 1000; ++trial) {
            const ComplexVector phi = sample_random_pure(dims, rng);
            const auto [a1, b2] = construct_pure_twins(phi, dims);
            const auto report = verify_twins(pure(phi, dims), a1, b2);
            ASSERT_TRUE(report.verdict) << to_string(dims) << " trial " << trial;
            ASSERT_TRUE(report.complete) << to_string(dims) << " trial " << trial;
        }
    }
}

TEST(ConstructPureTwins, RejectsNonUnitVector) {
    EXPECT_THROW(construct_pure_twins(ket({1, 1, 0, 0}), Dims(2, 2)), Error);
    EXPECT_THROW(dephase_in_schmidt_basis(ket({1, 1, 0, 0}), Dims(2, 2)), Error);
}

TEST(DephaseInSchmidtBasis, Examples) {
    EXPECT_LT(frobenius_distance(dephase_in_schmidt_basis(testing::bell_phi_plus(), Dims(2, 2)).matrix(),
                                 testing::diag({0.5, 0, 0, 0.5})),
              1e-12);
    const ComplexVector product = tensor_product(testing::plus_ket(), testing::plus_ket());
    EXPECT_LT(frobenius_distance(dephase_in_schmidt_basis(product, Dims(2, 2)).matrix(), outer(product)), 1e-12);
    EXPECT_LT(frobenius_distance(dephase_in_schmidt_basis(skewed_ket(), Dims(2, 2)).matrix(),
                                 testing::diag({0.75, 0, 0, 0.25})),
              1e-12);
}

TEST(DephaseInSchmidtBasis, EqualsLudersOfEitherTwin) {
    for (const Dims dims : {Dims(2, 3), Dims(3, 3)}) {
        const ComplexVector phi = sample_random_pure(dims, 40 + dims.total());
        const auto [a1, b2] = construct_pure_twins(phi, dims);
        const ComplexMatrix dephased = dephase_in_schmidt_basis(phi, dims).matrix();
        EXPECT_LT(frobenius_distance(dephased, luders_apply_subsystem(a1, pure(phi, dims)).matrix()), 1e-10);
        EXPECT_LT(frobenius_distance(dephased, luders_apply_subsystem(b2, pure(phi, dims)).matrix()), 1e-10);
        EXPECT_LT(frobenius_distance(dephased, testing::dephased_by_svd(phi, dims)), 1e-10);
    }
}

class TwinCorpus : public ::testing::TestWithParam<Dims> {};

TEST_P(TwinCorpus, ConditionsAgreeAndVerdictsMatchConstruction) {
    const Dims dims = GetParam();
    for (std::size_t k = 0; k < 120; ++k) {
        const auto twin = testing::make_twin_instance(dims, 7, k);
        TwinReport report;
        ASSERT_NO_THROW(report = verify_twins(twin.state, twin.a1, twin.b2)) << twin.family << " " << k;
        EXPECT_TRUE(report.verdict) << twin.family << " " << k;
        if (twin.equal_labels) {
            ASSERT_TRUE(report.strong_algebraic_residual) << twin.family << " " << k;
            EXPECT_LT(*report.strong_algebraic_residual, 1e-10) << twin.family << " " << k;
        }

        const auto other = testing::make_non_twin_instance(dims, 7, k);
        ASSERT_NO_THROW(report = verify_twins(other.state, other.a1, other.b2)) << other.family << " " << k;
        EXPECT_FALSE(report.verdict) << other.family << " " << k;
    }
}

TEST_P(TwinCorpus, DistantMeasurementAndEqualProbabilities) {
    const Dims dims = GetParam();
    for (std::size_t k = 0; k < 60; ++k) {
        const auto twin = testing::make_twin_instance(dims, 8, k);
        const auto report = verify_twins(twin.state, twin.a1, twin.b2);
        ASSERT_TRUE(report.verdict);
        EXPECT_LT(frobenius_distance(luders_apply_subsystem(twin.a1, twin.state).matrix(),
                                     luders_apply_subsystem(twin.b2, twin.state).matrix()),
                  1e-10)
            << twin.family;
        const auto a = detectable_spectrum(twin.state, twin.a1);
        const auto b = detectable_spectrum(twin.state, twin.b2);
        for (const auto& [i, j] : report.pairing->pairs) {
            EXPECT_NEAR(a.probabilities[i], b.probabilities[j], 1e-10) << twin.family;
            if (twin.family == "pure-schmidt") {
                // Multiplicities within the supports of the marginals.
                const double ra = trace_product(a.projectors[i], a.range_projector).real();
                const double rb = trace_product(b.projectors[j], b.range_projector).real();
                EXPECT_NEAR(ra, rb, 1e-8);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Dims, TwinCorpus, ::testing::Values(Dims(2, 2), Dims(2, 3), Dims(3, 3)),
                         [](const auto& p) { return to_string(p.param).replace(1, 1, "_"); });

TEST(CoincidenceFactorization, HoldsForAnyState) {
    Rng rng(50);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims dims(2 + rng.index(2), 2 + rng.index(2));
        const auto state = make_bipartite(sample_random_density(dims, 1 + rng.index(dims.total()), rng), dims);
        const SubsystemObservable a{random_observable(dims.d1, rng), Subsystem::first};
        // Random projector E₂ of random rank.
        const ComplexMatrix u = random_unitary(dims.d2, rng);
        const std::size_t rank = 1 + rng.index(dims.d2);
        const ComplexMatrix e2 = u.leftCols(static_cast<Eigen::Index>(rank)) *
                                 u.leftCols(static_cast<Eigen::Index>(rank)).adjoint();
        const auto decomposition = distant_decomposition(state, a);
        for (const auto& o : decomposition.outcomes) {
            const double joint =
                trace_product(state.matrix(), tensor_product(a.observable.projector(o.index), e2)).real();
            EXPECT_NEAR(joint, o.probability * trace_product(o.state.matrix(), e2).real(), 1e-10);
        }
    }
}

}  // namespace
}  // namespace qcorr
