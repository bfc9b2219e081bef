#include "rabi/ms_matrices.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "rabi/closed_form.hpp"
#include "test_util.hpp"

using namespace rabi;

namespace {

constexpr double kPi = std::numbers::pi;

// Taylor-series matrix exponential, the independent oracle for the
// eigendecomposition route.
Matrix3C expm_series(const Matrix3C& a, double t) {
    Matrix3C sum = Matrix3C::identity();
    Matrix3C term = Matrix3C::identity();
    for (int k = 1; k <= 30; ++k) {
        term = (complexd{t / k, 0.0}) * (term * a);
        sum = sum + term;
    }
    return sum;
}

StateVector3 random_state_column(std::mt19937_64& rng) {
    return state_vector(testutil::random_physical_state(rng));
}

double vec_dist(const StateVector3& a, const StateVector3& b) {
    return euclidean_norm({a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3});
}

}  // namespace

TEST(Matrix3C, InverseAndDeterminant) {
    const Matrix3C q = ms_matrix(MsMatrixId::Q);
    EXPECT_NEAR(std::abs(det(q) - complexd{-8.0, 0.0}), 0.0, 1e-14);

    const Matrix3C qinv = ms_matrix(MsMatrixId::Qinv);
    EXPECT_NEAR(frobenius_norm(q * qinv - Matrix3C::identity()), 0.0, 1e-14);
    EXPECT_NEAR(frobenius_norm(qinv * q - Matrix3C::identity()), 0.0, 1e-14);

    EXPECT_THROW(inverse(Matrix3C::zero()), std::domain_error);
}

TEST(MsMatrices, IdParsing) {
    EXPECT_EQ(ms_matrix_id_from_string("A0"), MsMatrixId::A0);
    EXPECT_EQ(ms_matrix_id_from_string("expD"), MsMatrixId::ExpD);
    EXPECT_EQ(ms_matrix_id_from_string("W"), MsMatrixId::W);
    EXPECT_THROW(ms_matrix_id_from_string("A9"), std::invalid_argument);
    EXPECT_THROW(ms_matrix_id_from_string(""), std::invalid_argument);
}

TEST(MsMatrices, FastMatricesReduceAtZeroPhase) {
    // A1(0) = A0 entrywise; the top-right entry is i/2.
    const Matrix3C a0 = ms_matrix(MsMatrixId::A0);
    const Matrix3C a1 = ms_matrix(MsMatrixId::A1, 0.0);
    EXPECT_NEAR(frobenius_norm(a1 - a0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a0(0, 2) - complexd{0.0, 0.5}), 0.0, 1e-15);

    // W(0,0) = 0 and G1(0) = 0: the corrector starts from rest.
    EXPECT_NEAR(frobenius_norm(ms_matrix(MsMatrixId::W, 0.0, 0.0)), 0.0, 1e-14);
    EXPECT_NEAR(frobenius_norm(ms_matrix(MsMatrixId::G1, 0.0, 0.0)), 0.0, 1e-15);
}

TEST(MsMatrices, EigendecompositionReproducesA0) {
    const Matrix3C lhs = ms_matrix(MsMatrixId::Q) * ms_matrix(MsMatrixId::D) * ms_matrix(MsMatrixId::Qinv);
    EXPECT_NEAR(frobenius_norm(lhs - ms_matrix(MsMatrixId::A0)), 0.0, 1e-14);
}

TEST(MsMatrices, BIsConstantAndFinite) {
    const Matrix3C b = ms_matrix(MsMatrixId::B, 0.3, 1.7);  // time args ignored
    const Matrix3C b2 = ms_matrix(MsMatrixId::B);
    EXPECT_NEAR(frobenius_norm(b - b2), 0.0, 1e-15);
    EXPECT_GT(frobenius_norm(b), 0.0);
}

TEST(ExpmA0, MatchesTaylorSeries) {
    for (double t2 : {0.0, 0.7, -1.3, 3.9}) {
        const Matrix3C e = expm_A0(t2);
        const Matrix3C ref = expm_series(ms_matrix(MsMatrixId::A0), t2);
        EXPECT_NEAR(frobenius_norm(e - ref), 0.0, 1e-10) << "t2=" << t2;
    }
}

TEST(ExpmA0, GroupProperties) {
    const Matrix3C e0 = expm_A0(0.0);
    EXPECT_NEAR(frobenius_norm(e0 - Matrix3C::identity()), 0.0, 1e-14);

    const Matrix3C a = expm_A0(0.9), b = expm_A0(1.4), ab = expm_A0(2.3);
    EXPECT_NEAR(frobenius_norm(a * b - ab), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(det(expm_A0(2.3)) - complexd{1.0, 0.0}), 0.0, 1e-12);
}

TEST(MatrixForms, RwaRouteEqualsClosedForm) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const DensityState d0 = testutil::random_physical_state(rng);
        const double eps = testutil::uniform(rng, 0.02, 0.3);
        const double tau = testutil::uniform(rng, 0.0, 2.0 * kPi / eps);
        const StateVector3 x = rwa_matrix_form(state_vector(d0), eps, tau);
        const DensityState ref = rwa_density(d0, eps, tau);
        EXPECT_NEAR(std::abs(x.x1 - ref.rho12), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(x.x3 - complexd{ref.alpha30, 0.0}), 0.0, 1e-12);
    }
}

TEST(MatrixForms, RwaInversionCycle) {
    // Ground start: x3(tau) = -cos(eps*tau), a full slow period long.
    const StateVector3 x0 = state_vector({complexd{0.0, 0.0}, -1.0});
    const double eps = 0.25;
    for (int k = 0; k <= 100; ++k) {
        const double tau = k * (2.0 * kPi / eps) / 100.0;
        const StateVector3 x = rwa_matrix_form(x0, eps, tau);
        EXPECT_NEAR(x.x3.real(), -std::cos(eps * tau), 1e-12);
        EXPECT_NEAR(x.x3.imag(), 0.0, 1e-13);
    }
}

TEST(MatrixForms, TwoTermRouteEqualsClosedForm) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
        const DensityState d0 = testutil::random_physical_state(rng);
        const double eps = testutil::uniform(rng, 0.02, 0.3);
        const double tau = testutil::uniform(rng, 0.0, 2.0 * kPi / eps);
        const StateVector3 x = x1_matrix_form(state_vector(d0), eps, tau);
        const DensityState ref = ms2_density(d0, eps, tau);
        EXPECT_NEAR(std::abs(x.x1 - ref.rho12), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(x.x3 - complexd{ref.alpha30, 0.0}), 0.0, 1e-10);
    }
}

TEST(MatrixForms, TwoTermIdentityAtTauZero) {
    std::mt19937_64 rng(23);
    const StateVector3 x0 = random_state_column(rng);
    const StateVector3 x = x1_matrix_form(x0, 0.25, 0.0);
    EXPECT_NEAR(vec_dist(x, x0), 0.0, 1e-14);
    EXPECT_THROW(x1_matrix_form(x0, 0.0, 1.0), std::invalid_argument);
}

TEST(MatrixForms, TwoTermCollapsesToRwaForTinyEps) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 50; ++i) {
        const StateVector3 x0 = random_state_column(rng);
        const double tau = testutil::uniform(rng, 0.0, 50.0);
        const StateVector3 a = x1_matrix_form(x0, 1e-14, tau);
        const StateVector3 b = rwa_matrix_form(x0, 1e-14, tau);
        EXPECT_NEAR(vec_dist(a, b), 0.0, 1e-13);
    }
}

TEST(MatrixForms, CorrectorRecombination) {
    // X1 = e^{A0 t2} X0 + eps * Y1(t1, t2) with t1 = tau, t2 = eps*tau.
    std::mt19937_64 rng(25);
    for (int i = 0; i < 100; ++i) {
        const StateVector3 x0 = random_state_column(rng);
        const double eps = testutil::uniform(rng, 0.02, 0.3);
        const double tau = testutil::uniform(rng, 0.0, 60.0);
        const StateVector3 full = x1_matrix_form(x0, eps, tau);
        const StateVector3 zeroth = expm_A0(eps * tau) * x0;
        const StateVector3 y1 = y1_full(x0, tau, eps * tau);
        const StateVector3 sum{zeroth.x1 + eps * y1.x1, zeroth.x2 + eps * y1.x2, zeroth.x3 + eps * y1.x3};
        EXPECT_NEAR(vec_dist(full, sum), 0.0, 1e-13);
    }
}

TEST(MatrixForms, ConjugateSymmetryPreserved) {
    std::mt19937_64 rng(26);
    for (int i = 0; i < 100; ++i) {
        const StateVector3 x0 = state_vector(testutil::random_physical_state(rng));
        const double eps = testutil::uniform(rng, 0.02, 0.3);
        const double tau = testutil::uniform(rng, 0.0, 80.0);
        for (const StateVector3& x : {rwa_matrix_form(x0, eps, tau), x1_matrix_form(x0, eps, tau)}) {
            EXPECT_NEAR(std::abs(x.x2 - std::conj(x.x1)), 0.0, 1e-12);
            EXPECT_NEAR(x.x3.imag(), 0.0, 1e-12);
        }
    }
}

TEST(SecularResiduals, SmallOnRandomSamples) {
    std::mt19937_64 rng(27);
    for (int i = 0; i < 100; ++i) {
        const StateVector3 x0 = random_state_column(rng);
        const double t2 = testutil::uniform(rng, -6.0, 6.0);
        EXPECT_LT(secular_residual_O1(x0, t2), 1e-8);
        EXPECT_LT(secular_residual_O2(x0, t2), 1e-8);
    }
}

TEST(SecularResiduals, ZeroInputZeroResidual) {
    const StateVector3 zero{};
    EXPECT_DOUBLE_EQ(secular_residual_O1(zero, 1.3), 0.0);
    EXPECT_DOUBLE_EQ(secular_residual_O2(zero, 1.3), 0.0);
}

TEST(SecularResiduals, ResidualIsFiniteDifferenceArtifact) {
    // The conditions hold identically, so the measured residual is the h^2
    // error of the central difference; fit the order over a decade ladder.
    const StateVector3 x0 = state_vector({complexd{0.2, -0.3}, 0.5});
    const double t2 = 1.1;
    const double r3 = secular_residual_O1(x0, t2, 1e-3);
    const double r4 = secular_residual_O1(x0, t2, 1e-4);
    const double order = std::log10(r3 / r4);
    EXPECT_GT(order, 1.7);
    EXPECT_LT(order, 2.3);

    const double s3 = secular_residual_O2(x0, t2, 1e-3);
    const double s4 = secular_residual_O2(x0, t2, 1e-4);
    const double order2 = std::log10(s3 / s4);
    EXPECT_GT(order2, 1.7);
    EXPECT_LT(order2, 2.3);
}
