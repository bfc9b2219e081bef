#include "rabi/sweep.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "rabi/csv.hpp"

using namespace rabi;

namespace {

constexpr double kPi = std::numbers::pi;

// Small, fast configuration shared by the curve tests.
SweepConfig tiny_config() {
    SweepConfig c;
    c.eps_min = 0.1;
    c.eps_max = 0.25;
    c.d_eps = 0.05;
    c.rabi_oscillations = 1;
    c.dtau = 0.01;
    c.theta_step = 0.9;
    c.phi_step = 0.9;
    return c;
}

}  // namespace

TEST(ThetaPhiMesh, DefaultGridSize) {
    const auto pts = theta_phi_mesh(0.1, 0.1);
    EXPECT_EQ(pts.size(), 31u * 63u + 2u);

    // Theta-major ordering: the first band is theta = 0.1 with phi increasing.
    for (std::size_t k = 0; k < 63; ++k) {
        EXPECT_DOUBLE_EQ(pts[k].theta, 0.1);
        EXPECT_NEAR(pts[k].phi, 0.1 * static_cast<double>(k), 1e-12);
    }
    // Poles appended at the end.
    EXPECT_DOUBLE_EQ(pts[pts.size() - 2].theta, 0.0);
    EXPECT_DOUBLE_EQ(pts[pts.size() - 2].phi, 0.0);
    EXPECT_DOUBLE_EQ(pts[pts.size() - 1].theta, kPi);
    EXPECT_DOUBLE_EQ(pts[pts.size() - 1].phi, 0.0);
}

TEST(ThetaPhiMesh, CoarseGridSizeAndValidation) {
    EXPECT_EQ(theta_phi_mesh(0.3, 0.3).size(), 10u * 21u + 2u);
    EXPECT_THROW(theta_phi_mesh(0.0, 0.1), std::invalid_argument);
    EXPECT_THROW(theta_phi_mesh(0.1, 7.0), std::invalid_argument);
}

TEST(EpsMesh, EndpointAlwaysIncluded) {
    const auto desk_a = eps_mesh(make_sweep_config(0.05, 0.25, 1, SweepProfile::desk));
    ASSERT_EQ(desk_a.size(), 9u);
    EXPECT_DOUBLE_EQ(desk_a.front(), 0.05);
    EXPECT_DOUBLE_EQ(desk_a.back(), 0.25);

    // 0.125 is not a multiple of 0.025 away from 0.02: appended as final knot.
    const auto desk_b = eps_mesh(make_sweep_config(0.02, 0.125, 10, SweepProfile::desk));
    ASSERT_EQ(desk_b.size(), 6u);
    EXPECT_DOUBLE_EQ(desk_b[4], 0.12);
    EXPECT_DOUBLE_EQ(desk_b.back(), 0.125);

    EXPECT_EQ(eps_mesh(make_sweep_config(0.05, 0.25, 1, SweepProfile::paper)).size(), 81u);
    EXPECT_EQ(eps_mesh(make_sweep_config(0.02, 0.125, 10, SweepProfile::paper)).size(), 43u);
}

TEST(SweepConfig, Validation) {
    SweepConfig c = tiny_config();
    c.eps_min = -0.1;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = tiny_config();
    c.eps_max = 0.05;  // below eps_min
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = tiny_config();
    c.rabi_oscillations = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(PointErrors, TinyCouplingTinyErrors) {
    SweepConfig c = tiny_config();
    c.eps_min = 0.005;
    c.eps_max = 0.005;
    c.dtau = 0.005;
    const PointErrors pe = point_errors({1.2, 0.4}, 0.005, c);
    EXPECT_LT(pe.e_r, 0.02);
    EXPECT_LT(pe.e_rn, 0.02);
    EXPECT_LT(pe.e_rwa, 0.02);
    EXPECT_GT(pe.e_rwa, 0.0);
}

TEST(ErrorCurve, ShapeAndOrdering) {
    const ErrorCurve c = error_curve(tiny_config(), 1);
    ASSERT_EQ(c.eps_values.size(), 4u);
    ASSERT_EQ(c.e_r.size(), 4u);
    ASSERT_TRUE(c.spline_r && c.spline_rn && c.spline_rwa);

    for (std::size_t i = 0; i < c.eps_values.size(); ++i) {
        // The two-term solution beats the RWA everywhere on this range, and
        // repair does not hurt.
        EXPECT_LT(c.e_r[i], c.e_rwa[i]);
        EXPECT_LE(c.e_rn[i], c.e_r[i] + 0.01);
        EXPECT_GT(c.e_r[i], 0.0);
    }
    // RWA error grows with eps (up to one grid-step of jitter).
    for (std::size_t i = 0; i + 1 < c.eps_values.size(); ++i) {
        EXPECT_GE(c.e_rwa[i + 1], 0.98 * c.e_rwa[i]);
    }
    // Splines interpolate the knots.
    for (std::size_t i = 0; i < c.eps_values.size(); ++i) {
        EXPECT_NEAR((*c.spline_r)(c.eps_values[i]), c.e_r[i], 1e-9);
    }
}

TEST(ErrorCurve, ThreadCountDoesNotChangeBits) {
    const ErrorCurve a = error_curve(tiny_config(), 1);
    const ErrorCurve b = error_curve(tiny_config(), 3);
    ASSERT_EQ(a.eps_values.size(), b.eps_values.size());
    for (std::size_t i = 0; i < a.eps_values.size(); ++i) {
        EXPECT_EQ(a.e_r[i], b.e_r[i]);
        EXPECT_EQ(a.e_rn[i], b.e_rn[i]);
        EXPECT_EQ(a.e_rwa[i], b.e_rwa[i]);
    }
}

TEST(ErrorCurve, InsensitiveToMeshHalving) {
    SweepConfig fine = tiny_config();
    fine.dtau = 0.005;
    const ErrorCurve a = error_curve(tiny_config(), 1);
    const ErrorCurve b = error_curve(fine, 1);
    for (std::size_t i = 0; i < a.eps_values.size(); ++i) {
        EXPECT_NEAR(a.e_r[i], b.e_r[i], 1e-4);
        EXPECT_NEAR(a.e_rn[i], b.e_rn[i], 1e-4);
        EXPECT_NEAR(a.e_rwa[i], b.e_rwa[i], 1e-4);
    }
}

TEST(ErrorCurveCsv, KnotAndSplineFormats) {
    const ErrorCurve c = error_curve(tiny_config(), 1);
    std::ostringstream knots;
    write_error_curve_csv(knots, c);
    std::istringstream kin(knots.str());
    const CsvTable kt = read_csv(kin);
    ASSERT_EQ(kt.header.size(), 4u);
    EXPECT_EQ(kt.header[0], "epsilon");
    EXPECT_EQ(kt.header[1], "E_R");
    EXPECT_EQ(kt.header[2], "E_RN");
    EXPECT_EQ(kt.header[3], "E_R_RWA");
    ASSERT_EQ(kt.columns[0].size(), c.eps_values.size());
    for (std::size_t i = 0; i < c.eps_values.size(); ++i) {
        EXPECT_NEAR(kt.columns[1][i], c.e_r[i], 1e-12 * std::max(1.0, c.e_r[i]));
    }

    std::ostringstream sp;
    write_error_curve_spline_csv(sp, c);
    std::istringstream sin(sp.str());
    const CsvTable st = read_csv(sin);
    EXPECT_EQ(st.header[1], "E_R_spline");
    EXPECT_EQ(st.columns[0].size(), 10u * (c.eps_values.size() - 1) + 1u);
    EXPECT_DOUBLE_EQ(st.columns[0].front(), c.eps_values.front());
    EXPECT_DOUBLE_EQ(st.columns[0].back(), c.eps_values.back());
}

TEST(ErrorCurveCsv, TwelveSignificantDigits) {
    EXPECT_EQ(fmt_g15(0.1), "0.1");
    EXPECT_EQ(fmt_g15(1.0 / 3.0), "0.333333333333333");
    EXPECT_EQ(fmt_g15(1.2345678901234567e-3), "0.00123456789012346");
}

TEST(TrajectoryCsv, HeaderAndRows) {
    Trajectory t;
    t.label = "exact";
    t.taus = {0.0, 0.5};
    t.points = {{0.0, 0.0, -1.0}, {0.1, 0.2, -0.9}};
    std::ostringstream os;
    write_trajectory_csv(os, t);
    EXPECT_EQ(os.str(), "tau,alpha10,alpha20,alpha30\n0,0,0,-1\n0.5,0.1,0.2,-0.9\n");
}
