#include "ericksen/lyapunov_schmidt.hpp"

#include <gtest/gtest.h>

using namespace ericksen;
using namespace ericksen::ls;

TEST(LSCoefficients, ClosedFormK1)
{
    const auto r = ls_coefficients(1);
    EXPECT_NEAR(r.coeffs.A, 36.528, 1e-3);
    EXPECT_NEAR(r.coeffs.D, 584.45, 1e-2);
    EXPECT_NEAR(r.coeffs.B, 292.22, 1e-2);
    EXPECT_NEAR(r.coeffs.a, 48.704, 1e-3);
    EXPECT_NEAR(r.coeffs.b, 779.27, 1e-2);
}

TEST(LSCoefficients, BEqualsCAndFixedRatios)
{
    for (int k = 1; k <= 10; ++k) {
        const auto c = closed_form_coefficients(k);
        EXPECT_EQ(c.B, c.C);
        EXPECT_DOUBLE_EQ(c.A / c.a, 0.75);
        EXPECT_DOUBLE_EQ(c.D / c.b, 0.75);
    }
}

TEST(LSCoefficients, SignPattern)
{
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(ls_coefficients(k).signs, (std::array<int, 4>{1, -1, 1, -1}));
}

TEST(LSQuadrature, MatchesClosedForm)
{
    for (int k = 1; k <= 6; ++k) {
        const auto q = ls_coefficients_quadrature(k, 4 * (k + 1) + 8);
        const auto c = closed_form_coefficients(k);
        const double ref[] = {c.A, c.B, c.C, c.D, c.a, c.b};
        const double got[] = {q.A, q.B, q.C, q.D, q.a, q.b};
        for (int i = 0; i < 6; ++i) EXPECT_LT(std::abs(got[i] - ref[i]) / std::abs(ref[i]), 1e-10) << k << ' ' << i;
    }
}

TEST(LSQuadrature, RefusesLowOrder)
{
    try {
        ls_coefficients_quadrature(2, min_quadrature_points(2) - 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::QuadratureOrder);
    }
    EXPECT_NO_THROW(ls_coefficients_quadrature(2, min_quadrature_points(2)));
}

TEST(LSQuadrature, CrossTermVanishes)
{
    for (int k = 1; k <= 6; ++k) EXPECT_NEAR(cross_term_integral(k, 8 * (k + 1)), 0.0, 1e-15);
}

TEST(ModalParameters, Examples)
{
    const auto m1 = modal_parameters(1);
    EXPECT_DOUBLE_EQ(m1.m, 8.0);
    EXPECT_DOUBLE_EQ(m1.n, 0.5);
    EXPECT_EQ(m1.region, Region::Region2);
    const auto m2 = modal_parameters(2);
    EXPECT_NEAR(m2.m, 4.5, 1e-14);
    EXPECT_NEAR(m2.n, 8.0 / 9.0, 1e-14);
    EXPECT_EQ(m2.region, Region::Region2);
    const auto m3 = modal_parameters(3);
    EXPECT_NEAR(m3.m, 32.0 / 9.0, 1e-14);
    EXPECT_NEAR(m3.n, 9.0 / 8.0, 1e-14);
    EXPECT_EQ(m3.region, Region::Region1);
    const auto big = modal_parameters(100000);
    EXPECT_NEAR(big.m, 2.0, 1e-4);
    EXPECT_NEAR(big.n, 2.0, 1e-4);
}

TEST(ModalParameters, ProductIsFourAndMatchesCoefficients)
{
    for (int k = 1; k <= 10; ++k) {
        const auto mp = modal_parameters(k);
        EXPECT_NEAR(mp.m * mp.n, 4.0, 1e-14);
        EXPECT_GE(mp.m, 2.0);
        EXPECT_EQ(mp.region == Region::Region1, k >= 3);
        const auto r = ls_coefficients(k);
        EXPECT_NEAR(r.m, mp.m, 1e-13 * mp.m);
        EXPECT_NEAR(r.n, mp.n, 1e-13 * mp.n);
    }
}

TEST(WedgeGeometry, Examples)
{
    EXPECT_EQ(wedge_geometry(1).wedge, Wedge::BothLeft);
    EXPECT_EQ(wedge_geometry(2).wedge, Wedge::BothLeft);
    EXPECT_EQ(wedge_geometry(3).wedge, Wedge::Straddle);
    EXPECT_TRUE(wedge_geometry(1).lower_curve_on_top);
    EXPECT_TRUE(wedge_geometry(2).lower_curve_on_top);
    for (int k = 3; k <= 8; ++k) {
        const auto w = wedge_geometry(k);
        EXPECT_EQ(w.wedge, Wedge::Straddle);
        EXPECT_EQ(w.lower_curve.side, Side::Right);
        EXPECT_EQ(w.upper_curve.side, Side::Left);
    }
}

TEST(WedgeGeometry, PredictedIndicesInsideAndOutside)
{
    for (int k = 1; k <= 5; ++k) {
        const auto w = wedge_geometry(k);
        const auto dp = linear::double_point(k, k + 1);
        const double rho = 1e-3;
        auto offset = [&](double da, double dl) {
            const double lam = dp.inv_gamma_kl() * (1.0 + rho * dl);
            return std::pair{dp.alpha_kl * rho * da, 1.0 / lam - dp.gamma_kl};
        };
        // Bisector of the two curve directions, in relative coordinates.
        const double da = w.lower_curve.dalpha / dp.alpha_kl + w.upper_curve.dalpha / dp.alpha_kl;
        const double dl = w.lower_curve.dinv_gamma / dp.inv_gamma_kl() + w.upper_curve.dinv_gamma / dp.inv_gamma_kl();
        const auto [dalpha, dgamma] = offset(da / std::hypot(da, dl), dl / std::hypot(da, dl));
        const auto in = predicted_indices(k, dalpha, dgamma);
        ASSERT_TRUE(in.lower && in.upper) << k;
        EXPECT_EQ(*in.lower, 0) << k;
        EXPECT_EQ(*in.upper, 0) << k;
    }
}
