#include "ericksen/two_mode.hpp"
#include "ericksen/two_param.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ericksen;
using namespace ericksen::two_mode;

TEST(TwoModeResidual, TrivialAndOdd)
{
    EXPECT_EQ(residual({0.0, 0.0, 0.3, 0.5}).norm(), 0.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const TwoModeState s{u(rng), u(rng), u(rng) + 1.0, u(rng) + 1.5};
        const TwoModeState m{-s.a1, -s.a3, s.alpha, s.gamma};
        EXPECT_EQ(residual(m), Eigen::Vector2d(-residual(s)));
    }
}

TEST(TwoModeResidual, JacobianMatchesFiniteDifference)
{
    const TwoModeState s{0.3, -0.2, 0.7, 0.08};
    const Eigen::Matrix2d J = jacobian(s);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
        TwoModeState p = s, m = s;
        (c == 0 ? p.a1 : p.a3) += h;
        (c == 0 ? m.a1 : m.a3) -= h;
        const Eigen::Vector2d col = (residual(p) - residual(m)) / (2.0 * h);
        EXPECT_LT((col - J.col(c)).norm(), 1e-8);
    }
    TwoModeState gp = s, gm = s;
    gp.gamma += h;
    gm.gamma -= h;
    EXPECT_LT(((residual(gp) - residual(gm)) / (2.0 * h) - dgamma(s)).norm(), 1e-8);
}

TEST(TwoModeResidual, DiagonalAtOriginVanishesOnPrimaryLines)
{
    const auto lines = primary_lines();
    for (double a : {0.0, 0.3, 0.8, 1.5}) {
        const Eigen::Matrix2d J = jacobian({0.0, 0.0, a, 0.2});
        EXPECT_EQ(J(0, 1), 0.0);
        EXPECT_NEAR(J(0, 0), 0.5 * (1.0 - a - 0.2), 1e-15);
        EXPECT_NEAR(J(1, 1), 0.5 * (9.0 - a - 81.0 * 0.2), 1e-14);
        EXPECT_NEAR(jacobian({0.0, 0.0, a, lines.gamma1(a)})(0, 0), 0.0, 1e-15);
        EXPECT_NEAR(jacobian({0.0, 0.0, a, lines.gamma3(a)})(1, 1), 0.0, 1e-14);
    }
}

TEST(TwoModeResidual, PitchforkExample)
{
    const double a = 0.8, g = 0.09542483660;
    const double a3 = std::sqrt(pure_a3_squared(a, g));
    EXPECT_NEAR(a3 * a3, 0.00774632, 5e-8);
    EXPECT_NEAR(residual({0.0, a3, a, g})[1], 0.0, 1e-12);
    EXPECT_LT(std::abs(-0.5 * a + 0.5 - 0.5 * g - 6.75 * a3 * a3), 1e-9);
}

TEST(CoordinateMap, Examples)
{
    const auto r = coordinate_map(Direction::UnitToRescaled, {9 * pi2 / 10, 1.0 / (10 * pi2)});
    EXPECT_NEAR(r.alpha, 0.9, 1e-15);
    EXPECT_NEAR(r.gamma, 0.1, 1e-15);
    const ParamPoint p{3.7, 0.013};
    const auto back = coordinate_map(Direction::RescaledToUnit, coordinate_map(Direction::UnitToRescaled, p));
    EXPECT_NEAR(back.alpha, p.alpha, 1e-15);
    EXPECT_NEAR(back.gamma, p.gamma, 1e-17);
    for (double au : {0.0, 2.0, 9.0}) {
        const auto q = coordinate_map(Direction::UnitToRescaled, {au, linear::gamma_k(1, au)});
        EXPECT_NEAR(q.gamma, 1.0 - q.alpha, 1e-14);
    }
    EXPECT_THROW(coordinate_map(Direction::UnitToRescaled, {1.0, 0.0}), Error);
}

TEST(PrimaryLines, Intersection)
{
    const auto l = primary_lines();
    EXPECT_NEAR(l.intersection.alpha, 0.9, 1e-15);
    EXPECT_NEAR(l.intersection.gamma, 0.1, 1e-15);
    EXPECT_EQ(l.gamma1(0.0), 1.0);
}

TEST(PitchforkLine, Values)
{
    EXPECT_NEAR(pitchfork_line(0.8), 0.09542483660, 1e-10);
    EXPECT_NEAR(pitchfork_line(0.0), 1.0 / 17.0, 1e-16);
    EXPECT_NEAR(7.0 / 153.0 * 0.9 + 1.0 / 17.0, 0.1, 1e-16);
    EXPECT_THROW(pitchfork_line(0.9), Error);
}

TEST(PitchforkLine, ClosesThePitchforkCondition)
{
    for (double a = 0.0; a < 0.9; a += 0.05) {
        const double g = pitchfork_line(a);
        const double a3sq = pure_a3_squared(a, g);
        ASSERT_GT(a3sq, 0.0);
        EXPECT_LT(std::abs(0.5 * (1.0 - a - g) - 6.75 * a3sq), 1e-12);
        EXPECT_LT(std::abs(residual({0.0, std::sqrt(a3sq), a, g})[1]), 1e-12);
    }
}

TEST(TurningPoints, OrganizingPointAndShiftIdentity)
{
    EXPECT_LT(std::abs(turning_point_poly(0.9, 0.1)), 1e-10);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 100; ++i) {
        const double a1 = u(rng), g1 = u(rng);
        const double lhs = turning_point_poly(0.9 - a1, 0.1 - g1);
        const double rhs = shifted_poly(a1, g1);
        const double scale = two_mode::detail::eval(two_mode::detail::p1_terms, 0.9 - a1, 0.1 - g1, true);
        EXPECT_LT(std::abs(lhs - rhs), 1e-13 * scale) << a1 << ' ' << g1;
    }
}

TEST(TurningPoints, Slopes)
{
    const auto [h1, h2] = turning_point_slopes();
    EXPECT_NEAR(h1, 0.203171, 1e-5);
    EXPECT_NEAR(h2, 0.043484, 1e-5);
    const double t = 0.01;
    EXPECT_LT(turning_point_poly_scaled(0.9 - t, 0.1 - h1 * t), 1e-6);
}

TEST(TurningPoints, QuarticHasTwoRealRoots)
{
    int changes = 0;
    double prev = slope_quartic(-10.0);
    for (int i = 1; i <= 200000; ++i) {
        const double v = slope_quartic(-10.0 + 20.0 * i / 200000.0);
        if (sign_of(v) != sign_of(prev)) ++changes;
        prev = v;
    }
    EXPECT_EQ(changes, 2);
}

TEST(TraceLoop, PitchforkAndFolds)
{
    for (double a : {0.7, 0.8, 0.85}) {
        const auto t = trace_loop(a);
        ASSERT_TRUE(t.pitchfork) << a;
        EXPECT_NEAR(t.pitchfork->gamma, pitchfork_line(a), 1e-6) << a;
        ASSERT_FALSE(t.folds.empty()) << a;
        for (const auto& f : t.folds) EXPECT_LT(f.p1_scaled, 1e-4) << a << ' ' << f.branch;
        EXPECT_NE(t.joining_leg, 0) << a;
    }
}

TEST(TraceLoop, RejectsAlphaBeyondDoublePoint)
{
    EXPECT_THROW(trace_loop(0.95), Error);
}

TEST(Aston, TrivialAndDoublePoint)
{
    const auto s = aston_scale(SineField::zero(8), {2.0, 0.05}, 3);
    EXPECT_EQ(s.field.size(), 24);
    EXPECT_EQ(s.field.norm(), 0.0);
    const auto d13 = linear::double_point(1, 3);
    const auto d26 = linear::double_point(2, 6);
    EXPECT_NEAR(4.0 * d13.alpha_kl, d26.alpha_kl, 1e-12);
    EXPECT_NEAR(d13.gamma_kl / 4.0, d26.gamma_kl, 1e-16);
}

TEST(Aston, PreservesResidualAndMorseIndex)
{
    const SpectralModel m(16);
    for (double lam : {50.0, 70.0, 90.0}) {
        const auto u = twop::primary_at(m, 1, 7.5, lam);
        ASSERT_TRUE(u) << lam;
        const ModelParams p = ModelParams::from_inv_gamma(7.5, lam);
        for (int k : {2, 3}) {
            const auto s = aston_scale(*u, p, k);
            const SpectralModel big(16 * k);
            EXPECT_LT(big.residual(s.field, s.params).norm(), 1e-8);
            // Only the dilated subspace k, 2k, ..., 16k; the other modes add k - 1 unstable directions.
            ModeSet dilated;
            for (int j = 1; j <= 16; ++j) dilated.push_back(k * j);
            const Matrix J = SpectralProblem::select(big.jacobian(s.field, s.params), dilated);
            const Vector d = SpectralProblem::select(big.scaling(s.params), dilated);
            EXPECT_EQ(SpectralModel::scaled_inertia(J, d).index, m.morse_index(*u, p).index) << lam << ' ' << k;
        }
    }
}
