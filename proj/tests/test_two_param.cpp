#include "ericksen/conjectures.hpp"
#include "ericksen/two_param.hpp"

#include <gtest/gtest.h>

using namespace ericksen;
using namespace ericksen::twop;

TEST(SecondaryProblem, JacobianMatchesFiniteDifference)
{
    const SpectralModel model(12);
    const SecondaryProblem prob(model, 1, 2);
    Vector x = Vector::Zero(prob.dim());
    for (int i = 0; i < prob.dim(); ++i) x[i] = 0.05 * std::sin(1.0 + i);
    x[prob.dim() - 1] = 0.79;
    const double lam = 95.0;
    const Matrix J = prob.jacobian(x, lam);
    const double h = 1e-7;
    for (int c = 0; c < prob.dim(); ++c) {
        Vector xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Vector col = (prob.residual(xp, lam) - prob.residual(xm, lam)) / (2.0 * h);
        EXPECT_LT((col - J.col(c)).norm(), 1e-5 * (1.0 + J.col(c).norm())) << c;
    }
    const Vector dl = (prob.residual(x, lam + 1e-4) - prob.residual(x, lam - 1e-4)) / 2e-4;
    EXPECT_LT((dl - prob.dparam(x, lam)).norm(), 1e-6 * (1.0 + dl.norm()));
}

class Wedges : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        model_ = new SpectralModel(32);
        for (int k = 1; k <= 3; ++k) wedges_[k] = measure_wedge(*model_, k);
    }
    static void TearDownTestSuite() { delete model_; }
    static SpectralModel* model_;
    static WedgeMeasurement wedges_[4];
};

SpectralModel* Wedges::model_ = nullptr;
WedgeMeasurement Wedges::wedges_[4];

TEST_F(Wedges, ArrangementMatchesNormalForm)
{
    for (int k = 1; k <= 3; ++k) {
        const auto& w = wedges_[k];
        ASSERT_TRUE(w.wedge) << k;
        EXPECT_EQ(*w.wedge, ls::wedge_geometry(k).wedge) << k;
        EXPECT_EQ(w.lower.terminus->side, ls::wedge_geometry(k).lower_curve.side) << k;
        EXPECT_EQ(w.upper.terminus->side, ls::wedge_geometry(k).upper_curve.side) << k;
    }
    EXPECT_EQ(*wedges_[1].wedge, ls::Wedge::BothLeft);
    EXPECT_EQ(*wedges_[3].wedge, ls::Wedge::Straddle);
    EXPECT_TRUE(wedges_[1].lower_curve_on_top);
}

TEST_F(Wedges, TerminiHitDoublePoints)
{
    for (int k = 1; k <= 3; ++k) {
        const auto dp = linear::double_point(k, k + 1);
        for (const auto* c : {&wedges_[k].lower, &wedges_[k].upper}) {
            ASSERT_TRUE(c->terminus) << k;
            EXPECT_LT(std::abs(c->terminus->alpha - dp.alpha_kl) / dp.alpha_kl, 1e-6) << k << ' ' << c->label;
            EXPECT_LT(std::abs(c->terminus->inv_gamma - dp.inv_gamma_kl()) / dp.inv_gamma_kl(), 1e-6)
                << k << ' ' << c->label;
        }
    }
}

TEST_F(Wedges, MorseIndicesAroundWedgeK3)
{
    const auto s = wedge_samples(wedges_[3], 0.02);
    auto indices = [&](const linear::CurvePoint& q) {
        std::array<int, 2> out{-1, -1};
        for (int j = 0; j < 2; ++j) {
            const auto u = primary_at(*model_, 3 + j, q.alpha, q.inv_gamma);
            if (u) out[j] = model_->morse_index(*u, ModelParams::from_inv_gamma(q.alpha, q.inv_gamma)).index;
        }
        return out;
    };
    EXPECT_EQ(indices(s.inside), (std::array<int, 2>{0, 0}));
    for (const auto& q : {s.outside_lower, s.outside_upper}) {
        const auto idx = indices(q);
        ASSERT_GE(idx[0], 0);
        ASSERT_GE(idx[1], 0);
        EXPECT_EQ(idx[0] + idx[1], 1) << q.alpha << ' ' << q.inv_gamma;
    }
}

TEST(WedgeExtent, K1StaysOpen)
{
    const SpectralModel model(32);
    const auto w = conj::wedge_extent(model, 1, 200.0, 8);
    EXPECT_FALSE(w.rows.empty());
    EXPECT_TRUE(w.nonempty);
    ASSERT_TRUE(w.lower_asymptote);
    EXPECT_GT(w.lower_asymptote->alpha, 0.0);
    EXPECT_LT(w.lower_asymptote->alpha, linear::double_point(1, 2).alpha_kl);
}

TEST(Conjectures, FitAsymptoteOfExactCurve)
{
    SecondaryCurve c;
    for (int i = 1; i <= 40; ++i) {
        const double lam = 10.0 * i;
        c.points.push_back({3.0 + 5.0 / lam - 20.0 / (lam * lam), lam});
    }
    const auto a = conj::detail::fit_asymptote(c);
    ASSERT_TRUE(a);
    EXPECT_NEAR(a->alpha, 3.0, 1e-10);
    EXPECT_NEAR(*conj::detail::alpha_at(c, 105.0), 0.5 * (c.points[9].alpha + c.points[10].alpha), 1e-15);
}
