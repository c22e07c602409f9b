/**
 * @file two_mode.hpp
 * @brief Two-mode Galerkin model u = a1 sin(x) + a3 sin(3x) of the (1,3)
 *        interaction on [0, pi], its analytic loci, loop tracing with the
 *        continuation engine, and the (1,3) -> (k,3k) scaling map.
 */
#pragma once

#include "ericksen/continuation.hpp"
#include "ericksen/spectral_model.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ericksen::two_mode {

struct TwoModeState {
    double a1 = 0.0;
    double a3 = 0.0;
    double alpha = 0.0;
    double gamma = 1.0;
};

/// (g1, g2): projections of the rescaled equation on sin(x), sin(3x).
inline Eigen::Vector2d residual(const TwoModeState& s)
{
    const double a1 = s.a1, a3 = s.a3, al = s.alpha, g = s.gamma;
    const double g1 = -0.5 * al * a1 - 9.0 / 8.0 * a1 * a1 * a3 + 0.5 * a1 - 3.0 / 8.0 * a1 * a1 * a1 - 0.5 * g * a1 -
                      27.0 / 4.0 * a3 * a3 * a1;
    const double g2 = -0.5 * al * a3 + 4.5 * a3 - 243.0 / 8.0 * a3 * a3 * a3 - 40.5 * g * a3 -
                      3.0 / 8.0 * a1 * a1 * a1 - 27.0 / 4.0 * a1 * a1 * a3;
    return {g1, g2};
}

/// d(g1, g2)/d(a1, a3); symmetric.
inline Eigen::Matrix2d jacobian(const TwoModeState& s)
{
    const double a1 = s.a1, a3 = s.a3, al = s.alpha, g = s.gamma;
    Eigen::Matrix2d J;
    J(0, 0) = -0.5 * al - 9.0 / 4.0 * a1 * a3 + 0.5 - 9.0 / 8.0 * a1 * a1 - 0.5 * g - 27.0 / 4.0 * a3 * a3;
    J(0, 1) = -9.0 / 8.0 * a1 * a1 - 13.5 * a1 * a3;
    J(1, 0) = J(0, 1);
    J(1, 1) = -0.5 * al + 4.5 - 729.0 / 8.0 * a3 * a3 - 40.5 * g - 27.0 / 4.0 * a1 * a1;
    return J;
}

inline Eigen::Vector2d dgamma(const TwoModeState& s) { return {-0.5 * s.a1, -40.5 * s.a3}; }

enum class Direction { UnitToRescaled, RescaledToUnit };

struct ParamPoint {
    double alpha = 0.0;
    double gamma = 0.0;
};

/// gamma_rescaled = gamma_unit pi^2, alpha_rescaled = alpha_unit / pi^2.
inline ParamPoint coordinate_map(Direction d, ParamPoint p)
{
    require(p.gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
    if (d == Direction::UnitToRescaled) return {p.alpha / pi2, p.gamma * pi2};
    return {p.alpha * pi2, p.gamma / pi2};
}

/// gamma = intercept + slope * alpha.
struct Line {
    double intercept = 0.0;
    double slope = 0.0;
    double operator()(double alpha) const { return intercept + slope * alpha; }
};

struct PrimaryLines {
    Line gamma1{1.0, -1.0};
    Line gamma3{1.0 / 9.0, -1.0 / 81.0};
    ParamPoint intersection{0.9, 0.1};
};

inline PrimaryLines primary_lines()
{
    PrimaryLines p;
    const double a = (p.gamma3.intercept - p.gamma1.intercept) / (p.gamma1.slope - p.gamma3.slope);
    p.intersection = {a, p.gamma1(a)};
    return p;
}

inline constexpr double double_point_alpha = 0.9;

/// Secondary bifurcation from the pure-a3 branch in the a1 direction.
inline double pitchfork_line(double alpha)
{
    require(alpha < double_point_alpha, ErrorKind::OutOfDomain,
            "no pure-a3 secondary bifurcation for alpha >= 9/10");
    return 7.0 / 153.0 * alpha + 1.0 / 17.0;
}

/// a3^2 on the pure-a3 branch.
inline double pure_a3_squared(double alpha, double gamma) { return 4.0 / 243.0 * (9.0 - alpha - 81.0 * gamma); }

namespace detail {

struct Term {
    double c;
    int i; ///< power of alpha
    int j; ///< power of gamma
};

inline constexpr std::array<Term, 15> p1_terms{{{8748, 0, 1},
                                                {8748, 1, 0},
                                                {5557, 4, 0},
                                                {-2994732, 1, 3},
                                                {6016437, 0, 4},
                                                {-119556, 1, 1},
                                                {406782, 0, 2},
                                                {-7938, 2, 0},
                                                {1054782, 2, 2},
                                                {-168492, 3, 1},
                                                {243972, 2, 1},
                                                {-1000188, 1, 2},
                                                {-3156, 3, 0},
                                                {288684, 0, 3},
                                                {-2187, 0, 0}}};

inline constexpr std::array<Term, 5> p2_terms{
    {{5557, 4, 0}, {-2994732, 1, 3}, {1054782, 2, 2}, {-168492, 3, 1}, {6016437, 0, 4}}};

template <std::size_t M>
double eval(const std::array<Term, M>& terms, double a, double g, bool absolute)
{
    double s = 0.0;
    for (const Term& t : terms) {
        const double v = t.c * std::pow(a, t.i) * std::pow(g, t.j);
        s += absolute ? std::abs(v) : v;
    }
    return s;
}

} // namespace detail

/// Turning-point polynomial P1(alpha, gamma).
inline double turning_point_poly(double alpha, double gamma) { return detail::eval(detail::p1_terms, alpha, gamma, false); }

/// |P1| divided by the sum of the absolute values of its terms at the point.
inline double turning_point_poly_scaled(double alpha, double gamma)
{
    const double scale = detail::eval(detail::p1_terms, alpha, gamma, true);
    return std::abs(turning_point_poly(alpha, gamma)) / scale;
}

/// P1 in the shifted variables alpha = 9/10 - alpha1, gamma = 1/10 - gamma1.
inline double shifted_poly(double alpha1, double gamma1) { return detail::eval(detail::p2_terms, alpha1, gamma1, false); }

/// q(h) = P2(1, h).
inline double slope_quartic(double h) { return shifted_poly(1.0, h); }

/// The two real roots of slope_quartic on [0, 1], larger first.
inline std::pair<double, double> turning_point_slopes()
{
    std::vector<double> roots;
    const double step = 1e-3;
    double x0 = 0.0, f0 = slope_quartic(x0);
    for (int i = 1; i <= 1000; ++i) {
        const double x1 = i * step, f1 = slope_quartic(x1);
        if (f0 == 0.0) roots.push_back(x0);
        else if (f0 * f1 < 0.0) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi), fm = slope_quartic(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    require(roots.size() == 2, ErrorKind::Internal,
            "expected two slope roots in [0,1], found " + std::to_string(roots.size()));
    return {std::max(roots[0], roots[1]), std::min(roots[0], roots[1])};
}

/// The two-mode system as a continuation problem in lambda = 1/gamma at fixed alpha.
class TwoModeProblem {
public:
    explicit TwoModeProblem(double alpha) : alpha_(alpha) {}
    int dim() const { return 2; }
    double alpha() const { return alpha_; }
    TwoModeState state(const Vector& x, double lambda) const { return {x[0], x[1], alpha_, 1.0 / lambda}; }
    Vector residual(const Vector& x, double lambda) const { return residual_of(state(x, lambda)); }
    Matrix jacobian(const Vector& x, double lambda) const { return two_mode::jacobian(state(x, lambda)); }
    Vector dparam(const Vector& x, double lambda) const
    {
        const Eigen::Vector2d d = dgamma(state(x, lambda));
        return -d / (lambda * lambda);
    }

private:
    static Vector residual_of(const TwoModeState& s)
    {
        const Eigen::Vector2d r = two_mode::residual(s);
        return Vector(r);
    }
    double alpha_;
};

struct LoopEvent {
    cont::EventType type = cont::EventType::Regular;
    double a1 = 0.0;
    double a3 = 0.0;
    double gamma = 0.0;
    /// Fold only: |P1| scaled by its term magnitudes.
    double p1_scaled = 0.0;
    std::string branch;
};

struct LoopBranch {
    std::string label;
    cont::Path path;
};

struct LoopTrace {
    double alpha = 0.0;
    std::vector<LoopBranch> branches;
    std::optional<LoopEvent> pitchfork;
    std::vector<LoopEvent> folds;
    struct Leg {
        int a1_sign = 0;
        std::optional<double> first_fold_gamma;
        /// The leg returns to u = 0 at Gamma_1, i.e. it is the mixed branch.
        bool reaches_gamma1 = false;
    };
    std::vector<Leg> legs;
    /// a1 sign (a3 > 0 frame) of the leg that merges with the mixed branch at a fold; 0 if none.
    int joining_leg = 0;
};

struct LoopConfig {
    double lambda_min = 1.0;
    double lambda_max = 20.0;
    double lambda_weight = 0.02;
    double ds = 0.01;
    int max_steps = 4000;
};

namespace detail {

inline cont::ContinuationConfig engine_config(const LoopConfig& lc)
{
    cont::ContinuationConfig c;
    c.lambda_min = lc.lambda_min;
    c.lambda_max = lc.lambda_max;
    c.lambda_weight = lc.lambda_weight;
    c.ds_init = 0.5 * lc.ds;
    c.ds_max = lc.ds;
    c.ds_min = 1e-9;
    c.max_dlambda = 0.05;
    c.newton_tol = 1e-12;
    c.max_newton = 12;
    c.max_steps = lc.max_steps;
    c.detect_closed_loop = true;
    return c;
}

inline LoopEvent to_event(const cont::PathPoint& p, double alpha, const std::string& branch)
{
    LoopEvent e;
    e.type = p.event;
    e.a1 = p.x[0];
    e.a3 = p.x[1];
    e.gamma = 1.0 / p.lambda;
    e.branch = branch;
    if (e.type == cont::EventType::Fold) e.p1_scaled = turning_point_poly_scaled(alpha, e.gamma);
    return e;
}

} // namespace detail

/// Trivial branch, pure-a3 branch from Gamma_3, its a1 secondary point and
/// both legs, and the mixed branch from Gamma_1.
inline LoopTrace trace_loop(double alpha, const LoopConfig& lc = {})
{
    require(alpha < double_point_alpha, ErrorKind::OutOfDomain, "loop tracing needs alpha < 9/10");
    const TwoModeProblem prob(alpha);
    const cont::ContinuationConfig cfg = detail::engine_config(lc);
    cont::Continuer<TwoModeProblem> c(prob, cfg);
    LoopTrace out;
    out.alpha = alpha;

    Vector hint = Vector::Zero(3);
    hint[2] = 1.0;
    cont::ContinuationConfig triv_cfg = cfg;
    triv_cfg.detect_closed_loop = false;
    cont::Continuer<TwoModeProblem> tc(prob, triv_cfg);
    const cont::Path trivial = tc.run(tc.start(Vector::Zero(2), lc.lambda_min, hint));
    out.branches.push_back({"trivial", trivial});

    const PrimaryLines lines = primary_lines();
    const cont::PathPoint* bp1 = nullptr;
    const cont::PathPoint* bp3 = nullptr;
    for (const auto& p : trivial.points) {
        if (p.event != cont::EventType::BranchPoint) continue;
        const double g = 1.0 / p.lambda;
        if (std::abs(g - lines.gamma1(alpha)) < 1e-6) bp1 = &p;
        if (std::abs(g - lines.gamma3(alpha)) < 1e-6) bp3 = &p;
    }
    require(bp1 && bp3, ErrorKind::Internal, "primary bifurcations not found on the trivial branch");

    auto positive_leg = [&](const cont::PathPoint& bp, int comp) {
        const auto seeds = cont::switch_branch(c, bp, cfg.ds_init);
        for (const auto& s : seeds)
            if (s.x[comp] > 0.0) return s;
        return seeds.front();
    };

    const cont::Path pure = c.run(positive_leg(*bp3, 1));
    out.branches.push_back({"pure a3", pure});
    const cont::PathPoint* pf = nullptr;
    for (const auto& p : pure.points)
        if (p.event == cont::EventType::BranchPoint && !pf) pf = &p;

    const cont::Path mixed = c.run(positive_leg(*bp1, 0));
    out.branches.push_back({"mixed", mixed});
    for (const auto& p : mixed.points)
        if (p.event == cont::EventType::Fold) out.folds.push_back(detail::to_event(p, alpha, "mixed"));

    if (pf) {
        out.pitchfork = detail::to_event(*pf, alpha, "pure a3");
        const double g1 = lines.gamma1(alpha);
        for (const auto& seed : cont::switch_branch(c, *pf, cfg.ds_init)) {
            LoopTrace::Leg info;
            info.a1_sign = seed.x[0] > 0.0 ? 1 : -1;
            const std::string label = info.a1_sign > 0 ? "leg a1>0" : "leg a1<0";
            const cont::Path leg = c.run(seed, [](const cont::PathPoint& q) { return q.x.norm() < 1e-3; });
            out.branches.push_back({label, leg});
            for (const auto& p : leg.points) {
                if (p.event != cont::EventType::Fold) continue;
                out.folds.push_back(detail::to_event(p, alpha, label));
                if (!info.first_fold_gamma) info.first_fold_gamma = 1.0 / p.lambda;
            }
            const auto& last = leg.points.back();
            info.reaches_gamma1 = leg.termination == cont::Termination::Stopped &&
                                  std::abs(1.0 / last.lambda - g1) < 1e-3 * g1 + 1e-3;
            if (info.reaches_gamma1 && info.first_fold_gamma && out.joining_leg == 0) out.joining_leg = info.a1_sign;
            out.legs.push_back(info);
        }
    }
    return out;
}

/// Field and parameters of the scaled solution.
struct Scaled {
    SineField field;
    ModelParams params;
};

/// Mode j -> mode k j with amplitude / k, parameters (k^2 alpha, gamma / k^2).
/// The truncation grows to k N. The scaled residual is exactly k times the
/// original one; checked against max(10, k) times.
inline Scaled aston_scale(const SineField& u, const ModelParams& p, int k)
{
    require(k >= 1, ErrorKind::InvalidArgument, "scale factor must be >= 1");
    u.validate();
    p.validate();
    const int n = u.size();
    Scaled s;
    s.field = SineField::zero(k * n);
    for (int j = 1; j <= n; ++j) s.field[k * j] = u[j] / k;
    s.params = {double(k) * k * p.alpha, p.gamma / (double(k) * k)};
    if (k > 1) {
        const SpectralModel small(n), large(k * n);
        const double r0 = small.residual(u, p).norm();
        const double r1 = large.residual(s.field, s.params).norm();
        const double bound = std::max(10.0, double(k)) * r0 * (1.0 + 1e-12) + 1e-13;
        require(r1 <= bound, ErrorKind::Internal,
                "scaled residual " + std::to_string(r1) + " exceeds bound " + std::to_string(bound));
    }
    return s;
}

} // namespace ericksen::two_mode
