/**
 * @file two_param.hpp
 * @brief Two-parameter continuation of secondary bifurcation curves
 *        Gamma_{k,l} (l = k +- 1) in the (alpha, 1/gamma) plane.
 *
 * A secondary point on the k-th primary branch where mode l destabilizes is
 * a fold of the problem restricted to S = primary_subspace(k) once the
 * Jacobian block on V = residue_class(l, k) is added as a constraint:
 *
 *     F_S(u; alpha, lambda) = 0,   J_VV(u) v = 0,   (v.v - 1)/2 = 0,
 *
 * with unknowns (u_S, v_V, alpha) and lambda = 1/gamma as the continuation
 * parameter. Curves end at the (k,l) double point where u -> 0; the end point
 * is found by a sweep in |u| and quadratic extrapolation in |u|^2.
 */
#pragma once

#include "ericksen/branches.hpp"
#include "ericksen/linear_analysis.hpp"
#include "ericksen/lyapunov_schmidt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ericksen::twop {

/// Extended system for Gamma_{k,l}.
class SecondaryProblem {
public:
    /// alpha is stored as alpha * alpha_scale in the unknown vector.
    SecondaryProblem(const SpectralModel& model, int k, int l, double alpha_scale = 0.1)
        : model_(model), k_(k), l_(l), scale_(alpha_scale)
    {
        require(k >= 1 && l >= 1 && std::abs(k - l) == 1, ErrorKind::InvalidArgument, "need |k - l| = 1");
        require(alpha_scale > 0.0, ErrorKind::InvalidArgument, "alpha scale must be positive");
        s_ = primary_subspace(k, model.modes());
        v_ = residue_class(l, k, model.modes());
        require(!s_.empty() && !v_.empty(), ErrorKind::InvalidArgument, "truncation too small for this pair");
    }

    int k() const { return k_; }
    int l() const { return l_; }
    int dim() const { return ns() + nv() + 1; }
    int ns() const { return static_cast<int>(s_.size()); }
    int nv() const { return static_cast<int>(v_.size()); }
    const ModeSet& solve_set() const { return s_; }
    const ModeSet& kernel_set() const { return v_; }
    const SpectralModel& model() const { return model_; }

    double alpha(const Vector& x) const { return x[dim() - 1] / scale_; }
    SineField field(const Vector& x) const { return embed(s_, x.head(ns())); }
    SineField kernel(const Vector& x) const { return embed(v_, x.segment(ns(), nv())); }

    Vector pack(const SineField& u, const SineField& v, double alpha) const
    {
        Vector x(dim());
        x.head(ns()) = SpectralProblem::select(u.coeffs, s_);
        x.segment(ns(), nv()) = SpectralProblem::select(v.coeffs, v_);
        x[dim() - 1] = alpha * scale_;
        return x;
    }

    Vector residual(const Vector& x, double lambda) const
    {
        const SineField u = field(x);
        const ModelParams p = ModelParams::from_inv_gamma(alpha(x), lambda);
        const Vector v = x.segment(ns(), nv());
        Vector r(dim());
        r.head(ns()) = SpectralProblem::select(model_.residual(u, p).coeffs, s_);
        r.segment(ns(), nv()) = SpectralProblem::select(model_.jacobian(u, p), v_) * v;
        r[dim() - 1] = 0.5 * (v.squaredNorm() - 1.0);
        return r;
    }

    Matrix jacobian(const Vector& x, double lambda) const
    {
        const SineField u = field(x);
        const SineField vf = kernel(x);
        const ModelParams p = ModelParams::from_inv_gamma(alpha(x), lambda);
        const Matrix J = model_.jacobian(u, p);
        const Matrix H = model_.jacobian_derivative(u, vf);
        const Vector v = x.segment(ns(), nv());
        const int n = dim();
        Matrix out = Matrix::Zero(n, n);
        out.topLeftCorner(ns(), ns()) = SpectralProblem::select(J, s_);
        out.block(0, n - 1, ns(), 1) = x.head(ns()) / scale_;
        for (int i = 0; i < nv(); ++i)
            for (int j = 0; j < ns(); ++j) out(ns() + i, j) = H(v_[i] - 1, s_[j] - 1);
        out.block(ns(), ns(), nv(), nv()) = SpectralProblem::select(J, v_);
        out.block(ns(), n - 1, nv(), 1) = v / scale_;
        out.block(n - 1, ns(), 1, nv()) = v.transpose();
        return out;
    }

    Vector dparam(const Vector& x, double lambda) const
    {
        const double c = -1.0 / (lambda * lambda);
        const SineField u = field(x);
        Vector d = Vector::Zero(dim());
        d.head(ns()) = c * SpectralProblem::select(model_.residual_dgamma(u).coeffs, s_);
        const SineField dv = model_.residual_dgamma(kernel(x));
        d.segment(ns(), nv()) = c * SpectralProblem::select(dv.coeffs, v_);
        return d;
    }

private:
    SineField embed(const ModeSet& set, const Vector& c) const
    {
        SineField f = SineField::zero(model_.modes());
        for (std::size_t i = 0; i < set.size(); ++i) f[set[i]] = c[static_cast<Eigen::Index>(i)];
        return f;
    }

    const SpectralModel& model_;
    int k_, l_;
    double scale_;
    ModeSet s_, v_;
};

struct CurvePoint {
    double alpha = 0.0;
    double inv_gamma = 0.0;
    double u_norm = 0.0;
    SineField field;
    SineField kernel;
};

/// Limit of a curve at u -> 0 and its approach direction.
struct Terminus {
    double alpha = 0.0;
    double inv_gamma = 0.0;
    /// d(alpha)/dt, d(1/gamma)/dt with t = |u|^2, at t = 0.
    double dalpha = 0.0;
    double dinv_gamma = 0.0;
    ls::Side side = ls::Side::Left;
    bool above = true;
    /// Largest deviation of the sweep points from the quadratic fit.
    double fit_residual = 0.0;
};

struct SecondaryCurve {
    int k = 1;
    int l = 2;
    std::string label;
    /// Ordered from the organizing center outwards.
    std::vector<CurvePoint> points;
    std::optional<Terminus> terminus;
    Termination termination = Termination::MaxSteps;
    bool partial = false;
    std::string message;
};

struct TwoParamConfig {
    /// Relative alpha offsets from the double point at which start points are
    /// sought, tried in order; the lambda window is
    /// 1/gamma_kl * (1 + window_factor * offset).
    std::vector<double> start_offsets{0.002, 0.01, 0.02};
    double window_factor = 40.0;
    /// Amplitude sweep towards the organizing center: |u| from the start value
    /// down to sweep_min / k^2, ratio sweep_ratio per point.
    double sweep_min = 2e-3;
    double sweep_ratio = 0.8;
    int fit_points = 6;
    double newton_tol = 1e-11;
    int max_newton = 20;
    /// Outward continuation window; lambda_max <= 0 disables the outward leg.
    double lambda_max = 0.0;
    double alpha_min = 0.0;
    int max_steps = 400;
};

namespace detail {

/// Point on the k-th primary branch (subspace S) where the V-block index
/// first changes, at fixed alpha. Empty if none in the window.
inline std::optional<BranchPoint> first_secondary(const SpectralModel& model, int k, int l, double alpha,
                                                  double lambda_max)
{
    const int n = model.modes();
    const ModeSet S = primary_subspace(k, n);
    const ModeSet V = residue_class(l, k, n);
    const double lk = linear::inv_gamma_k(k, alpha);
    if (lk >= lambda_max) return std::nullopt;
    SpectralProblem prob(model, alpha, S, V);
    ContinuationConfig cfg = default_branch_config(lk * 0.5, lambda_max);
    cfg.detect_closed_loop = false;

    BranchPoint bp;
    bp.field = SineField::zero(n);
    bp.params = ModelParams::from_inv_gamma(alpha, lk);
    bp.event = EventType::BranchPoint;
    bp.tangent = Vector::Zero(prob.dim() + 1);
    bp.tangent[prob.dim()] = 1.0;
    bp.null_vector = SineField::mode(n, k);
    const auto seeds = switch_branch(prob, bp, cfg, 0.05 / (double(k) * k));
    int start_index = 0;
    for (int m : V)
        if (linear::static_eigenvalue(m, alpha, 1.0 / lk) < 0.0) ++start_index;
    if (seeds.front().diagnostics.morse_index >= 0) {
        const SineField& f = seeds.front().field;
        const ModelParams& p = seeds.front().params;
        const Matrix J = model.jacobian(f, p);
        const int seed_index =
            SpectralModel::scaled_inertia(SpectralProblem::select(J, V), SpectralProblem::select(model.scaling(p), V))
                .index;
        if (seed_index != start_index) return seeds.front();
    }
    const Branch br = continue_branch(prob, seeds.front(), cfg, "search", [start_index](const cont::PathPoint& q) {
        return q.test_index != start_index;
    });
    for (const auto& q : br.points)
        if (q.event == EventType::BranchPoint) return q;
    return std::nullopt;
}

/// Solve the extended system with |u| = target and lambda free.
inline std::optional<std::pair<Vector, double>> solve_at_amplitude(const SecondaryProblem& prob, Vector x, double lam,
                                                                   double target, const TwoParamConfig& cfg)
{
    const int n = prob.dim();
    const int ns = prob.ns();
    Matrix B(n + 1, n + 1);
    Vector r(n + 1);
    for (int it = 0; it <= cfg.max_newton; ++it) {
        r.head(n) = prob.residual(x, lam);
        r[n] = 0.5 * (x.head(ns).squaredNorm() - target * target);
        if (!r.allFinite()) return std::nullopt;
        if (r.norm() < cfg.newton_tol) return std::make_pair(x, lam);
        if (it == cfg.max_newton) break;
        B.setZero();
        B.topLeftCorner(n, n) = prob.jacobian(x, lam);
        B.block(0, n, n, 1) = prob.dparam(x, lam);
        B.block(n, 0, 1, ns) = x.head(ns).transpose();
        const Vector dz = Eigen::PartialPivLU<Matrix>(B).solve(-r);
        if (!dz.allFinite()) return std::nullopt;
        x += dz.head(n);
        lam += dz[n];
    }
    return std::nullopt;
}

inline CurvePoint make_point(const SecondaryProblem& prob, const Vector& x, double lam)
{
    CurvePoint c;
    c.alpha = prob.alpha(x);
    c.inv_gamma = lam;
    c.field = prob.field(x);
    c.kernel = prob.kernel(x);
    c.u_norm = c.field.norm();
    return c;
}

/// Least-squares quadratic in t through (t_i, y_i); returns (c0, c1, max residual).
inline std::array<double, 3> quadratic_fit(const std::vector<double>& t, const std::vector<double>& y)
{
    const int m = static_cast<int>(t.size());
    Matrix A(m, 3);
    Vector b(m);
    for (int i = 0; i < m; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = t[i];
        A(i, 2) = t[i] * t[i];
        b[i] = y[i];
    }
    const Vector c = A.colPivHouseholderQr().solve(b);
    return {c[0], c[1], (A * c - b).cwiseAbs().maxCoeff()};
}

} // namespace detail

/// Gamma_{k,l} from a start point near the (min(k,l), max(k,l)) double point:
/// the sweep to the organizing center plus, optionally, the outward leg.
inline SecondaryCurve secondary_curve(const SpectralModel& model, int k, int l, const TwoParamConfig& cfg = {})
{
    require(std::abs(k - l) == 1, ErrorKind::InvalidArgument, "need |k - l| = 1");
    const auto dp = linear::double_point(k, l);
    SecondaryCurve out;
    out.k = k;
    out.l = l;
    out.label = "Gamma_" + std::to_string(k) + "," + std::to_string(l);

    // Smallest offset first; at equal offset keep the smaller amplitude.
    std::optional<BranchPoint> start;
    for (double offset : cfg.start_offsets) {
        for (double sgn : {-1.0, 1.0}) {
            const double a = dp.alpha_kl * (1.0 + sgn * offset);
            if (a < 0.0 || a >= linear::asymptote(k) - linear::asymptote_guard) continue;
            try {
                auto c = detail::first_secondary(model, k, l, a, dp.inv_gamma_kl() * (1.0 + cfg.window_factor * offset));
                if (c && (!start || c->field.norm() < start->field.norm())) start = c;
            } catch (const Error&) {
            }
        }
        if (start) break;
    }
    if (!start) {
        out.partial = true;
        out.termination = Termination::Stopped;
        out.message = "no secondary point found near the double point";
        return out;
    }

    SecondaryProblem prob(model, k, l);
    const ModelParams p0 = start->params;
    const Matrix J0 = model.jacobian(start->field, p0);
    const ModeSet& V = prob.kernel_set();
    SineField v0 = SineField::zero(model.modes());
    {
        const Vector vv = SpectralProblem::scaled_null_vector(SpectralProblem::select(J0, V),
                                                              SpectralProblem::select(model.scaling(p0), V));
        for (std::size_t i = 0; i < V.size(); ++i) v0[V[i]] = vv[static_cast<Eigen::Index>(i)] / vv.norm();
    }
    Vector x = prob.pack(start->field, v0, p0.alpha);
    double lam = p0.inv_gamma();

    // Sweep towards u = 0.
    std::vector<CurvePoint> inward;
    const double s_min = cfg.sweep_min / (double(k) * k);
    double s = x.head(prob.ns()).norm();
    {
        auto first = detail::solve_at_amplitude(prob, x, lam, s, cfg);
        if (!first) {
            out.partial = true;
            out.termination = Termination::Stopped;
            out.message = "extended system did not converge at the start point";
            return out;
        }
        std::tie(x, lam) = *first;
        inward.push_back(detail::make_point(prob, x, lam));
    }
    Vector x_prev = x;
    double lam_prev = lam, t_prev = s * s;
    while (s > s_min) {
        const double s_next = std::max(s * cfg.sweep_ratio, s_min * 0.999);
        // Linear extrapolation in t = s^2 for the non-amplitude unknowns.
        Vector guess = x;
        double lam_guess = lam;
        const double t = s * s, t_next = s_next * s_next;
        if (inward.size() >= 2 && t != t_prev) {
            const double w = (t_next - t) / (t - t_prev);
            guess = x + w * (x - x_prev);
            lam_guess = lam + w * (lam - lam_prev);
        }
        guess.head(prob.ns()) = x.head(prob.ns()) * (s_next / s);
        auto sol = detail::solve_at_amplitude(prob, guess, lam_guess, s_next, cfg);
        if (!sol) {
            out.partial = true;
            out.message = "amplitude sweep stopped at |u|=" + std::to_string(s_next);
            break;
        }
        x_prev = x;
        lam_prev = lam;
        t_prev = t;
        std::tie(x, lam) = *sol;
        s = s_next;
        inward.push_back(detail::make_point(prob, x, lam));
    }

    const int m = std::min<int>(cfg.fit_points, static_cast<int>(inward.size()));
    if (m >= 3) {
        std::vector<double> ts, as, ls;
        for (int i = static_cast<int>(inward.size()) - m; i < static_cast<int>(inward.size()); ++i) {
            ts.push_back(inward[i].u_norm * inward[i].u_norm);
            as.push_back(inward[i].alpha);
            ls.push_back(inward[i].inv_gamma);
        }
        const auto fa = detail::quadratic_fit(ts, as);
        const auto fl = detail::quadratic_fit(ts, ls);
        Terminus term;
        term.alpha = fa[0];
        term.inv_gamma = fl[0];
        term.dalpha = fa[1];
        term.dinv_gamma = fl[1];
        term.side = term.dalpha < 0.0 ? ls::Side::Left : ls::Side::Right;
        term.above = term.dinv_gamma > 0.0;
        term.fit_residual = std::max(fa[2], fl[2]);
        out.terminus = term;
    }
    for (auto it = inward.rbegin(); it != inward.rend(); ++it) out.points.push_back(*it);

    if (cfg.lambda_max <= 0.0) {
        out.termination = Termination::Stopped;
        return out;
    }

    // Outward leg by pseudo-arclength from the start point.
    ContinuationConfig cc;
    cc.lambda_min = 1e-3;
    cc.lambda_max = cfg.lambda_max;
    cc.lambda_weight = 0.01;
    cc.ds_init = 0.01;
    cc.ds_max = 0.05;
    cc.ds_min = 1e-8;
    cc.max_dlambda = 0.02 * dp.inv_gamma_kl();
    cc.newton_tol = 1e-9;
    cc.max_newton = 12;
    cc.max_steps = cfg.max_steps;
    cc.det_monitor = false;
    cc.detect_closed_loop = false;
    cont::Continuer<SecondaryProblem> c(prob, cc);
    const Vector x0 = prob.pack(out.points.back().field, out.points.back().kernel, out.points.back().alpha);
    const double lam0 = out.points.back().inv_gamma;
    Vector hint = Vector::Zero(prob.dim() + 1);
    hint.head(prob.ns()) = x0.head(prob.ns());
    const cont::PathPoint seed = c.start(x0, lam0, hint);
    const double amin = cfg.alpha_min;
    const cont::Path path = c.run(seed, [&](const cont::PathPoint& q) { return prob.alpha(q.x) < amin; });
    for (std::size_t i = 1; i < path.points.size(); ++i)
        out.points.push_back(detail::make_point(prob, path.points[i].x, path.points[i].lambda));
    out.termination = path.termination;
    out.partial = out.partial || path.partial;
    if (!path.message.empty()) out.message = path.message;
    return out;
}

/// Arrangement of Gamma_{k,k+1} and Gamma_{k+1,k} near the (k,k+1) double
/// point, measured from the computed curves.
struct WedgeMeasurement {
    int k = 1;
    SecondaryCurve lower; ///< Gamma_{k,k+1}
    SecondaryCurve upper; ///< Gamma_{k+1,k}
    std::optional<ls::Wedge> wedge;
    bool lower_curve_on_top = false;
};

inline WedgeMeasurement measure_wedge(const SpectralModel& model, int k, const TwoParamConfig& cfg = {})
{
    WedgeMeasurement w;
    w.k = k;
    w.lower = secondary_curve(model, k, k + 1, cfg);
    w.upper = secondary_curve(model, k + 1, k, cfg);
    if (!w.lower.terminus || !w.upper.terminus) return w;
    const Terminus& a = *w.lower.terminus;
    const Terminus& b = *w.upper.terminus;
    if (a.side != b.side)
        w.wedge = ls::Wedge::Straddle;
    else
        w.wedge = a.side == ls::Side::Left ? ls::Wedge::BothLeft : ls::Wedge::BothRight;
    w.lower_curve_on_top = a.dinv_gamma / std::abs(a.dalpha) > b.dinv_gamma / std::abs(b.dalpha);
    return w;
}

/// Equilibrium on the k-th primary branch at (alpha, lambda), continued from
/// Gamma_k inside primary_subspace(k).
inline std::optional<SineField> primary_at(const SpectralModel& model, int k, double alpha, double lambda)
{
    const int n = model.modes();
    const double lk = linear::inv_gamma_k(k, alpha);
    if (lambda <= lk) return std::nullopt;
    SpectralProblem prob(model, alpha, primary_subspace(k, n));
    ContinuationConfig cfg = default_branch_config(0.5 * lk, 2.0 * lambda);
    cfg.detect_closed_loop = false;
    cfg.det_monitor = false;
    cfg.max_dlambda = std::min(cfg.max_dlambda, 0.25 * (lambda - lk));
    BranchPoint bp;
    bp.field = SineField::zero(n);
    bp.params = ModelParams::from_inv_gamma(alpha, lk);
    bp.event = EventType::BranchPoint;
    bp.tangent = Vector::Zero(prob.dim() + 1);
    bp.tangent[prob.dim()] = 1.0;
    bp.null_vector = SineField::mode(n, k);
    ContinuationConfig sw = cfg;
    sw.ds_init = std::min(cfg.ds_init, 0.2 * (lambda - lk) * cfg.lambda_weight);
    const auto seeds = switch_branch(prob, bp, sw);
    const BranchPoint& seed = seeds.front().field[k] > 0.0 || seeds.size() == 1 ? seeds.front() : seeds.back();
    if (seed.params.inv_gamma() >= lambda) {
        ContinuationConfig nc = cfg;
        return newton_correct(model, seed.field, ModelParams::from_inv_gamma(alpha, lambda), nc);
    }
    const Branch br = continue_branch(prob, seed, cfg, "primary",
                                      [lambda](const cont::PathPoint& q) { return q.lambda >= lambda; });
    const std::size_t last = br.points.size() - 1;
    if (last == 0 || br.points[last].params.inv_gamma() < lambda) return std::nullopt;
    const BranchPoint& p1 = br.points[last - 1];
    const BranchPoint& p2 = br.points[last];
    const double l1 = p1.params.inv_gamma(), l2 = p2.params.inv_gamma();
    const double w = (lambda - l1) / (l2 - l1);
    SineField guess(p1.field.coeffs + w * (p2.field.coeffs - p1.field.coeffs));
    return newton_correct(model, guess, ModelParams::from_inv_gamma(alpha, lambda), cfg);
}

/// Parameter points near the (k,k+1) double point along a direction between
/// the measured curves (inside) and between each curve and the adjacent
/// Gamma_k / Gamma_{k+1} (outside).
struct WedgeSamples {
    linear::CurvePoint inside;
    linear::CurvePoint outside_lower; ///< beyond Gamma_{k,k+1}
    linear::CurvePoint outside_upper; ///< beyond Gamma_{k+1,k}
};

inline WedgeSamples wedge_samples(const WedgeMeasurement& w, double rho)
{
    require(w.lower.terminus && w.upper.terminus, ErrorKind::InvalidArgument, "wedge curves not measured");
    const auto dp = linear::double_point(w.k, w.k + 1);
    const double sa = dp.alpha_kl, sl = dp.inv_gamma_kl();
    auto unit = [&](double da, double dl) {
        Eigen::Vector2d d(da / sa, dl / sl);
        return Eigen::Vector2d(d / d.norm());
    };
    const Eigen::Vector2d d1 = unit(w.lower.terminus->dalpha, w.lower.terminus->dinv_gamma);
    const Eigen::Vector2d d2 = unit(w.upper.terminus->dalpha, w.upper.terminus->dinv_gamma);
    // Tangent of Gamma_j at the double point, oriented so that the other mode
    // is unstable along it.
    auto gamma_ray = [&](int j, int other) {
        const double jj = double(j) * j;
        const double dgamma_dalpha = -1.0 / (pi4 * jj * jj);
        const double dlam_dalpha = -dgamma_dalpha / (dp.gamma_kl * dp.gamma_kl);
        Eigen::Vector2d d = unit(1.0, dlam_dalpha);
        // sigma_other = static_eigenvalue(other) must be negative along the ray.
        const double probe = linear::static_eigenvalue(other, sa + 1e-6 * sa * d[0],
                                                       1.0 / (sl + 1e-6 * sl * d[1]));
        return probe < 0.0 ? d : Eigen::Vector2d(-d);
    };
    const Eigen::Vector2d g_lower = gamma_ray(w.k, w.k + 1);
    const Eigen::Vector2d g_upper = gamma_ray(w.k + 1, w.k);
    auto at = [&](const Eigen::Vector2d& d) {
        const Eigen::Vector2d u = d / d.norm();
        return linear::CurvePoint{sa * (1.0 + rho * u[0]), sl * (1.0 + rho * u[1])};
    };
    WedgeSamples s;
    s.inside = at(d1 + d2);
    s.outside_lower = at(d1 + g_lower);
    s.outside_upper = at(d2 + g_upper);
    return s;
}

} // namespace ericksen::twop
