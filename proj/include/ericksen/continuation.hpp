/**
 * @file continuation.hpp
 * @brief Pseudo-arclength continuation of F(x, lambda) = 0.
 *
 * Predictor: tangent step. Corrector: Newton on the bordered (Keller) system
 *
 *     [ F_x      F_lambda ] [dx     ]   [ -F          ]
 *     [ t_x^T  w^2 t_lam  ] [dlambda] = [ -constraint ]
 *
 * so folds in lambda are regular points. Events are detected between accepted
 * steps from the negative-eigenvalue count of F_x (branch points) and the
 * sign of dlambda/ds (folds), and localized by bisection in arclength.
 *
 * A problem type supplies dim(), residual(x, lambda), jacobian(x, lambda) and
 * dparam(x, lambda) = dF/dlambda. It may additionally supply
 * test_index(x, lambda, J) to replace the default eigenvalue count used for
 * branch-point detection, and null_vector(x, lambda, J).
 */
#pragma once

#include "ericksen/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ericksen::cont {

template <class P>
concept ContinuationProblem = requires(const P& p, const Vector& x, double lam) {
    { p.dim() } -> std::convertible_to<int>;
    { p.residual(x, lam) } -> std::convertible_to<Vector>;
    { p.jacobian(x, lam) } -> std::convertible_to<Matrix>;
    { p.dparam(x, lam) } -> std::convertible_to<Vector>;
};

enum class EventType { Regular, Fold, BranchPoint, Start, End };

inline const char* to_string(EventType e)
{
    switch (e) {
    case EventType::Regular: return "regular";
    case EventType::Fold: return "fold";
    case EventType::BranchPoint: return "branch_point";
    case EventType::Start: return "start";
    case EventType::End: return "end";
    }
    return "?";
}

enum class Termination { MaxSteps, LeftWindow, ClosedLoop, StepUnderflow, Stopped };

inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::MaxSteps: return "max_steps";
    case Termination::LeftWindow: return "left_window";
    case Termination::ClosedLoop: return "closed_loop";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::Stopped: return "stopped";
    }
    return "?";
}

struct ContinuationConfig {
    double ds_init = 0.02;
    double ds_min = 1e-7;
    double ds_max = 0.2;
    double newton_tol = 1e-9;
    int max_newton = 12;
    int max_steps = 2000;
    double lambda_min = 0.0;
    double lambda_max = 1e300;
    bool det_monitor = true;
    /// Weight of lambda in the arclength metric <y1,y2> = x1.x2 + w^2 l1 l2.
    double lambda_weight = 1.0;
    /// Bisection tolerance in lambda for event localization.
    double event_tol = 1e-8;
    /// Minimum cosine between consecutive tangents; sharper turns halve ds.
    double min_tangent_cos = 0.9;
    bool detect_closed_loop = true;
    /// Closed-loop test: return within this fraction of the step to the start.
    double loop_distance_fraction = 0.5;
    double loop_tangent_cos = 0.9;
    /// Reject corrections longer than this fraction of the step (branch jumping).
    double max_correction_fraction = 0.5;
    /// Cap on |dlambda| per step (0 disables).
    double max_dlambda = 0.0;

    void validate() const
    {
        require(ds_min > 0.0 && ds_min <= ds_init && ds_init <= ds_max, ErrorKind::InvalidArgument,
                "need 0 < ds_min <= ds_init <= ds_max");
        require(newton_tol > 0.0, ErrorKind::InvalidArgument, "newton_tol must be positive");
        require(max_newton >= 1 && max_steps >= 1, ErrorKind::InvalidArgument, "iteration caps must be >= 1");
        require(lambda_min < lambda_max, ErrorKind::InvalidArgument, "empty lambda window");
        require(lambda_weight > 0.0, ErrorKind::InvalidArgument, "lambda_weight must be positive");
    }
};

struct PathPoint {
    Vector x;
    double lambda = 0.0;
    /// Unit tangent (dx/ds, dlambda/ds) in the weighted metric.
    Vector tangent;
    EventType event = EventType::Regular;
    int test_index = 0;
    double residual_norm = 0.0;
    double arclength = 0.0;
    /// Null vector of F_x at branch points (empty otherwise).
    Vector null_vector;
};

struct Path {
    std::vector<PathPoint> points;
    Termination termination = Termination::MaxSteps;
    bool partial = false;
    std::string message;

    std::vector<const PathPoint*> events() const
    {
        std::vector<const PathPoint*> out;
        for (const auto& p : points)
            if (p.event == EventType::Fold || p.event == EventType::BranchPoint) out.push_back(&p);
        return out;
    }
};

using StopPredicate = std::function<bool(const PathPoint&)>;

/// Corrector outcome.
struct Corrected {
    Vector y;
    int iterations = 0;
    double residual_norm = 0.0;
};

template <ContinuationProblem P>
class Continuer {
public:
    Continuer(const P& problem, ContinuationConfig cfg) : p_(problem), cfg_(cfg) { cfg_.validate(); }

    const ContinuationConfig& config() const { return cfg_; }
    int dim() const { return p_.dim(); }

    double inner(const Vector& a, const Vector& b) const
    {
        const int n = dim();
        return a.head(n).dot(b.head(n)) + cfg_.lambda_weight * cfg_.lambda_weight * a[n] * b[n];
    }
    double wnorm(const Vector& a) const { return std::sqrt(inner(a, a)); }

    Vector pack(const Vector& x, double lambda) const
    {
        Vector y(dim() + 1);
        y.head(dim()) = x;
        y[dim()] = lambda;
        return y;
    }

    /// Newton on {F = 0, <dir, y - anchor> = 0}.
    std::optional<Corrected> correct(const Vector& guess, const Vector& dir, const Vector& anchor) const
    {
        const int n = dim();
        Vector y = guess;
        Vector wdir = dir;
        wdir[n] *= cfg_.lambda_weight * cfg_.lambda_weight;
        Matrix B(n + 1, n + 1);
        Vector rhs(n + 1);
        double first = -1.0;
        for (int it = 0; it <= cfg_.max_newton; ++it) {
            const Vector x = y.head(n);
            const double lam = y[n];
            const Vector F = p_.residual(x, lam);
            const double cons = wdir.dot(y - anchor);
            const double rn = F.norm();
            if (!std::isfinite(rn)) return std::nullopt;
            if (first < 0) first = rn;
            if (rn < cfg_.newton_tol && std::abs(cons) < 1e-10 * (1.0 + wnorm(y))) return Corrected{y, it, rn};
            if (it == cfg_.max_newton || rn > 1e8 * (first + 1.0)) return std::nullopt;
            B.topLeftCorner(n, n) = p_.jacobian(x, lam);
            B.topRightCorner(n, 1) = p_.dparam(x, lam);
            B.bottomRows(1) = wdir.transpose();
            rhs.head(n) = -F;
            rhs[n] = -cons;
            Eigen::PartialPivLU<Matrix> lu(B);
            const Vector dy = lu.solve(rhs);
            if (!dy.allFinite()) return std::nullopt;
            y += dy;
        }
        return std::nullopt;
    }

    /// Unit tangent at y oriented so that <t, hint> > 0.
    Vector tangent(const Vector& y, const Vector& hint) const
    {
        const int n = dim();
        const Vector x = y.head(n);
        Matrix B(n + 1, n + 1);
        B.topLeftCorner(n, n) = p_.jacobian(x, y[n]);
        B.topRightCorner(n, 1) = p_.dparam(x, y[n]);
        Vector wh = hint;
        wh[n] *= cfg_.lambda_weight * cfg_.lambda_weight;
        B.bottomRows(1) = wh.transpose();
        Vector rhs = Vector::Zero(n + 1);
        rhs[n] = 1.0;
        Vector t = Eigen::PartialPivLU<Matrix>(B).solve(rhs);
        if (!t.allFinite() || wnorm(t) == 0.0) {
            // Singular bordered matrix: fall back to the smallest right
            // singular vector of [F_x F_lambda].
            Eigen::JacobiSVD<Matrix> svd(B.topRows(n), Eigen::ComputeFullV);
            t = svd.matrixV().col(n);
        }
        t /= wnorm(t);
        if (inner(t, hint) < 0.0) t = -t;
        return t;
    }

    int test_index(const Vector& x, double lambda, const Matrix& J) const
    {
        if constexpr (requires { p_.test_index(x, lambda, J); }) {
            return p_.test_index(x, lambda, J);
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (J + J.transpose()), Eigen::EigenvaluesOnly);
            return static_cast<int>((es.eigenvalues().array() < 0.0).count());
        }
    }

    /// Unbanded index used to pin branch points once a jump is detected.
    std::optional<int> sign_index(const Vector& x, double lambda) const
    {
        if constexpr (requires { p_.sign_index(x, lambda, Matrix{}); })
            return p_.sign_index(x, lambda, p_.jacobian(x, lambda));
        else
            return std::nullopt;
    }

    Vector null_vector(const Vector& x, double lambda, const Matrix& J) const
    {
        if constexpr (requires { p_.null_vector(x, lambda, J); }) {
            return p_.null_vector(x, lambda, J);
        } else {
            Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeFullV);
            Vector v = svd.matrixV().col(J.cols() - 1);
            // Fix the sign: largest component positive.
            Eigen::Index imax;
            v.cwiseAbs().maxCoeff(&imax);
            if (v[imax] < 0) v = -v;
            return v;
        }
    }

    PathPoint make_point(const Vector& y, const Vector& t, EventType ev, double s) const
    {
        const int n = dim();
        PathPoint pt;
        pt.x = y.head(n);
        pt.lambda = y[n];
        pt.tangent = t;
        pt.event = ev;
        pt.arclength = s;
        pt.residual_norm = p_.residual(pt.x, pt.lambda).norm();
        if (cfg_.det_monitor) pt.test_index = test_index(pt.x, pt.lambda, p_.jacobian(pt.x, pt.lambda));
        return pt;
    }

    /// Converged starting point with tangent oriented along `hint`.
    PathPoint start(const Vector& x0, double lambda0, const Vector& hint) const
    {
        const Vector y0 = pack(x0, lambda0);
        const auto c = correct(y0, hint, y0);
        require(c.has_value(), ErrorKind::CorrectorFailed, "starting point does not converge");
        const Vector t = tangent(c->y, hint);
        return make_point(c->y, t, EventType::Start, 0.0);
    }

    /// Follow the path from `seed` (which must carry a tangent).
    Path run(const PathPoint& seed, const StopPredicate& stop = {}) const
    {
        Path path;
        PathPoint first = seed;
        first.event = EventType::Start;
        if (cfg_.det_monitor) first.test_index = test_index(first.x, first.lambda, p_.jacobian(first.x, first.lambda));
        first.residual_norm = p_.residual(first.x, first.lambda).norm();
        path.points.push_back(first);

        const Vector y_start = pack(first.x, first.lambda);
        const Vector t_start = first.tangent;
        Vector y = y_start;
        Vector t = t_start;
        int index = first.test_index;
        double ds = cfg_.ds_init;
        double s_total = 0.0;
        int rescans = 0;

        for (int step = 0; step < cfg_.max_steps; ++step) {
            if (cfg_.max_dlambda > 0.0 && std::abs(t[dim()]) * ds > cfg_.max_dlambda)
                ds = std::max(cfg_.ds_min, cfg_.max_dlambda / std::abs(t[dim()]));
            const Vector pred = y + ds * t;
            auto c = correct(pred, t, pred);
            bool ok = c.has_value();
            Vector t_new;
            if (ok) ok = wnorm(c->y - pred) <= cfg_.max_correction_fraction * ds;
            if (ok) {
                t_new = tangent(c->y, t);
                ok = inner(t_new, t) >= cfg_.min_tangent_cos;
            }
            if (!ok) {
                ds *= 0.5;
                if (ds < cfg_.ds_min) {
                    path.termination = Termination::StepUnderflow;
                    path.partial = true;
                    path.message = "step size underflow at lambda=" + std::to_string(y[dim()]);
                    return finish(path);
                }
                --step;
                continue;
            }
            const Vector& y_new = c->y;
            const double lam_new = y_new[dim()];

            if (lam_new < cfg_.lambda_min || lam_new > cfg_.lambda_max) {
                path.termination = Termination::LeftWindow;
                return finish(path);
            }

            // Event scan.
            int index_new = index;
            if (cfg_.det_monitor) {
                index_new = test_index(y_new.head(dim()), lam_new, p_.jacobian(y_new.head(dim()), lam_new));
                const bool fold = sign_of(t[dim()]) * sign_of(t_new[dim()]) < 0;
                const int jump = std::abs(index_new - index);
                const bool ambiguous = (fold && jump != 1) || (!fold && jump > 1);
                if (ambiguous && ds > 4.0 * cfg_.ds_min && rescans < 30) {
                    ds *= 0.5;
                    ++rescans;
                    --step;
                    continue;
                }
                rescans = 0;
                if (fold) {
                    path.points.push_back(localize(y, t, ds, index, EventType::Fold, s_total));
                } else if (jump >= 1) {
                    path.points.push_back(localize(y, t, ds, index, EventType::BranchPoint, s_total));
                }
            }

            s_total += ds;
            PathPoint pt = make_point(y_new, t_new, EventType::Regular, s_total);
            pt.test_index = index_new;
            path.points.push_back(pt);

            if (stop && stop(path.points.back())) {
                path.termination = Termination::Stopped;
                return finish(path);
            }

            if (cfg_.detect_closed_loop && s_total > 4.0 * ds) {
                const double d = segment_distance(y_start, y, y_new);
                if (d < cfg_.loop_distance_fraction * ds && inner(t_new, t_start) > cfg_.loop_tangent_cos) {
                    path.termination = Termination::ClosedLoop;
                    return finish(path);
                }
            }

            y = y_new;
            t = t_new;
            index = index_new;
            if (c->iterations <= 3) ds = std::min(2.0 * ds, cfg_.ds_max);
        }
        path.termination = Termination::MaxSteps;
        return finish(path);
    }

    /// Corrected point at arclength s from (y0, t0) along the Keller hyperplane family.
    std::optional<Corrected> point_at(const Vector& y0, const Vector& t0, double s) const
    {
        const Vector pred = y0 + s * t0;
        return correct(pred, t0, pred);
    }

private:
    double segment_distance(const Vector& p, const Vector& a, const Vector& b) const
    {
        const Vector ab = b - a;
        const double len2 = inner(ab, ab);
        double u = len2 > 0.0 ? inner(p - a, ab) / len2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        return wnorm(p - (a + u * ab));
    }

    /// Bisection on the step parameter s in (0, h) for the event boundary.
    PathPoint localize(const Vector& y0, const Vector& t0, double h, int index0, EventType type, double s0) const
    {
        const int n = dim();
        double lo = 0.0, hi = h;
        Vector y_lo = y0, y_hi;
        {
            auto c = point_at(y0, t0, h);
            y_hi = c ? c->y : y0 + h * t0;
        }
        std::optional<int> sign0;
        if (type == EventType::BranchPoint) {
            sign0 = sign_index(y0.head(n), y0[n]);
            if (sign0 && sign_index(y_hi.head(n), y_hi[n]) == sign0) sign0.reset();
        }
        auto flag = [&](const Vector& y, const Vector& t) {
            if (type == EventType::Fold) return sign_of(t[n]) != sign_of(t0[n]);
            if (sign0) return sign_index(y.head(n), y[n]) != *sign0;
            return test_index(y.head(n), y[n], p_.jacobian(y.head(n), y[n])) != index0;
        };
        // Secant predictor across the current bracket keeps the corrector on the
        // branch near crossings with other solution curves.
        auto between = [&](double theta) -> std::optional<Corrected> {
            const Vector chord = y_hi - y_lo;
            const double len = wnorm(chord);
            if (len == 0.0) return std::nullopt;
            const Vector pred = y_lo + theta * chord;
            auto c = correct(pred, chord / len, pred);
            if (c && wnorm(c->y - pred) > std::max(cfg_.max_correction_fraction * len, 1e-6)) return std::nullopt;
            return c;
        };
        for (int it = 0; it < 80; ++it) {
            const bool lam_ok = std::abs(y_hi[n] - y_lo[n]) < cfg_.event_tol;
            const bool s_ok = (hi - lo) < cfg_.event_tol * std::max(1.0, h);
            if (lam_ok && (type == EventType::BranchPoint || s_ok)) break;
            const double mid = 0.5 * (lo + hi);
            auto c = between(0.5);
            if (!c) break;
            const Vector tm = tangent(c->y, t0);
            if (flag(c->y, tm)) {
                hi = mid;
                y_hi = c->y;
            } else {
                lo = mid;
                y_lo = c->y;
            }
        }
        const double mid = 0.5 * (lo + hi);
        auto c = between(0.5);
        const Vector ym = c ? c->y : y_lo;
        const Vector tm = tangent(ym, t0);
        PathPoint pt = make_point(ym, tm, type, s0 + mid);
        if (type == EventType::BranchPoint) pt.null_vector = null_vector(pt.x, pt.lambda, p_.jacobian(pt.x, pt.lambda));
        return pt;
    }

    Path& finish(Path& path) const
    {
        if (path.points.size() > 1) path.points.back().event = path.points.back().event == EventType::Regular
                                                                   ? EventType::End
                                                                   : path.points.back().event;
        return path;
    }

    const P& p_;
    ContinuationConfig cfg_;
};

/// Seeds on the bifurcating branch(es) at a branch point: y_bp +- eps d with d
/// the null direction (phi, 0) made orthogonal to the current tangent, each
/// corrected on the hyperplane <d, y - y_pred> = 0. eps is halved up to four
/// times when both legs fail.
template <ContinuationProblem P>
std::vector<PathPoint> switch_branch(const Continuer<P>& c, const PathPoint& bp, double eps)
{
    require(bp.event == EventType::BranchPoint && bp.null_vector.size() == c.dim(), ErrorKind::InvalidArgument,
            "branch switching needs a branch point with a null vector");
    const int n = c.dim();
    Vector d = Vector::Zero(n + 1);
    d.head(n) = bp.null_vector;
    d -= c.inner(d, bp.tangent) * bp.tangent;
    require(c.wnorm(d) > 1e-12, ErrorKind::SwitchFailed, "null vector parallel to the branch tangent");
    d /= c.wnorm(d);
    const Vector y_bp = c.pack(bp.x, bp.lambda);

    for (int attempt = 0; attempt < 5; ++attempt, eps *= 0.5) {
        std::vector<PathPoint> seeds;
        for (double sgn : {1.0, -1.0}) {
            const Vector dir = sgn * d;
            const Vector pred = y_bp + eps * dir;
            auto corr = c.correct(pred, dir, pred);
            if (!corr) continue;
            const Vector t = c.tangent(corr->y, dir);
            seeds.push_back(c.make_point(corr->y, t, EventType::Start, 0.0));
        }
        if (!seeds.empty()) return seeds;
    }
    throw Error(ErrorKind::SwitchFailed, "branch switching failed on both legs at lambda=" + std::to_string(bp.lambda));
}

} // namespace ericksen::cont
