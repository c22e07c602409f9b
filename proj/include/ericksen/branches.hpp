/**
 * @file branches.hpp
 * @brief Continuation of equilibria of the spectral model in lambda = 1/gamma
 *        at fixed alpha: fixed-parameter Newton, branch following with
 *        diagnostics, and pitchfork branch switching.
 */
#pragma once

#include "ericksen/continuation.hpp"
#include "ericksen/spectral_model.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace ericksen {

using cont::ContinuationConfig;
using cont::EventType;
using cont::Termination;

/// Index set of retained sine modes (1-based). Empty means all modes.
using ModeSet = std::vector<int>;

inline ModeSet all_modes(int n)
{
    ModeSet s(n);
    std::iota(s.begin(), s.end(), 1);
    return s;
}

/// Modes j*k for odd j: the invariant subspace of the k-th primary branch.
inline ModeSet primary_subspace(int k, int n)
{
    ModeSet s;
    for (int j = 1; j * k <= n; j += 2) s.push_back(j * k);
    return s;
}

/// Modes m with m = +-r (mod 2k): blocks on which the Jacobian at a field in
/// primary_subspace(k) decouples.
inline ModeSet residue_class(int r, int k, int n)
{
    ModeSet s;
    const int period = 2 * k;
    for (int m = 1; m <= n; ++m) {
        const int rm = m % period;
        const int rr = ((r % period) + period) % period;
        if (rm == rr || rm == (period - rr) % period) s.push_back(m);
    }
    return s;
}

/// The spectral residual at fixed alpha as a function of (coefficients on a
/// mode subset, lambda = 1/gamma).
class SpectralProblem {
public:
    SpectralProblem(const SpectralModel& model, double alpha, ModeSet modes = {}, ModeSet monitor = {})
        : model_(model), alpha_(alpha), modes_(modes.empty() ? all_modes(model.modes()) : std::move(modes)),
          monitor_(std::move(monitor))
    {
        for (int m : modes_)
            require(m >= 1 && m <= model.modes(), ErrorKind::InvalidArgument, "mode set outside truncation");
    }

    int dim() const { return static_cast<int>(modes_.size()); }
    double alpha() const { return alpha_; }
    const ModeSet& modes() const { return modes_; }
    const SpectralModel& model() const { return model_; }
    ModelParams params(double lambda) const { return ModelParams::from_inv_gamma(alpha_, lambda); }

    SineField embed(const Vector& x) const
    {
        SineField f = SineField::zero(model_.modes());
        for (int i = 0; i < dim(); ++i) f[modes_[i]] = x[i];
        return f;
    }

    Vector restrict(const SineField& f) const
    {
        Vector x(dim());
        for (int i = 0; i < dim(); ++i) x[i] = f[modes_[i]];
        return x;
    }

    Vector residual(const Vector& x, double lambda) const
    {
        return restrict(model_.residual(embed(x), params(lambda)));
    }

    Matrix jacobian(const Vector& x, double lambda) const
    {
        const Matrix J = model_.jacobian(embed(x), params(lambda));
        return select(J, modes_);
    }

    Vector dparam(const Vector& x, double lambda) const
    {
        // dF/dlambda = dF/dgamma * dgamma/dlambda, gamma = 1/lambda.
        return restrict(model_.residual_dgamma(embed(x))) * (-1.0 / (lambda * lambda));
    }

    /// Morse index of the Jacobian restricted to the monitor set (the solve
    /// set when none is given).
    int test_index(const Vector& x, double lambda, const Matrix& J) const
    {
        const ModelParams p = params(lambda);
        if (monitor_.empty()) return SpectralModel::scaled_inertia(J, select(model_.scaling(p), modes_)).index;
        const Matrix Jfull = model_.jacobian(embed(x), p);
        return SpectralModel::scaled_inertia(select(Jfull, monitor_), select(model_.scaling(p), monitor_)).index;
    }

    /// Negative eigenvalue count of the scaled Jacobian with no zero band.
    int sign_index(const Vector& x, double lambda, const Matrix& J) const
    {
        const ModelParams p = params(lambda);
        if (monitor_.empty()) return SpectralModel::scaled_inertia(J, select(model_.scaling(p), modes_), 0.0).index;
        const Matrix Jfull = model_.jacobian(embed(x), p);
        return SpectralModel::scaled_inertia(select(Jfull, monitor_), select(model_.scaling(p), monitor_), 0.0).index;
    }

    /// Eigenvector for the eigenvalue of smallest modulus of the scaled
    /// Jacobian, mapped back to coefficients (solve set).
    Vector null_vector(const Vector& x, double lambda, const Matrix& J) const
    {
        (void)x;
        const Vector d = select(model_.scaling(params(lambda)), modes_);
        return scaled_null_vector(J, d);
    }

    static Vector scaled_null_vector(const Matrix& J, const Vector& d)
    {
        const Vector s = d.cwiseSqrt().cwiseInverse();
        const Matrix S = s.asDiagonal() * J * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
        Eigen::Index imin;
        es.eigenvalues().cwiseAbs().minCoeff(&imin);
        Vector v = s.cwiseProduct(es.eigenvectors().col(imin));
        v.normalize();
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0) v = -v;
        return v;
    }

    static Matrix select(const Matrix& J, const ModeSet& set)
    {
        Matrix out(set.size(), set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = 0; j < set.size(); ++j) out(i, j) = J(set[i] - 1, set[j] - 1);
        return out;
    }

    static Vector select(const Vector& v, const ModeSet& set)
    {
        Vector out(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) out[i] = v[set[i] - 1];
        return out;
    }

private:
    const SpectralModel& model_;
    double alpha_;
    ModeSet modes_;
    ModeSet monitor_;
};

struct BranchPoint {
    SineField field;
    ModelParams params;
    Diagnostics diagnostics;
    /// Unit tangent in (coefficients of the solve set, lambda).
    Vector tangent;
    EventType event = EventType::Regular;
    double residual_norm = 0.0;
    /// Full-length null vector at branch points, empty otherwise.
    SineField null_vector;
};

struct Branch {
    std::string label;
    std::vector<BranchPoint> points;
    Termination termination = Termination::MaxSteps;
    bool partial = false;
    std::string message;

    std::vector<std::size_t> event_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i].event == EventType::Fold || points[i].event == EventType::BranchPoint) out.push_back(i);
        return out;
    }
};

/// Fixed-parameter Newton for Phi(u) = 0.
inline SineField newton_correct(const SpectralModel& model, const SineField& guess, const ModelParams& p,
                                const ContinuationConfig& cfg, int* iterations = nullptr)
{
    p.validate();
    SineField f = guess;
    double rn = 0.0;
    for (int it = 0; it <= cfg.max_newton; ++it) {
        const SineField r = model.residual(f, p);
        rn = r.norm();
        require(std::isfinite(rn), ErrorKind::CorrectorFailed, "corrector diverged (non-finite residual)");
        if (rn < cfg.newton_tol) {
            if (iterations) *iterations = it;
            return f;
        }
        if (it == cfg.max_newton) break;
        const Matrix J = model.jacobian(f, p);
        Eigen::PartialPivLU<Matrix> lu(J);
        require(lu.rcond() > 1e-15, ErrorKind::SingularJacobian,
                "singular at solution (rcond=" + std::to_string(lu.rcond()) + ")");
        f.coeffs -= lu.solve(r.coeffs);
    }
    throw Error(ErrorKind::CorrectorFailed, "corrector failed, last residual " + std::to_string(rn));
}

/// Defaults tuned for the (coefficients, 1/gamma) scaling of this problem.
inline ContinuationConfig default_branch_config(double lambda_min, double lambda_max)
{
    ContinuationConfig cfg;
    cfg.lambda_min = lambda_min;
    cfg.lambda_max = lambda_max;
    cfg.lambda_weight = 0.005;
    cfg.max_dlambda = 1.0;
    cfg.ds_init = 0.005;
    cfg.ds_max = 0.01;
    cfg.ds_min = 1e-7;
    cfg.newton_tol = 1e-9;
    cfg.max_newton = 10;
    cfg.max_steps = 3000;
    return cfg;
}

inline BranchPoint to_branch_point(const SpectralProblem& prob, const cont::PathPoint& pp)
{
    BranchPoint bp;
    bp.field = prob.embed(pp.x);
    bp.params = prob.params(pp.lambda);
    bp.diagnostics = prob.model().diagnostics(bp.field, bp.params);
    bp.tangent = pp.tangent;
    bp.event = pp.event;
    bp.residual_norm = prob.model().residual(bp.field, bp.params).norm();
    if (pp.null_vector.size() > 0) bp.null_vector = prob.embed(pp.null_vector);
    return bp;
}

inline Branch to_branch(const SpectralProblem& prob, const cont::Path& path, std::string label)
{
    Branch b;
    b.label = std::move(label);
    b.termination = path.termination;
    b.partial = path.partial;
    b.message = path.message;
    b.points.reserve(path.points.size());
    for (const auto& pp : path.points) b.points.push_back(to_branch_point(prob, pp));
    return b;
}

inline cont::PathPoint to_path_point(const SpectralProblem& prob, const BranchPoint& bp)
{
    cont::PathPoint pp;
    pp.x = prob.restrict(bp.field);
    pp.lambda = bp.params.inv_gamma();
    pp.tangent = bp.tangent;
    pp.event = bp.event;
    if (bp.null_vector.size() > 0) pp.null_vector = prob.restrict(bp.null_vector);
    return pp;
}

/// Follow a branch from a converged seed carrying a tangent.
inline Branch continue_branch(const SpectralProblem& prob, const BranchPoint& seed, const ContinuationConfig& cfg,
                              std::string label, const cont::StopPredicate& stop = {})
{
    cont::Continuer<SpectralProblem> c(prob, cfg);
    const cont::Path path = c.run(to_path_point(prob, seed), stop);
    return to_branch(prob, path, std::move(label));
}

/// The trivial branch u = 0 over the configured lambda window.
inline Branch trivial_branch(const SpectralProblem& prob, const ContinuationConfig& cfg)
{
    cont::Continuer<SpectralProblem> c(prob, cfg);
    Vector hint = Vector::Zero(prob.dim() + 1);
    hint[prob.dim()] = 1.0;
    const cont::PathPoint start = c.start(Vector::Zero(prob.dim()), cfg.lambda_min, hint);
    ContinuationConfig run_cfg = cfg;
    run_cfg.detect_closed_loop = false;
    cont::Continuer<SpectralProblem> runner(prob, run_cfg);
    return to_branch(prob, runner.run(start), "trivial");
}

/// Both pitchfork legs at a branch point, corrected and carrying tangents.
inline std::vector<BranchPoint> switch_branch(const SpectralProblem& prob, const BranchPoint& bp,
                                              const ContinuationConfig& cfg, double eps0 = 1.0)
{
    cont::Continuer<SpectralProblem> c(prob, cfg);
    const auto seeds = cont::switch_branch(c, to_path_point(prob, bp), eps0 * cfg.ds_init);
    std::vector<BranchPoint> out;
    for (const auto& s : seeds) out.push_back(to_branch_point(prob, s));
    return out;
}

} // namespace ericksen
