/**
 * @file diagram.hpp
 * @brief One-parameter bifurcation diagrams at fixed alpha: trivial branch,
 *        primary branches from every crossing, secondary branches from their
 *        branch points, and primary-to-primary connections.
 */
#pragma once

#include "ericksen/branches.hpp"
#include "ericksen/linear_analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ericksen {

struct DiagramConfig {
    double alpha = 0.0;
    double lambda_min = 1.0;
    double lambda_max = 300.0;
    int modes = 32;
    /// 1: primaries only, 2: primaries and one level of secondaries.
    int depth = 2;
    /// Secondary switching is skipped at branch points past this many per primary.
    int max_secondary_per_branch = 8;
    /// Double N while the tail ratio (top quarter of modes against max |a_k|)
    /// exceeds tail_tol or a point fails revalidation, up to max_modes.
    int max_modes = 0;
    double tail_tol = 1e-8;
    /// A point passes revalidation when its 2N residual is below
    /// gate_factor * newton_tol * max(1, |D a|), D the linear diagonal.
    double gate_factor = 10.0;
    ContinuationConfig branch;

    void validate() const
    {
        require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
        require(lambda_min > 0.0 && lambda_max > lambda_min, ErrorKind::InvalidArgument, "bad lambda range");
        require(modes >= 4, ErrorKind::InvalidArgument, "need at least 4 modes");
        require(depth >= 0 && depth <= 2, ErrorKind::InvalidArgument, "depth must be 0, 1 or 2");
    }
};

inline DiagramConfig default_diagram_config(double alpha, double lambda_min, double lambda_max, int modes = 32)
{
    DiagramConfig c;
    c.alpha = alpha;
    c.lambda_min = lambda_min;
    c.lambda_max = lambda_max;
    c.modes = modes;
    c.branch = default_branch_config(lambda_min, lambda_max);
    return c;
}

/// Branch point of one branch lying on a primary branch of another mode.
struct Connection {
    std::size_t branch = 0; ///< index into Diagram::branches
    std::size_t point = 0;  ///< index into that branch's points
    int from_mode = 0;      ///< primary mode of the branch (0 for secondaries)
    int to_mode = 0;        ///< primary whose invariant subspace contains the point
    int from_zeros = -1;
    int to_zeros = -1;
    double inv_gamma = 0.0;
};

/// A primary branch that turns at a fold and then meets another primary:
/// with both primaries rooted on the trivial branch this closes a cycle.
struct Loop {
    std::size_t branch = 0;
    int mode_a = 0;
    int mode_b = 0;
    int zeros_a = -1;
    int zeros_b = -1;
    std::vector<double> fold_inv_gamma;
    double connection_inv_gamma = 0.0;
    bool closed = false;
};

struct Diagram {
    DiagramConfig config;
    int modes = 0;
    std::vector<Branch> branches;
    /// Primary mode of each branch, 0 for trivial and secondaries.
    std::vector<int> primary_mode;
    std::vector<Connection> connections;
    std::vector<Loop> loops;
    /// Largest residual of any emitted point re-evaluated with 2N modes.
    double revalidation_residual = 0.0;
    /// Per branch and point: passed the 2N revalidation gate.
    std::vector<std::vector<char>> validated;
    int gate_failures = 0;
    double max_tail_ratio = 0.0;
    bool refined = false;
    std::vector<std::string> warnings;

    bool partial() const
    {
        for (const auto& b : branches)
            if (b.partial) return true;
        return false;
    }
};

namespace detail {

/// Largest j with f in primary_subspace(j) to relative tol (0 for f = 0).
inline int primary_of(const SineField& f, double tol = 1e-6)
{
    const double nf = f.norm();
    if (nf == 0.0) return 0;
    for (int j = f.size(); j >= 1; --j) {
        double off = 0.0;
        for (int m = 1; m <= f.size(); ++m) {
            const bool in = m % j == 0 && (m / j) % 2 == 1;
            if (!in) off += f[m] * f[m];
        }
        if (std::sqrt(off) <= tol * nf) return j;
    }
    return 0;
}

/// Largest |a_m| over the top quarter of the modes, relative to max |a_k|.
inline double tail_ratio(const SineField& f)
{
    const double mx = f.coeffs.cwiseAbs().maxCoeff();
    if (mx == 0.0) return 0.0;
    const int n = f.size();
    const int q = std::max(1, n / 4);
    return f.coeffs.tail(q).cwiseAbs().maxCoeff() / mx;
}

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline Diagram build(const DiagramConfig& cfg, int n)
{
    Diagram d;
    d.config = cfg;
    d.modes = n;
    const SpectralModel model(n);
    const SpectralProblem prob(model, cfg.alpha);
    ContinuationConfig bc = cfg.branch;
    bc.lambda_min = cfg.lambda_min;
    bc.lambda_max = cfg.lambda_max;

    d.branches.push_back(trivial_branch(prob, bc));
    d.primary_mode.push_back(0);
    if (cfg.depth == 0) return d;

    const Branch trivial = d.branches.front();
    for (std::size_t i : trivial.event_indices()) {
        const BranchPoint& bp = trivial.points[i];
        if (bp.event != EventType::BranchPoint || bp.null_vector.size() == 0) continue;
        Eigen::Index kk;
        bp.null_vector.coeffs.cwiseAbs().maxCoeff(&kk);
        const int k = static_cast<int>(kk) + 1;
        try {
            const auto seeds = switch_branch(prob, bp, bc);
            const BranchPoint& seed = seeds.front().field[k] > 0.0 || seeds.size() == 1 ? seeds.front() : seeds.back();
            d.branches.push_back(continue_branch(prob, seed, bc, "primary k=" + std::to_string(k)));
            d.primary_mode.push_back(k);
        } catch (const Error& e) {
            if (!e.is_numerical()) throw;
            d.warnings.push_back("primary k=" + std::to_string(k) + ": " + e.what());
        }
    }

    if (cfg.depth >= 2) {
        const std::size_t n_primary = d.branches.size();
        for (std::size_t b = 1; b < n_primary; ++b) {
            const Branch primary = d.branches[b];
            const int k = d.primary_mode[b];
            int used = 0;
            for (std::size_t i : primary.event_indices()) {
                const BranchPoint& bp = primary.points[i];
                if (bp.event != EventType::BranchPoint || bp.null_vector.size() == 0) continue;
                if (primary_of(bp.field) != k) continue; // lies on another primary
                if (used++ >= cfg.max_secondary_per_branch) break;
                try {
                    const auto seeds = switch_branch(prob, bp, bc);
                    for (std::size_t s = 0; s < seeds.size(); ++s) {
                        const std::string label = "secondary from primary k=" + std::to_string(k) +
                                                  " at 1/gamma=" + fmt(bp.params.inv_gamma()) + (s == 0 ? " (+)" : " (-)");
                        d.branches.push_back(continue_branch(prob, seeds[s], bc, label));
                        d.primary_mode.push_back(0);
                    }
                } catch (const Error& e) {
                    if (!e.is_numerical()) throw;
                    d.warnings.push_back("switch at 1/gamma=" + fmt(bp.params.inv_gamma()) + ": " + e.what());
                }
            }
        }
    }
    return d;
}

inline void analyse(Diagram& d)
{
    const SpectralModel coarse(d.modes);
    const SpectralModel fine(2 * d.modes);
    const double gate = d.config.gate_factor * d.config.branch.newton_tol;
    d.validated.clear();
    d.gate_failures = 0;
    for (auto& b : d.branches) {
        auto& ok = d.validated.emplace_back(b.points.size(), 1);
        for (std::size_t i = 0; i < b.points.size(); ++i) {
            const BranchPoint& p = b.points[i];
            const double r = fine.residual(p.field.resized(2 * d.modes), p.params).norm();
            const double scale = coarse.linear_diagonal(p.params).cwiseProduct(p.field.coeffs).norm();
            d.revalidation_residual = std::max(d.revalidation_residual, r);
            d.max_tail_ratio = std::max(d.max_tail_ratio, tail_ratio(p.field));
            if (r > gate * std::max(1.0, scale)) {
                ok[i] = 0;
                ++d.gate_failures;
            }
        }
    }

    for (std::size_t b = 1; b < d.branches.size(); ++b) {
        const Branch& br = d.branches[b];
        const int own = d.primary_mode[b];
        for (std::size_t i = 0; i < br.points.size(); ++i) {
            const BranchPoint& p = br.points[i];
            if (p.event != EventType::BranchPoint || p.field.norm() < 1e-8) continue;
            const int j = primary_of(p.field);
            if (j == 0 || j == own) continue;
            Connection c;
            c.branch = b;
            c.point = i;
            c.from_mode = own;
            c.to_mode = j;
            c.from_zeros = own > 0 ? br.points[std::min<std::size_t>(1, br.points.size() - 1)].diagnostics.internal_zeros
                                   : br.points.front().diagnostics.internal_zeros;
            c.to_zeros = p.diagnostics.internal_zeros;
            c.inv_gamma = p.params.inv_gamma();
            d.connections.push_back(c);
        }
    }

    auto has_primary = [&](int m) {
        for (int pm : d.primary_mode)
            if (pm == m) return true;
        return false;
    };
    for (const Connection& c : d.connections) {
        if (c.from_mode == 0) continue;
        const Branch& br = d.branches[c.branch];
        Loop l;
        l.branch = c.branch;
        l.mode_a = c.from_mode;
        l.mode_b = c.to_mode;
        l.zeros_a = c.from_zeros;
        l.zeros_b = c.to_zeros;
        l.connection_inv_gamma = c.inv_gamma;
        for (std::size_t i = 0; i < c.point; ++i)
            if (br.points[i].event == EventType::Fold) l.fold_inv_gamma.push_back(br.points[i].params.inv_gamma());
        if (l.fold_inv_gamma.empty()) continue;
        l.closed = has_primary(c.from_mode) && has_primary(c.to_mode);
        d.loops.push_back(l);
    }
}

} // namespace detail

/// Bifurcation diagram at fixed alpha over [lambda_min, lambda_max].
inline Diagram compute_diagram(const DiagramConfig& cfg)
{
    cfg.validate();
    int n = cfg.modes;
    Diagram d = detail::build(cfg, n);
    detail::analyse(d);
    while (cfg.max_modes > n && (d.max_tail_ratio > cfg.tail_tol || d.gate_failures > 0)) {
        n = std::min(2 * n, cfg.max_modes);
        d = detail::build(cfg, n);
        detail::analyse(d);
        d.refined = true;
    }
    if (d.max_tail_ratio > cfg.tail_tol)
        d.warnings.push_back("coefficient tail ratio " + detail::fmt(d.max_tail_ratio) + " exceeds " +
                             detail::fmt(cfg.tail_tol) + " at N=" + std::to_string(d.modes));
    if (d.gate_failures > 0)
        d.warnings.push_back(std::to_string(d.gate_failures) + " points at N=" + std::to_string(d.modes) +
                             " fail revalidation with " + std::to_string(2 * d.modes) + " modes");
    return d;
}

} // namespace ericksen
