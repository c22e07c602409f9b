/**
 * @file conjectures.hpp
 * @brief Evidence sweeps: extent of the wedge between Gamma_{k,k+1} and
 *        Gamma_{k+1,k} at large 1/gamma, and the smallest internal-zero count
 *        among equilibria found at fixed alpha.
 *
 * Results are observations from finite sweeps, not proofs.
 */
#pragma once

#include "ericksen/diagram.hpp"
#include "ericksen/two_param.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ericksen::conj {

struct WedgeRow {
    double inv_gamma = 0.0;
    double alpha_lower = 0.0; ///< on Gamma_{k,k+1}
    double alpha_upper = 0.0; ///< on Gamma_{k+1,k}
    double width = 0.0;       ///< alpha_lower - alpha_upper
};

struct Asymptote {
    double alpha = 0.0;
    double fit_residual = 0.0;
    double last_inv_gamma = 0.0;
    double last_alpha = 0.0;
};

struct WedgeExtent {
    int k = 1;
    twop::SecondaryCurve lower;
    twop::SecondaryCurve upper;
    std::vector<WedgeRow> rows;
    std::optional<Asymptote> lower_asymptote;
    std::optional<Asymptote> upper_asymptote;
    /// Widths keep one sign over all sampled rows.
    bool nonempty = false;
};

namespace detail {

/// alpha on the curve at the first crossing of inv_gamma = lam, walking outwards.
inline std::optional<double> alpha_at(const twop::SecondaryCurve& c, double lam)
{
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const auto& a = c.points[i - 1];
        const auto& b = c.points[i];
        if ((a.inv_gamma - lam) * (b.inv_gamma - lam) > 0.0 || a.inv_gamma == b.inv_gamma) continue;
        const double t = (lam - a.inv_gamma) / (b.inv_gamma - a.inv_gamma);
        return a.alpha + t * (b.alpha - a.alpha);
    }
    return std::nullopt;
}

/// alpha = a + b/lam + c/lam^2 fitted over the outer half (in 1/gamma) of the curve.
inline std::optional<Asymptote> fit_asymptote(const twop::SecondaryCurve& c)
{
    if (c.points.size() < 4) return std::nullopt;
    double lam_max = 0.0;
    for (const auto& p : c.points) lam_max = std::max(lam_max, p.inv_gamma);
    std::vector<double> ts, as;
    for (const auto& p : c.points)
        if (p.inv_gamma >= 0.5 * lam_max) {
            ts.push_back(1.0 / p.inv_gamma);
            as.push_back(p.alpha);
        }
    if (ts.size() < 4) return std::nullopt;
    const auto f = twop::detail::quadratic_fit(ts, as);
    Asymptote a;
    a.alpha = f[0];
    a.fit_residual = f[2];
    a.last_inv_gamma = c.points.back().inv_gamma;
    a.last_alpha = c.points.back().alpha;
    return a;
}

} // namespace detail

inline WedgeExtent wedge_extent(const SpectralModel& model, int k, double lambda_max, int samples = 20,
                                twop::TwoParamConfig cfg = {})
{
    require(k >= 1, ErrorKind::InvalidArgument, "k must be positive");
    require(samples >= 2, ErrorKind::InvalidArgument, "need at least 2 samples");
    const double lam_c = linear::double_point(k, k + 1).inv_gamma_kl();
    require(lambda_max > lam_c, ErrorKind::InvalidArgument, "lambda_max must exceed 1/gamma at the double point");
    if (cfg.max_steps < 2000) cfg.max_steps = 2000;
    cfg.lambda_max = lambda_max;

    WedgeExtent w;
    w.k = k;
    w.lower = twop::secondary_curve(model, k, k + 1, cfg);
    w.upper = twop::secondary_curve(model, k + 1, k, cfg);
    w.lower_asymptote = detail::fit_asymptote(w.lower);
    w.upper_asymptote = detail::fit_asymptote(w.upper);

    int sign = 0;
    bool consistent = true;
    for (int i = 1; i <= samples; ++i) {
        const double lam = lam_c + (lambda_max - lam_c) * i / (samples + 1.0);
        const auto a = detail::alpha_at(w.lower, lam);
        const auto b = detail::alpha_at(w.upper, lam);
        if (!a || !b) continue;
        WedgeRow r{lam, *a, *b, *a - *b};
        const int s = sign_of(r.width);
        if (sign == 0) sign = s;
        if (s == 0 || s != sign) consistent = false;
        w.rows.push_back(r);
    }
    w.nonempty = consistent && !w.rows.empty();
    return w;
}

struct ZeroSweep {
    double alpha = 0.0;
    int k = 1;
    Diagram diagram;
    /// Number of nontrivial points per internal-zero count.
    std::map<int, int> histogram;
    std::optional<int> min_zeros;
    double min_zeros_inv_gamma = 0.0;
    /// No point with fewer than k-1 zeros.
    bool holds_k_minus_1 = true;
    /// No point with fewer than k zeros.
    bool holds_k = true;
};

inline ZeroSweep zero_count_sweep(const DiagramConfig& cfg, int k, double min_norm = 1e-6)
{
    ZeroSweep z;
    z.alpha = cfg.alpha;
    z.k = k;
    z.diagram = compute_diagram(cfg);
    for (const auto& b : z.diagram.branches)
        for (const auto& p : b.points) {
            if (p.field.norm() < min_norm) continue;
            const int zc = p.diagnostics.internal_zeros;
            ++z.histogram[zc];
            if (!z.min_zeros || zc < *z.min_zeros) {
                z.min_zeros = zc;
                z.min_zeros_inv_gamma = p.params.inv_gamma();
            }
        }
    if (z.min_zeros) {
        z.holds_k_minus_1 = *z.min_zeros >= k - 1;
        z.holds_k = *z.min_zeros >= k;
    }
    return z;
}

} // namespace ericksen::conj
