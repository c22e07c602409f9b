/**
 * @file linear_analysis.hpp
 * @brief Closed-form spectral data of the linearization at the trivial
 *        solution: eigenvalues, the zero-eigenvalue curves Gamma_k in the
 *        (alpha, 1/gamma) plane, mode ordering and double points.
 */
#pragma once

#include "ericksen/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace ericksen::linear {

struct EigenParams {
    double alpha = 0.0;
    double gamma = 1.0;
    double beta = 0.0;
    int k = 1;

    void validate() const
    {
        require(gamma > 0.0, ErrorKind::InvalidArgument, "gamma must be positive");
        require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
        require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
        require(beta >= 0.0, ErrorKind::InvalidArgument, "beta must be non-negative");
    }
};

/// Static (beta-free) part gamma pi^4 k^4 - pi^2 k^2 + alpha: the diagonal entry
/// of the steady linearization in the sine basis.
inline double static_eigenvalue(int k, double alpha, double gamma)
{
    const double kk = static_cast<double>(k) * k;
    return gamma * pi4 * kk * kk - pi2 * kk + alpha;
}

/// Both roots of nu^2 - beta pi^2 k^2 nu + (gamma pi^4 k^4 - pi^2 k^2 + alpha) = 0.
/// Returned in the order (+sqrt, -sqrt).
inline std::pair<std::complex<double>, std::complex<double>> trivial_eigenvalues(const EigenParams& p)
{
    p.validate();
    const double kk = static_cast<double>(p.k) * p.k;
    const double damping = p.beta * pi2 * kk;
    const double c = static_eigenvalue(p.k, p.alpha, p.gamma);
    const std::complex<double> root = std::sqrt(std::complex<double>(damping * damping - 4.0 * c, 0.0));
    return {0.5 * (damping + root), 0.5 * (damping - root)};
}

/// alpha values closer than this to the asymptote pi^2 k^2 are refused.
inline constexpr double asymptote_guard = 1e-9;

inline double asymptote(int k) { return pi2 * static_cast<double>(k) * k; }

/// gamma on Gamma_k: the value at which sin(k pi x) enters the kernel.
inline double gamma_k(int k, double alpha)
{
    require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
    require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
    const double kk = static_cast<double>(k) * k;
    require(alpha < asymptote(k) - asymptote_guard, ErrorKind::OutOfDomain,
            "mode " + std::to_string(k) + " never destabilizes for alpha >= pi^2 k^2");
    return (pi2 * kk - alpha) / (pi4 * kk * kk);
}

inline double inv_gamma_k(int k, double alpha) { return 1.0 / gamma_k(k, alpha); }

struct ModeOrdering {
    /// Modes sorted by descending gamma_k: the order in which they cross zero as
    /// 1/gamma increases. Modes with alpha >= pi^2 k^2 never cross and are absent.
    std::vector<int> crossing_order;
    /// All modes 1..K sorted by |k - k*| (ties to the smaller k).
    std::vector<int> distance_order;
    /// Modes 1..K that never destabilize at this alpha.
    std::vector<int> never_crossing;
    double k_star = 0.0;
    /// Human-readable notes where the two rankings disagree on crossing modes.
    std::vector<std::string> disagreements;
};

inline ModeOrdering order_modes(double alpha, int count)
{
    require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
    require(count >= 1, ErrorKind::InvalidArgument, "mode count must be >= 1");

    ModeOrdering out;
    out.k_star = std::sqrt(2.0 * alpha) / pi;

    std::vector<std::pair<double, int>> ranked;
    for (int k = 1; k <= count; ++k) {
        if (alpha < asymptote(k) - asymptote_guard)
            ranked.emplace_back(gamma_k(k, alpha), k);
        else
            out.never_crossing.push_back(k);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (const auto& r : ranked) out.crossing_order.push_back(r.second);

    for (int k = 1; k <= count; ++k) out.distance_order.push_back(k);
    const double ks = out.k_star;
    std::stable_sort(out.distance_order.begin(), out.distance_order.end(), [ks](int a, int b) {
        const double da = std::abs(a - ks), db = std::abs(b - ks);
        if (da != db) return da < db;
        return a < b;
    });

    std::vector<int> filtered;
    for (int k : out.distance_order)
        if (std::find(out.never_crossing.begin(), out.never_crossing.end(), k) == out.never_crossing.end())
            filtered.push_back(k);
    for (std::size_t i = 0; i < filtered.size(); ++i) {
        if (filtered[i] != out.crossing_order[i]) {
            out.disagreements.push_back("alpha=" + std::to_string(alpha) + " rank " + std::to_string(i + 1) +
                                        ": by gamma k=" + std::to_string(out.crossing_order[i]) +
                                        ", by |k-k*| k=" + std::to_string(filtered[i]));
        }
    }
    if (!out.never_crossing.empty()) {
        std::string note = "alpha=" + std::to_string(alpha) + ": modes without a crossing:";
        for (int k : out.never_crossing) note += " " + std::to_string(k);
        out.disagreements.push_back(note);
    }
    return out;
}

struct DoublePoint {
    int k = 1;
    int l = 2;
    double alpha_kl = 0.0;
    double gamma_kl = 0.0;

    double inv_gamma_kl() const { return 1.0 / gamma_kl; }
};

inline DoublePoint double_point(int k, int l)
{
    require(k >= 1 && l >= 1, ErrorKind::InvalidArgument, "mode indices must be >= 1");
    require(k != l, ErrorKind::InvalidArgument,
            "k == l: Gamma_k meets no other curve of the same index (no higher multiplicity)");
    if (k > l) std::swap(k, l);
    const double kk = static_cast<double>(k) * k, ll = static_cast<double>(l) * l;
    DoublePoint dp;
    dp.k = k;
    dp.l = l;
    dp.alpha_kl = pi2 * kk * ll / (kk + ll);
    dp.gamma_kl = (pi2 * kk - dp.alpha_kl) / (pi4 * kk * kk);
    return dp;
}

struct CurvePoint {
    double alpha = 0.0;
    double inv_gamma = 0.0;
};

struct CurveSamples {
    int k = 1;
    std::vector<CurvePoint> points;
    bool clipped = false;
    std::string warning;
};

/// Relative distance from the asymptote at which sampled curves are clipped.
inline constexpr double clip_fraction = 1e-3;

/// Uniform-in-alpha samples of Gamma_k as (alpha, 1/gamma).
inline CurveSamples gamma_curve_samples(int k, double alpha_lo, double alpha_hi, int n_samples)
{
    require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
    require(n_samples >= 1, ErrorKind::InvalidArgument, "need at least one sample");
    require(alpha_lo >= 0.0 && alpha_hi >= alpha_lo, ErrorKind::InvalidArgument, "bad alpha range");

    CurveSamples out;
    out.k = k;
    const double limit = asymptote(k) * (1.0 - clip_fraction);
    if (alpha_hi > limit) {
        out.clipped = true;
        out.warning = "Gamma_" + std::to_string(k) + ": range clipped at alpha=" + std::to_string(limit) +
                      " (asymptote alpha=" + std::to_string(asymptote(k)) + ")";
        alpha_hi = limit;
        if (alpha_lo > alpha_hi) return out;
    }
    if (n_samples == 1 || alpha_hi == alpha_lo) {
        out.points.push_back({alpha_lo, inv_gamma_k(k, alpha_lo)});
        return out;
    }
    out.points.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double a = alpha_lo + (alpha_hi - alpha_lo) * i / (n_samples - 1);
        out.points.push_back({a, inv_gamma_k(k, a)});
    }
    return out;
}

} // namespace ericksen::linear
