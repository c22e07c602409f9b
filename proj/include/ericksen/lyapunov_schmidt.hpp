/**
 * @file lyapunov_schmidt.hpp
 * @brief Lyapunov-Schmidt data at a (k,k+1) double zero eigenvalue of the
 *        trivial solution.
 *
 * The reduced bifurcation equations on ker L = span{sin(k pi x), sin((k+1) pi x)}
 * have the Z2+Z2 normal form
 *
 *     g1 = A x^3 + B x y^2 + a mu x
 *     g2 = C x^2 y + D y^3 + b mu y
 *
 * with mu the gamma-offset from the double point. This header provides the
 * coefficients in closed form, an independent quadrature evaluation of the
 * same projections, the modal parameters (m, n) and the local arrangement of
 * the two secondary-bifurcation curves that bound the wedge K_k.
 */
#pragma once

#include "ericksen/core.hpp"
#include "ericksen/linear_analysis.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace ericksen::ls {

enum class Region { Region1, Region2 };
enum class Wedge { Straddle, BothLeft, BothRight };
enum class Side { Left, Right };

inline const char* to_string(Region r) { return r == Region::Region1 ? "Region1" : "Region2"; }
inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }
inline const char* to_string(Wedge w)
{
    switch (w) {
    case Wedge::Straddle: return "Straddle";
    case Wedge::BothLeft: return "BothLeft";
    case Wedge::BothRight: return "BothRight";
    }
    return "?";
}

/// Cubic and parameter coefficients of the reduced equations.
struct Coefficients {
    double A = 0, B = 0, C = 0, D = 0;
    double a = 0, b = 0;
};

struct LSReport {
    int k = 1;
    Coefficients coeffs;
    double m = 0.0;
    double n = 0.0;
    Region region = Region::Region2;
    /// (eps1..eps4) for the distinguished parameter lambda = 1/gamma.
    std::array<int, 4> signs{};
};

inline Coefficients closed_form_coefficients(int k)
{
    require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
    const double k1 = k, k2 = k + 1.0;
    const double p = k1 * k1 * k1 * k1, q = k2 * k2 * k2 * k2;
    Coefficients c;
    c.A = 3.0 / 8.0 * p * pi4;
    c.D = 3.0 / 8.0 * q * pi4;
    c.B = c.C = 3.0 / 4.0 * pi4 * k1 * k1 * k2 * k2;
    c.a = 0.5 * p * pi4;
    c.b = 0.5 * q * pi4;
    return c;
}

inline std::array<int, 4> sign_pattern(const Coefficients& c)
{
    // d(gamma)/d(lambda) = -1/gamma^2 < 0 flips the parameter signs.
    return {sign_of(c.A), -sign_of(c.a), sign_of(c.D), -sign_of(c.b)};
}

inline double modal_m(const Coefficients& c) { return std::abs(c.b / (c.D * c.a)) * c.B; }
inline double modal_n(const Coefficients& c) { return std::abs(c.a / (c.A * c.b)) * c.C; }

inline Region classify(double m, double n)
{
    require(m > 1.0, ErrorKind::Internal, "modal parameter m <= 1 is outside the (k,k+1) family");
    return n > 1.0 ? Region::Region1 : Region::Region2;
}

inline LSReport ls_coefficients(int k)
{
    LSReport r;
    r.k = k;
    r.coeffs = closed_form_coefficients(k);
    r.m = modal_m(r.coeffs);
    r.n = modal_n(r.coeffs);
    r.region = classify(r.m, r.n);
    r.signs = sign_pattern(r.coeffs);
    return r;
}

namespace detail {

/// Derivatives of sin(j pi x): order 0..4.
inline double dsin(int j, int order, double x)
{
    const double w = j * pi;
    const double s = std::sin(w * x), c = std::cos(w * x);
    switch (order) {
    case 0: return s;
    case 1: return w * c;
    case 2: return -w * w * s;
    case 3: return -w * w * w * c;
    default: return w * w * w * w * s;
    }
}

/// d^3 Phi(0)(u1,u2,u3) for sine modes, i.e. -6 d/dx [u1_x u2_x u3_x] expanded
/// by the product rule.
inline double third_derivative(int j1, int j2, int j3, double x)
{
    const double d1 = dsin(j1, 1, x), d2 = dsin(j2, 1, x), d3 = dsin(j3, 1, x);
    return -6.0 * (dsin(j1, 2, x) * d2 * d3 + d1 * dsin(j2, 2, x) * d3 + d1 * d2 * dsin(j3, 2, x));
}

/// Midpoint rule on [0,1]; exact for cos(m pi x), 0 < m < 2n.
template <class F>
double midpoint(int n, F&& f)
{
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f((i + 0.5) / n);
    return s / n;
}

} // namespace detail

inline int min_quadrature_points(int k) { return 3 * (k + 1) + 1; }

/// Same six coefficients as closed_form_coefficients, by quadrature of the
/// projections <v_i, d^3 Phi(...)> and <v_i, (v_i)_xxxx>.
inline Coefficients ls_coefficients_quadrature(int k, int n_quad)
{
    require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
    require(n_quad >= min_quadrature_points(k), ErrorKind::QuadratureOrder,
            "quadrature with " + std::to_string(n_quad) + " points cannot integrate degree " +
                std::to_string(6 * (k + 1)) + " trigonometric polynomials exactly (need >= " +
                std::to_string(min_quadrature_points(k)) + ")");
    using detail::dsin;
    using detail::midpoint;
    using detail::third_derivative;
    const int l = k + 1;
    Coefficients c;
    c.A = midpoint(n_quad, [&](double x) { return dsin(k, 0, x) * third_derivative(k, k, k, x); }) / 6.0;
    c.B = midpoint(n_quad, [&](double x) { return dsin(k, 0, x) * third_derivative(k, l, l, x); }) / 2.0;
    c.C = midpoint(n_quad, [&](double x) { return dsin(l, 0, x) * third_derivative(k, k, l, x); }) / 2.0;
    c.D = midpoint(n_quad, [&](double x) { return dsin(l, 0, x) * third_derivative(l, l, l, x); }) / 6.0;
    c.a = midpoint(n_quad, [&](double x) { return dsin(k, 0, x) * dsin(k, 4, x); });
    c.b = midpoint(n_quad, [&](double x) { return dsin(l, 0, x) * dsin(l, 4, x); });
    return c;
}

/// int_0^1 sin(2k pi x) sin(2(k+1) pi x) dx by quadrature: the cross term
/// dropped from B.
inline double cross_term_integral(int k, int n_quad)
{
    return detail::midpoint(n_quad, [k](double x) {
        return std::sin(2.0 * k * pi * x) * std::sin(2.0 * (k + 1) * pi * x);
    });
}

struct ModalParameters {
    double m = 0.0;
    double n = 0.0;
    Region region = Region::Region2;
};

inline ModalParameters modal_parameters(int k)
{
    require(k >= 1, ErrorKind::InvalidArgument, "mode index must be >= 1");
    const double r = (k + 1.0) / k;
    ModalParameters mp;
    mp.m = 2.0 * r * r;
    mp.n = 2.0 / (r * r);
    mp.region = classify(mp.m, mp.n);
    return mp;
}

/// Local direction, away from the double point, of one secondary-bifurcation
/// curve in the (alpha, 1/gamma) plane.
struct CurveDirection {
    double dalpha = 0.0;
    double dinv_gamma = 0.0;
    Side side = Side::Left;
    bool above = true;
    /// sigma_{k+1} / sigma_k along the curve (sigma_j = eigenvalue of mode j).
    double ratio = 0.0;
};

/// Predicted Morse indices of the two primary branches at a parameter offset.
/// std::nullopt where the branch does not exist.
struct PrimaryIndices {
    std::optional<int> lower;
    std::optional<int> upper;
};

struct WedgeGeometry {
    int k = 1;
    Region region = Region::Region2;
    Wedge wedge = Wedge::BothLeft;
    /// Gamma_{k,k+1}: secondary points on the k-th primary branch.
    CurveDirection lower_curve;
    /// Gamma_{k+1,k}: secondary points on the (k+1)-st primary branch.
    CurveDirection upper_curve;
    /// For BothLeft/BothRight: true when Gamma_{k,k+1} lies above Gamma_{k+1,k}.
    bool lower_curve_on_top = false;
    /// Morse indices inside the wedge (both primaries stable).
    PrimaryIndices inside{0, 0};
};

namespace detail {

/// Eigenvalues of modes k and k+1 at offset (dalpha, dgamma) from the double
/// point: sigma = <v, L v> = dgamma <v, v_xxxx> + dalpha <v, v>.
inline std::pair<double, double> sigmas(const Coefficients& c, double dalpha, double dgamma)
{
    return {c.a * dgamma + 0.5 * dalpha, c.b * dgamma + 0.5 * dalpha};
}

inline CurveDirection direction_for_ratio(const Coefficients& c, double ratio, double gamma_c)
{
    // sigma_{k+1} = ratio * sigma_k along the curve; both sigmas negative so
    // that the bifurcating primary exists. With b > a this fixes sign(dgamma).
    require(ratio > 0.0 && ratio != 1.0, ErrorKind::Internal, "degenerate secondary-curve ratio");
    const double dgamma = ratio > 1.0 ? -1.0 : 1.0;
    const double dalpha = dgamma * 2.0 * (c.b - ratio * c.a) / (ratio - 1.0);
    CurveDirection d;
    d.ratio = ratio;
    d.dalpha = dalpha;
    d.dinv_gamma = -dgamma / (gamma_c * gamma_c);
    const double norm = std::hypot(d.dalpha, d.dinv_gamma);
    d.dalpha /= norm;
    d.dinv_gamma /= norm;
    d.side = d.dalpha < 0.0 ? Side::Left : Side::Right;
    d.above = d.dinv_gamma > 0.0;
    return d;
}

} // namespace detail

/// Morse indices of the k-th and (k+1)-st primaries predicted by the
/// truncated normal form at (alpha_c + dalpha, gamma_c + dgamma).
inline PrimaryIndices predicted_indices(int k, double dalpha, double dgamma)
{
    const Coefficients c = closed_form_coefficients(k);
    const auto [sk, sl] = detail::sigmas(c, dalpha, dgamma);
    PrimaryIndices out;
    if (sk < 0.0) out.lower = (sl - (c.C / c.A) * sk) < 0.0 ? 1 : 0;
    if (sl < 0.0) out.upper = (sk - (c.B / c.D) * sl) < 0.0 ? 1 : 0;
    return out;
}

inline WedgeGeometry wedge_geometry(int k)
{
    const Coefficients c = closed_form_coefficients(k);
    const auto dp = linear::double_point(k, k + 1);
    WedgeGeometry w;
    w.k = k;
    w.region = modal_parameters(k).region;
    // Secondary point on the k-branch: sigma_{k+1} + C x^2 = 0 with x^2 = -sigma_k/A.
    w.lower_curve = detail::direction_for_ratio(c, c.C / c.A, dp.gamma_kl);
    // Secondary point on the (k+1)-branch: sigma_k + B y^2 = 0 with y^2 = -sigma_{k+1}/D.
    w.upper_curve = detail::direction_for_ratio(c, c.D / c.B, dp.gamma_kl);
    if (w.lower_curve.side != w.upper_curve.side)
        w.wedge = Wedge::Straddle;
    else
        w.wedge = w.lower_curve.side == Side::Left ? Wedge::BothLeft : Wedge::BothRight;
    // Compare heights at equal |dalpha| on the common side.
    const double hl = w.lower_curve.dinv_gamma / std::abs(w.lower_curve.dalpha);
    const double hu = w.upper_curve.dinv_gamma / std::abs(w.upper_curve.dalpha);
    w.lower_curve_on_top = hl > hu;
    return w;
}

} // namespace ericksen::ls
