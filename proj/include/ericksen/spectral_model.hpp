/**
 * @file spectral_model.hpp
 * @brief Sine-Galerkin discretization of
 *
 *     Phi(u; alpha, gamma) = gamma u_xxxx + alpha u - (u_x^3 - u_x)_x
 *
 * on (0,1) with u = u_xx = 0 at both ends.
 *
 * A field is u(x) = sum_k a_k sin(k pi x), k = 1..N, which satisfies both
 * boundary-condition pairs identically. The residual is returned as sine
 * coefficients, r_j = 2 int_0^1 Phi(u) sin(j pi x) dx, so the linear part is
 * diagonal. The cubic term is evaluated pseudo-spectrally on a midpoint grid
 * of 8N points, which integrates every product that occurs (trigonometric
 * degree <= 4N) exactly.
 */
#pragma once

#include "ericksen/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ericksen {

/// Sine coefficients a_1..a_N.
struct SineField {
    Vector coeffs;

    SineField() = default;
    explicit SineField(Vector c) : coeffs(std::move(c)) {}
    static SineField zero(int n) { return SineField(Vector::Zero(n)); }
    static SineField mode(int n, int k, double amplitude = 1.0)
    {
        require(k >= 1 && k <= n, ErrorKind::InvalidArgument, "mode index outside truncation");
        SineField f = zero(n);
        f.coeffs[k - 1] = amplitude;
        return f;
    }

    int size() const { return static_cast<int>(coeffs.size()); }
    double operator[](int k) const { return coeffs[k - 1]; } ///< 1-based mode access
    double& operator[](int k) { return coeffs[k - 1]; }
    double norm() const { return coeffs.norm(); }

    /// Truncate or zero-pad to n modes.
    SineField resized(int n) const
    {
        SineField out = zero(n);
        const int m = std::min(n, size());
        out.coeffs.head(m) = coeffs.head(m);
        return out;
    }

    void validate() const
    {
        require(size() >= 1, ErrorKind::InvalidArgument, "field needs at least one mode");
        require(coeffs.allFinite(), ErrorKind::InvalidArgument, "field coefficients must be finite");
    }
};

/// L^2(0,1) inner product of two sine series: (1/2) sum a_k b_k.
inline double l2_inner(const SineField& f, const SineField& g)
{
    const int m = std::min(f.size(), g.size());
    return 0.5 * f.coeffs.head(m).dot(g.coeffs.head(m));
}

enum class Symmetry { R1, R2, R1R2 };

/// R1 u = -u, R2 u(x) = u(1-x); sin(k pi (1-x)) = (-1)^{k+1} sin(k pi x).
inline SineField apply_symmetry(const SineField& f, Symmetry which)
{
    SineField out = f;
    for (int k = 1; k <= f.size(); ++k) {
        const double parity = (k % 2 == 1) ? 1.0 : -1.0;
        switch (which) {
        case Symmetry::R1: out[k] = -f[k]; break;
        case Symmetry::R2: out[k] = parity * f[k]; break;
        case Symmetry::R1R2: out[k] = -parity * f[k]; break;
        }
    }
    return out;
}

struct Diagnostics {
    double h3_norm = 0.0;
    double energy = 0.0;
    int morse_index = 0;
    int internal_zeros = 0;
    int lap_number = 0;
    bool morse_reliable = true;
};

struct MorseResult {
    int index = 0;
    /// Smallest |eigenvalue| of the diagonally scaled Jacobian.
    double min_abs_eigenvalue = 0.0;
    bool near_singular = false;
};

struct GridSamples {
    std::vector<double> x, u, ux, uxx, uxxx;
};

/// Pseudo-spectral evaluator for a fixed truncation N. Construction builds the
/// collocation tables; all member functions are const and may be called
/// concurrently.
class SpectralModel {
public:
    explicit SpectralModel(int n_modes) : n_(n_modes), m_(8 * n_modes)
    {
        require(n_modes >= 1, ErrorKind::InvalidArgument, "truncation N must be >= 1");
        x_.resize(m_);
        for (int i = 0; i < m_; ++i) x_[i] = (i + 0.5) / m_;
        // cos(m pi x_i) for m = 0..2N, sin(k pi x_i) for k = 1..N.
        cos_.resize(m_, 2 * n_ + 1);
        sin_.resize(m_, n_);
        for (int i = 0; i < m_; ++i) {
            for (int m = 0; m <= 2 * n_; ++m) cos_(i, m) = std::cos(m * pi * x_[i]);
            for (int k = 1; k <= n_; ++k) sin_(i, k - 1) = std::sin(k * pi * x_[i]);
        }
        wave_.resize(n_);
        for (int k = 1; k <= n_; ++k) wave_[k - 1] = k * pi;
    }

    int modes() const { return n_; }
    int grid_points() const { return m_; }

    /// Diagonal of the linearization at u = 0.
    Vector linear_diagonal(const ModelParams& p) const
    {
        Vector d(n_);
        for (int k = 1; k <= n_; ++k) {
            const double w2 = wave_[k - 1] * wave_[k - 1];
            d[k - 1] = p.gamma * w2 * w2 - w2 + p.alpha;
        }
        return d;
    }

    /// u_x on the collocation grid.
    Vector strain(const SineField& f) const
    {
        check(f);
        return cos_.middleCols(1, n_) * f.coeffs.cwiseProduct(wave_);
    }

    Vector values(const SineField& f) const
    {
        check(f);
        return sin_ * f.coeffs;
    }

    /// int_0^1 w(x) cos(m pi x) dx for m = 0..2N from grid values of w.
    Vector cosine_moments(const Vector& w_grid) const { return cos_.transpose() * w_grid / m_; }

    SineField residual(const SineField& f, const ModelParams& p) const
    {
        check(f);
        const Vector ux = strain(f);
        const Vector cubic = ux.array().cube().matrix();
        const Vector moments = cos_.middleCols(1, n_).transpose() * cubic / m_;
        Vector r = linear_diagonal(p).cwiseProduct(f.coeffs);
        r += 2.0 * wave_.cwiseProduct(moments);
        return SineField(r);
    }

    /// Cubic part of -(u_x^3)_x alone, as sine coefficients.
    SineField cubic_term(const SineField& f) const
    {
        const Vector ux = strain(f);
        const Vector moments = cos_.middleCols(1, n_).transpose() * ux.array().cube().matrix() / m_;
        return SineField(2.0 * wave_.cwiseProduct(moments));
    }

    /// K[w]_{jk} = 2 int w (j pi)(k pi) cos(j pi x) cos(k pi x) dx, built from
    /// cosine moments of w (Toeplitz-plus-Hankel structure).
    Matrix weighted_stiffness(const Vector& w_grid) const
    {
        const Vector mom = cosine_moments(w_grid);
        Matrix K(n_, n_);
        for (int j = 1; j <= n_; ++j)
            for (int k = j; k <= n_; ++k) {
                const double v = wave_[j - 1] * wave_[k - 1] * (mom[k - j] + mom[j + k]);
                K(j - 1, k - 1) = v;
                K(k - 1, j - 1) = v;
            }
        return K;
    }

    /// dPhi(u)[v] = gamma v_xxxx + alpha v - ((3 u_x^2 - 1) v_x)_x in the sine basis.
    Matrix jacobian(const SineField& f, const ModelParams& p) const
    {
        check(f);
        const Vector ux = strain(f);
        Matrix J = 3.0 * weighted_stiffness(ux.array().square().matrix());
        J.diagonal() += linear_diagonal(p);
        return J;
    }

    /// d/du of jacobian(u)[v], i.e. the map w -> 6 K[u_x v_x] w.
    Matrix jacobian_derivative(const SineField& f, const SineField& v) const
    {
        const Vector ux = strain(f), vx = strain(v);
        return 6.0 * weighted_stiffness(ux.cwiseProduct(vx));
    }

    /// d residual / d gamma.
    SineField residual_dgamma(const SineField& f) const
    {
        Vector r(n_);
        for (int k = 1; k <= n_; ++k) {
            const double w2 = wave_[k - 1] * wave_[k - 1];
            r[k - 1] = w2 * w2 * f[k];
        }
        return SineField(r);
    }

    /// Static energy int [ gamma/2 u_xx^2 + W(u_x) + alpha/2 u^2 ] dx with
    /// W(z) = (z^2 - 1)^2 / 4. Its L^2 gradient is Phi.
    double energy(const SineField& f, const ModelParams& p) const
    {
        check(f);
        double quad = 0.0;
        for (int k = 1; k <= n_; ++k) {
            const double w2 = wave_[k - 1] * wave_[k - 1];
            quad += f[k] * f[k] * (p.gamma * w2 * w2 + p.alpha);
        }
        const Vector ux = strain(f);
        const double well = (ux.array().square() - 1.0).square().sum() / (4.0 * m_);
        return 0.25 * quad + well;
    }

    GridSamples samples(const SineField& f, int n_points) const
    {
        check(f);
        require(n_points >= 2, ErrorKind::InvalidArgument, "need at least two sample points");
        GridSamples g;
        g.x.resize(n_points);
        g.u.assign(n_points, 0.0);
        g.ux = g.uxx = g.uxxx = g.u;
        for (int i = 0; i < n_points; ++i) {
            const double x = static_cast<double>(i) / (n_points - 1);
            g.x[i] = x;
            for (int k = 1; k <= n_; ++k) {
                const double w = wave_[k - 1];
                const double s = std::sin(w * x), c = std::cos(w * x);
                g.u[i] += f[k] * s;
                g.ux[i] += f[k] * w * c;
                g.uxx[i] -= f[k] * w * w * s;
                g.uxxx[i] -= f[k] * w * w * w * c;
            }
        }
        return g;
    }

    /// l2 norm of (u, u_x, u_xx, u_xxx) over the collocation grid (root mean
    /// square, i.e. an H^3-like norm on (0,1)).
    double h3_norm(const SineField& f) const
    {
        check(f);
        double s = 0.0;
        const Vector u = sin_ * f.coeffs;
        const Vector ux = strain(f);
        const Vector uxx = -(sin_ * f.coeffs.cwiseProduct(wave_.array().square().matrix()));
        const Vector uxxx = -(cos_.middleCols(1, n_) * f.coeffs.cwiseProduct(wave_.array().cube().matrix()));
        s = u.squaredNorm() + ux.squaredNorm() + uxx.squaredNorm() + uxxx.squaredNorm();
        return std::sqrt(s / m_);
    }

    /// Inertia of the Jacobian. Sylvester's law lets us count negative
    /// eigenvalues of S = D^{-1/2} J D^{-1/2} with D_k = gamma (k pi)^4 +
    /// (k pi)^2 + alpha, which removes the k^4 stiffness spread; tol_zero is
    /// 1e-7 ||S||.
    MorseResult morse_index(const SineField& f, const ModelParams& p, double rel_tol = 1e-7) const
    {
        return inertia(jacobian(f, p), p, rel_tol);
    }

    MorseResult inertia(const Matrix& J, const ModelParams& p, double rel_tol = 1e-7) const
    {
        return scaled_inertia(J, scaling(p), rel_tol);
    }

    Vector scaling(const ModelParams& p) const
    {
        Vector d(n_);
        for (int k = 1; k <= n_; ++k) {
            const double w2 = wave_[k - 1] * wave_[k - 1];
            d[k - 1] = p.gamma * w2 * w2 + w2 + p.alpha;
        }
        return d;
    }

    static MorseResult scaled_inertia(const Matrix& J, const Vector& d, double rel_tol = 1e-7)
    {
        const Vector s = d.cwiseSqrt().cwiseInverse();
        const Matrix S = s.asDiagonal() * J * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
        const Vector& ev = es.eigenvalues();
        MorseResult r;
        if (ev.size() == 0) return r;
        const double scale = ev.cwiseAbs().maxCoeff();
        const double tol = rel_tol * std::max(scale, 1e-300);
        r.min_abs_eigenvalue = ev.cwiseAbs().minCoeff();
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev[i] < -tol) ++r.index;
        r.near_singular = r.min_abs_eigenvalue <= tol;
        return r;
    }

    Diagnostics diagnostics(const SineField& f, const ModelParams& p) const;

private:
    void check(const SineField& f) const
    {
        require(f.size() == n_, ErrorKind::InvalidArgument,
                "field has " + std::to_string(f.size()) + " modes, model expects " + std::to_string(n_));
    }

    int n_;
    int m_;
    std::vector<double> x_;
    Matrix cos_;
    Matrix sin_;
    Vector wave_;
};

namespace detail {

inline double eval_series(const SineField& f, double x, bool derivative)
{
    double s = 0.0;
    for (int k = 1; k <= f.size(); ++k) {
        const double w = k * pi;
        s += derivative ? f[k] * w * std::cos(w * x) : f[k] * std::sin(w * x);
    }
    return s;
}

inline int count_sign_changes(const std::vector<double>& v)
{
    int changes = 0;
    int last = 0;
    for (double y : v) {
        const int s = sign_of(y);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace detail

/// Sign changes of u strictly inside (0,1), sampled on a uniform grid of
/// points_per_mode * N points. Where |u| has a shallow local minimum without a
/// sign change the interval is resampled 64x finer to catch close zero pairs.
inline int internal_zeros(const SineField& f, int points_per_mode = 64)
{
    f.validate();
    require(f.norm() >= 1e-12, ErrorKind::ZeroField, "internal zeros of a zero field are undefined");
    const int g = points_per_mode * f.size();
    std::vector<double> u(g - 1);
    for (int i = 1; i < g; ++i) u[i - 1] = detail::eval_series(f, static_cast<double>(i) / g, false);
    int zeros = detail::count_sign_changes(u);

    const double umax = std::abs(*std::max_element(u.begin(), u.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
    }));
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double a = std::abs(u[i - 1]), b = std::abs(u[i]), c = std::abs(u[i + 1]);
        const bool shallow_min = b <= a && b <= c && b < 1e-3 * umax;
        const bool no_change = sign_of(u[i - 1]) == sign_of(u[i]) && sign_of(u[i]) == sign_of(u[i + 1]);
        if (!shallow_min || !no_change) continue;
        const double lo = static_cast<double>(i) / g, hi = static_cast<double>(i + 2) / g;
        std::vector<double> fine(129);
        for (int j = 0; j <= 128; ++j) fine[j] = detail::eval_series(f, lo + (hi - lo) * j / 128.0, false);
        zeros += detail::count_sign_changes(fine);
    }
    return zeros;
}

/// Lap number: number of maximal monotone pieces of u on [0,1], i.e. sign
/// changes of u_x plus one.
inline int lap_number(const SineField& f, int points_per_mode = 64)
{
    f.validate();
    require(f.norm() >= 1e-12, ErrorKind::ZeroField, "lap number of a zero field is undefined");
    const int g = points_per_mode * f.size();
    std::vector<double> ux(g + 1);
    for (int i = 0; i <= g; ++i) ux[i] = detail::eval_series(f, static_cast<double>(i) / g, true);
    return detail::count_sign_changes(ux) + 1;
}

inline Diagnostics SpectralModel::diagnostics(const SineField& f, const ModelParams& p) const
{
    Diagnostics d;
    d.h3_norm = h3_norm(f);
    d.energy = energy(f, p);
    const MorseResult m = morse_index(f, p);
    d.morse_index = m.index;
    d.morse_reliable = !m.near_singular;
    if (f.norm() >= 1e-12) {
        d.internal_zeros = internal_zeros(f);
        d.lap_number = lap_number(f);
    }
    return d;
}

/// Random field with coefficients decaying like 1/k^2 (test helper, seeded).
inline SineField random_field(int n, std::uint64_t seed, double scale = 0.3)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    SineField f = SineField::zero(n);
    for (int k = 1; k <= n; ++k) f[k] = scale * dist(rng) / (static_cast<double>(k) * k);
    return f;
}

} // namespace ericksen
