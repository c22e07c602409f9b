// Acceptance gate: one PASS/FAIL line per criterion, then the property suite.
#include "ericksen/diagram.hpp"
#include "ericksen/io.hpp"
#include "ericksen/lyapunov_schmidt.hpp"
#include "ericksen/two_mode.hpp"
#include "ericksen/two_param.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace ericksen;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail)
{
    if (!ok) ++failures;
    std::printf("%s %-9s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string g(double v)
{
    char b[40];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}

void guarded(const std::string& id, const std::function<void()>& fn)
{
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "  [%s %.1fs]\n", id.c_str(), dt);
}

const two_mode::LoopTrace& loop08()
{
    static const two_mode::LoopTrace t = two_mode::trace_loop(0.8);
    return t;
}

Diagram diagram_depth1(double alpha, double lambda_max)
{
    DiagramConfig cfg = default_diagram_config(alpha, 1.0, lambda_max, 32);
    cfg.depth = 1;
    return compute_diagram(cfg);
}

const Diagram& diagram75()
{
    static const Diagram d = diagram_depth1(7.5, 300.0);
    return d;
}

bool has_loop(const Diagram& d, int za, int zb, std::string& detail)
{
    bool found = false;
    for (const auto& l : d.loops) {
        detail += "loop " + std::to_string(l.zeros_a) + "-" + std::to_string(l.zeros_b) + " zeros at 1/gamma=" +
                  g(l.connection_inv_gamma) + (l.closed ? " closed; " : " open; ");
        const int lo = std::min(l.zeros_a, l.zeros_b), hi = std::max(l.zeros_a, l.zeros_b);
        if (l.closed && lo == za && hi == zb) found = true;
    }
    if (d.loops.empty()) detail += "no loop; ";
    detail += "gate failures " + std::to_string(d.gate_failures);
    return found;
}

} // namespace

int main()
{
    // Closed-form suite.
    guarded("1", [] {
        const auto d = linear::double_point(1, 2);
        const double gap = std::abs(linear::gamma_k(1, d.alpha_kl) - linear::gamma_k(2, d.alpha_kl));
        const bool ok = std::abs(d.alpha_kl - 4 * pi2 / 5) < 1e-14 && std::abs(d.gamma_kl - 1 / (5 * pi2)) < 1e-16 &&
                        gap < 1e-12;
        report("1", ok, "double_point(1,2)=(" + g(d.alpha_kl) + ", " + g(d.gamma_kl) + ") gap " + g(gap));
    });
    guarded("2", [] {
        const auto o = linear::order_modes(25.0, 4);
        std::string s;
        for (int k : o.distance_order) s += std::to_string(k) + " ";
        report("2", o.distance_order == std::vector<int>{2, 3, 1, 4}, "order_modes(25,4) = " + s);
    });
    guarded("3", [] {
        const auto m1 = ls::modal_parameters(1), m2 = ls::modal_parameters(2), m3 = ls::modal_parameters(3);
        bool ok = m1.m == 8.0 && m1.n == 0.5 && m1.region == ls::Region::Region2;
        ok = ok && std::abs(m2.m - 4.5) < 1e-14 && std::abs(m2.n - 8.0 / 9.0) < 1e-14 && m2.region == ls::Region::Region2;
        ok = ok && std::abs(m3.m - 32.0 / 9.0) < 1e-14 && std::abs(m3.n - 9.0 / 8.0) < 1e-14 &&
             m3.region == ls::Region::Region1;
        double worst = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const auto mp = ls::modal_parameters(k);
            worst = std::max(worst, std::abs(mp.m * mp.n - 4.0));
        }
        report("3", ok && worst < 1e-14, "k=1,2,3 regions 2,2,1; max |mn-4| = " + g(worst));
    });
    guarded("4", [] {
        double worst = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const auto q = ls::ls_coefficients_quadrature(k, 4 * (k + 1) + 8);
            const auto c = ls::closed_form_coefficients(k);
            const double ref[] = {c.A, c.B, c.C, c.D, c.a, c.b};
            const double got[] = {q.A, q.B, q.C, q.D, q.a, q.b};
            for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]) / std::abs(ref[i]));
        }
        report("4", worst < 1e-10, "max relative error k=1..6: " + g(worst));
    });

    // Two-mode suite.
    guarded("5", [] {
        const double v = two_mode::pitchfork_line(0.8);
        report("5", std::abs(v - 0.09542483660) < 1e-10, "pitchfork_line(0.8) = " + g(v));
    });
    guarded("6", [] {
        const auto [h1, h2] = two_mode::turning_point_slopes();
        report("6", std::abs(h1 - 0.203171) < 1e-5 && std::abs(h2 - 0.043484) < 1e-5,
               "slopes (" + g(h1) + ", " + g(h2) + ")");
    });
    guarded("7", [] {
        const double p0 = two_mode::turning_point_poly(0.9, 0.1);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double a1 = u(rng), g1 = u(rng);
            const double scale = two_mode::detail::eval(two_mode::detail::p1_terms, 0.9 - a1, 0.1 - g1, true);
            worst = std::max(worst, std::abs(two_mode::turning_point_poly(0.9 - a1, 0.1 - g1) -
                                             two_mode::shifted_poly(a1, g1)) / scale);
        }
        report("7", std::abs(p0) < 1e-10 && worst < 1e-13,
               "P1(9/10,1/10) = " + g(p0) + "; shift identity max scaled error " + g(worst));
    });
    guarded("8", [] {
        const auto& t = loop08();
        bool ok = t.pitchfork.has_value() && !t.folds.empty();
        double pf = 0.0, worst = 0.0;
        if (t.pitchfork) pf = std::abs(t.pitchfork->gamma - two_mode::pitchfork_line(0.8));
        for (const auto& f : t.folds) worst = std::max(worst, f.p1_scaled);
        ok = ok && pf < 1e-6 && worst < 1e-4;
        report("8", ok, "pitchfork error " + g(pf) + "; " + std::to_string(t.folds.size()) + " folds, max |P1| scaled " +
                            g(worst));
    });

    // Continuation suite.
    guarded("9", [] {
        const SpectralModel model(32);
        const SpectralProblem prob(model, 7.5);
        const Branch b = trivial_branch(prob, default_branch_config(1.0, 200.0));
        const double expected[] = {41.108, 48.738, 97.019, 165.79};
        std::vector<double> found;
        for (std::size_t i : b.event_indices())
            if (b.points[i].event == EventType::BranchPoint) found.push_back(b.points[i].params.inv_gamma());
        bool ok = found.size() == 4;
        std::string s;
        for (std::size_t k = 0; k < found.size(); ++k) {
            s += g(found[k]) + " ";
            if (k < 4) ok = ok && std::abs(found[k] - expected[k]) < 1e-3 * expected[k];
        }
        report("9", ok, "branch points at 1/gamma = " + s);
    });
    guarded("10", [] {
        std::string d75, d33;
        const bool a = has_loop(diagram75(), 0, 2, d75);
        const bool b = has_loop(diagram_depth1(33.0, 1200.0), 1, 5, d33);
        report("10", a && b, "alpha=7.5: " + d75 + " | alpha=33: " + d33);
    });

    const SpectralModel model32(32);
    twop::WedgeMeasurement w1, w3;
    guarded("11", [&] {
        w1 = twop::measure_wedge(model32, 1);
        w3 = twop::measure_wedge(model32, 3);
        bool ok = w1.wedge == ls::Wedge::BothLeft && w3.wedge == ls::Wedge::Straddle;
        double worst = 0.0;
        for (const auto* w : {&w1, &w3}) {
            const auto dp = linear::double_point(w->k, w->k + 1);
            for (const auto* c : {&w->lower, &w->upper}) {
                if (!c->terminus) {
                    ok = false;
                    continue;
                }
                worst = std::max(worst, std::abs(c->terminus->alpha - dp.alpha_kl) / dp.alpha_kl);
                worst = std::max(worst, std::abs(c->terminus->inv_gamma - dp.inv_gamma_kl()) / dp.inv_gamma_kl());
            }
        }
        report("11", ok && worst < 1e-6,
               std::string("k=1 ") + (w1.wedge ? ls::to_string(*w1.wedge) : "none") + ", k=3 " +
                   (w3.wedge ? ls::to_string(*w3.wedge) : "none") + "; max relative terminus error " + g(worst));
    });
    guarded("12", [&] {
        const auto s = twop::wedge_samples(w3, 0.02);
        auto idx = [&](const linear::CurvePoint& q) {
            std::array<int, 2> out{-1, -1};
            for (int j = 0; j < 2; ++j) {
                const auto u = twop::primary_at(model32, 3 + j, q.alpha, q.inv_gamma);
                if (u) out[j] = model32.morse_index(*u, ModelParams::from_inv_gamma(q.alpha, q.inv_gamma)).index;
            }
            return out;
        };
        const auto in = idx(s.inside), lo = idx(s.outside_lower), up = idx(s.outside_upper);
        auto one = [](const std::array<int, 2>& a) { return a[0] >= 0 && a[1] >= 0 && a[0] + a[1] == 1; };
        const bool ok = in[0] == 0 && in[1] == 0 && one(lo) && one(up);
        auto str = [](const std::array<int, 2>& a) { return std::to_string(a[0]) + "," + std::to_string(a[1]); };
        report("12", ok, "indices (k=3,k=4) inside " + str(in) + ", outside " + str(lo) + " and " + str(up));
    });
    guarded("13", [] {
        const Diagram& d = diagram75();
        const BranchPoint* pick = nullptr;
        for (const auto& l : d.loops) {
            if (std::min(l.zeros_a, l.zeros_b) != 0) continue;
            for (const auto& p : d.branches[l.branch].points) {
                const double lam = p.params.inv_gamma();
                if (lam > 110.0 && lam < 135.0 && p.field.norm() > 1e-3) {
                    pick = &p;
                    break;
                }
            }
            if (pick) break;
        }
        if (!pick) {
            report("13", false, "no loop point found");
            return;
        }
        const auto s = two_mode::aston_scale(pick->field, pick->params, 2);
        const double r = SpectralModel(s.field.size()).residual(s.field, s.params).norm();
        const bool params_ok = s.params.alpha == 4.0 * pick->params.alpha && s.params.gamma == pick->params.gamma / 4.0;
        report("13", r < 1e-8 && params_ok,
               "loop point at 1/gamma=" + g(pick->params.inv_gamma()) + " scaled to alpha=" + g(s.params.alpha) +
                   ", residual " + g(r));
    });

    // Property suite.
    guarded("property", [] {
        std::string detail;
        bool ok = true;
        const SpectralModel m(24);
        const ModelParams p{7.5, 0.01};
        double eq = 0.0, sym = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const SineField f = random_field(24, seed);
            const double scale = std::max(1.0, m.residual(f, p).norm());
            for (auto which : {Symmetry::R1, Symmetry::R2})
                eq = std::max(eq, (m.residual(apply_symmetry(f, which), p).coeffs -
                                   apply_symmetry(m.residual(f, p), which).coeffs)
                                          .norm() /
                                      scale);
            const Matrix J = m.jacobian(f, p);
            sym = std::max(sym, (J - J.transpose()).norm() / J.norm());
        }
        ok = ok && eq < 1e-12 && sym < 1e-12;
        detail += "equivariance " + g(eq) + ", jacobian symmetry " + g(sym);

        std::mt19937_64 rng(3);
        std::normal_distribution<double> nd;
        const SineField f = random_field(24, 99);
        double grad = 0.0;
        for (int i = 0; i < 20; ++i) {
            SineField v = SineField::zero(24);
            for (int k = 1; k <= 24; ++k) v[k] = nd(rng) / (k * k);
            const double h = 1e-5;
            const double fd =
                (m.energy(SineField(f.coeffs + h * v.coeffs), p) - m.energy(SineField(f.coeffs - h * v.coeffs), p)) /
                (2 * h);
            const double ex = l2_inner(m.residual(f, p), v);
            grad = std::max(grad, std::abs(fd - ex) / std::abs(ex));
        }
        ok = ok && grad < 1e-6;
        detail += ", gradient " + g(grad);

        double mn = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const auto mp = ls::modal_parameters(k);
            mn = std::max(mn, std::abs(mp.m * mp.n - 4.0));
        }
        bool odd = true;
        std::uniform_real_distribution<double> uu(-1.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const two_mode::TwoModeState s{uu(rng), uu(rng), 0.5 + uu(rng), 0.5 + uu(rng)};
            odd = odd && two_mode::residual({-s.a1, -s.a3, s.alpha, s.gamma}) == Eigen::Vector2d(-two_mode::residual(s));
        }
        ok = ok && mn < 1e-14 && odd;
        detail += ", mn=4 " + g(mn) + ", two-mode odd " + (odd ? "yes" : "no");
        report("property", ok, detail);
    });
    guarded("spectral", [] {
        // Primaries 1..3 at alpha = 7.5, 1/gamma at fixed multiples of the onset, N = 32 re-evaluated at N = 64.
        const double tol = default_branch_config(1.0, 300.0).newton_tol;
        const SpectralModel a32(32), a64(64);
        int total = 0, bad = 0, bad_rel = 0;
        double worst = 0.0;
        std::string where;
        for (int k = 1; k <= 3; ++k)
            for (double f : {1.05, 1.25, 1.5, 2.0}) {
                const double lam = f * linear::inv_gamma_k(k, 7.5);
                if (lam > 300.0) continue;
                const auto u = twop::primary_at(a32, k, 7.5, lam);
                ++total;
                if (!u) {
                    ++bad;
                    ++bad_rel;
                    continue;
                }
                const ModelParams q = ModelParams::from_inv_gamma(7.5, lam);
                const double r = a64.residual(u->resized(64), q).norm();
                const double scale = std::max(1.0, a32.linear_diagonal(q).cwiseProduct(u->coeffs).norm());
                if (r >= 10 * tol) ++bad;
                if (r >= 10 * tol * scale) ++bad_rel;
                if (r > worst) {
                    worst = r;
                    where = "k=" + std::to_string(k) + " 1/gamma=" + g(lam);
                }
            }
        report("spectral", bad == 0,
               std::to_string(bad) + "/" + std::to_string(total) + " states exceed 10*tol at N=64, worst " + g(worst) +
                   " (" + where + "); " + std::to_string(bad_rel) + " exceed the relative gate");
    });

    std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
