// Command-line front end: eigencurves, double-points, ls, diagram,
// two-param, loop, conjectures. Exit codes: 0 ok, 2 usage, 3 numerical.

#include "ericksen/conjectures.hpp"
#include "ericksen/diagram.hpp"
#include "ericksen/io.hpp"
#include "ericksen/linear_analysis.hpp"
#include "ericksen/lyapunov_schmidt.hpp"
#include "ericksen/two_mode.hpp"
#include "ericksen/two_param.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

using namespace ericksen;
using io::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

Range parse_range(const std::string& s, const std::string& what)
{
    const auto c = s.find(':');
    require(c != std::string::npos, ErrorKind::InvalidArgument, what + " must be lo:hi");
    Range r;
    try {
        std::size_t used = 0;
        r.lo = std::stod(s.substr(0, c), &used);
        require(used == c, ErrorKind::InvalidArgument, "bad number in " + what);
        const std::string rest = s.substr(c + 1);
        r.hi = std::stod(rest, &used);
        require(used == rest.size(), ErrorKind::InvalidArgument, "bad number in " + what);
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidArgument, "bad number in " + what + ": " + s);
    }
    require(r.lo <= r.hi, ErrorKind::InvalidArgument, what + " needs lo <= hi");
    return r;
}

std::vector<double> parse_list(const std::string& s, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            require(used == item.size(), ErrorKind::InvalidArgument, "bad number in " + what);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidArgument, "bad number in " + what + ": " + item);
        }
    }
    require(!out.empty(), ErrorKind::InvalidArgument, what + " is empty");
    return out;
}

/// Output directory, prefix and manifest for one command run.
class Run {
public:
    Run(std::string command, json config, const std::string& out_dir)
        : start_(std::chrono::steady_clock::now()),
          out_(out_dir, command + "-" + io::hash_key(command + config.dump()))
    {
        manifest_.command = command;
        manifest_.input_hash = io::hash_key(command + config.dump());
        manifest_.config = std::move(config);
    }

    io::OutputDir& out() { return out_; }
    void warn(const std::string& w)
    {
        std::cerr << "warning: " << w << '\n';
        manifest_.warnings.push_back(w);
    }
    void mark_partial() { manifest_.partial = true; }
    bool partial() const { return manifest_.partial; }

    int finish()
    {
        manifest_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        out_.finish(manifest_);
        for (const auto& f : out_.files()) std::cout << f << '\n';
        return manifest_.partial ? exit_numerical : exit_ok;
    }

private:
    std::chrono::steady_clock::time_point start_;
    io::OutputDir out_;
    io::RunManifest manifest_;
};

json double_point_json(const linear::DoublePoint& d)
{
    return {{"k", d.k},
            {"l", d.l},
            {"alpha", d.alpha_kl},
            {"gamma", d.gamma_kl},
            {"inv_gamma", d.inv_gamma_kl()},
            {"gamma_gap", std::abs(linear::gamma_k(d.k, d.alpha_kl) - linear::gamma_k(d.l, d.alpha_kl))}};
}

json double_points_json(int kmax)
{
    json a = json::array();
    for (int k = 1; k <= kmax; ++k)
        for (int l = k + 1; l <= kmax; ++l) a.push_back(double_point_json(linear::double_point(k, l)));
    return a;
}

json coefficients_json(const ls::Coefficients& c)
{
    return {{"A", c.A}, {"B", c.B}, {"C", c.C}, {"D", c.D}, {"a", c.a}, {"b", c.b}};
}

json direction_json(const ls::CurveDirection& d)
{
    return {{"dalpha", d.dalpha}, {"dinv_gamma", d.dinv_gamma}, {"side", ls::to_string(d.side)}};
}

json terminus_json(const twop::SecondaryCurve& c)
{
    json j = {{"k", c.k}, {"l", c.l}, {"points", c.points.size()}, {"termination", cont::to_string(c.termination)},
              {"partial", c.partial}, {"message", c.message}};
    if (c.terminus) {
        const auto dp = linear::double_point(std::min(c.k, c.l), std::max(c.k, c.l));
        const auto& t = *c.terminus;
        j["terminus"] = {{"alpha", t.alpha},
                         {"inv_gamma", t.inv_gamma},
                         {"gamma", 1.0 / t.inv_gamma},
                         {"dalpha", t.dalpha},
                         {"dinv_gamma", t.dinv_gamma},
                         {"side", ls::to_string(t.side)},
                         {"fit_residual", t.fit_residual},
                         {"alpha_error", std::abs(t.alpha - dp.alpha_kl)},
                         {"gamma_error", std::abs(1.0 / t.inv_gamma - dp.gamma_kl)}};
    }
    return j;
}

int cmd_eigencurves(const std::string& alpha_s, int kmax, int samples, const std::string& out_dir)
{
    require(kmax >= 1, ErrorKind::InvalidArgument, "kmax must be >= 1");
    require(samples >= 1, ErrorKind::InvalidArgument, "samples must be >= 1");
    const Range a = parse_range(alpha_s, "--alpha");
    require(a.lo >= 0.0, ErrorKind::InvalidArgument, "alpha must be non-negative");
    Run run("eigencurves", {{"alpha", {a.lo, a.hi}}, {"kmax", kmax}, {"samples", samples}}, out_dir);
    for (int k = 1; k <= kmax; ++k) {
        if (a.lo >= linear::asymptote(k) - linear::asymptote_guard) {
            run.warn("Gamma_" + std::to_string(k) + " has no points for alpha >= " + io::num(linear::asymptote(k)));
            continue;
        }
        const auto c = linear::gamma_curve_samples(k, a.lo, a.hi, a.lo == a.hi ? 1 : samples);
        if (c.clipped) run.warn(c.warning);
        run.out().write("gamma_" + std::to_string(k) + ".csv", [&](std::ostream& os) { io::write_curve_csv(os, c.points); });
    }
    if (kmax >= 2) run.out().write_json("double_points.json", double_points_json(kmax));
    return run.finish();
}

int cmd_double_points(int kmax, const std::string& out_dir)
{
    require(kmax >= 2, ErrorKind::InvalidArgument, "kmax must be >= 2");
    Run run("double-points", {{"kmax", kmax}}, out_dir);
    const json a = double_points_json(kmax);
    std::cout << a.dump(2) << '\n';
    run.out().write_json("double_points.json", a);
    return run.finish();
}

int cmd_ls(int k, int n_quad, const std::string& out_dir)
{
    require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
    if (n_quad <= 0) n_quad = 4 * ls::min_quadrature_points(k);
    Run run("ls", {{"k", k}, {"n_quad", n_quad}}, out_dir);
    const auto rep = ls::ls_coefficients(k);
    const auto quad = ls::ls_coefficients_quadrature(k, n_quad);
    const auto& c = rep.coeffs;
    double rel = 0.0;
    for (auto [x, y] : {std::pair{c.A, quad.A}, {c.B, quad.B}, {c.C, quad.C}, {c.D, quad.D}, {c.a, quad.a}, {c.b, quad.b}})
        rel = std::max(rel, std::abs(x - y) / std::abs(x));
    const auto wg = ls::wedge_geometry(k);
    const json j = {{"k", k},
                    {"coefficients", coefficients_json(c)},
                    {"quadrature", coefficients_json(quad)},
                    {"quadrature_max_rel_error", rel},
                    {"m", rep.m},
                    {"n", rep.n},
                    {"region", ls::to_string(rep.region)},
                    {"signs", rep.signs},
                    {"double_point", double_point_json(linear::double_point(k, k + 1))},
                    {"wedge",
                     {{"type", ls::to_string(wg.wedge)},
                      {"lower_curve", direction_json(wg.lower_curve)},
                      {"upper_curve", direction_json(wg.upper_curve)},
                      {"lower_curve_on_top", wg.lower_curve_on_top},
                      {"inside_indices", {wg.inside.lower.value_or(-1), wg.inside.upper.value_or(-1)}}}}};
    std::cout << j.dump(2) << '\n';
    run.out().write_json("report.json", j);
    return run.finish();
}

json diagram_summary(const Diagram& d)
{
    json branches = json::array();
    for (std::size_t b = 0; b < d.branches.size(); ++b) {
        const Branch& br = d.branches[b];
        int dropped = 0;
        for (char ok : d.validated[b]) dropped += ok ? 0 : 1;
        branches.push_back({{"index", b},
                            {"label", br.label},
                            {"primary_mode", d.primary_mode[b]},
                            {"points", br.points.size()},
                            {"dropped_points", dropped},
                            {"termination", cont::to_string(br.termination)},
                            {"partial", br.partial},
                            {"message", br.message}});
    }
    json conns = json::array();
    for (const auto& c : d.connections)
        conns.push_back({{"branch", c.branch},
                         {"from_mode", c.from_mode},
                         {"to_mode", c.to_mode},
                         {"from_zeros", c.from_zeros},
                         {"to_zeros", c.to_zeros},
                         {"inv_gamma", c.inv_gamma}});
    json loops = json::array();
    for (const auto& l : d.loops)
        loops.push_back({{"branch", l.branch},
                         {"mode_a", l.mode_a},
                         {"mode_b", l.mode_b},
                         {"zeros_a", l.zeros_a},
                         {"zeros_b", l.zeros_b},
                         {"fold_inv_gamma", l.fold_inv_gamma},
                         {"connection_inv_gamma", l.connection_inv_gamma},
                         {"closed", l.closed}});
    return {{"alpha", d.config.alpha},
            {"modes", d.modes},
            {"refined", d.refined},
            {"revalidation_residual", d.revalidation_residual},
            {"max_tail_ratio", d.max_tail_ratio},
            {"gate_failures", d.gate_failures},
            {"branches", branches},
            {"connections", conns},
            {"loops", loops},
            {"warnings", d.warnings}};
}

/// Writes branch CSVs (gated rows only), events and summary.
void write_diagram(Run& run, const Diagram& d, const std::string& tag)
{
    json events = json::array();
    for (std::size_t b = 0; b < d.branches.size(); ++b) {
        Branch kept = d.branches[b];
        kept.points.clear();
        for (std::size_t i = 0; i < d.branches[b].points.size(); ++i)
            if (d.validated[b][i]) kept.points.push_back(d.branches[b].points[i]);
        char name[48];
        std::snprintf(name, sizeof name, "%sbranch_%03zu.csv", tag.c_str(), b);
        run.out().write(name, [&](std::ostream& os) { io::write_branch_csv(os, kept, d.modes); });
        json e = io::events_json(d.branches[b]);
        for (auto& x : e) x["branch"] = b;
        for (auto& x : e) events.push_back(x);
    }
    run.out().write_json(tag + "events.json", events);
    run.out().write_json(tag + "summary.json", diagram_summary(d));
    for (const auto& w : d.warnings) run.warn(w);
    if (d.partial() || d.gate_failures > 0) run.mark_partial();
}

DiagramConfig diagram_config(double alpha, Range lam, int depth, int modes, int max_modes)
{
    require(modes >= 4, ErrorKind::InvalidArgument, "modes must be >= 4");
    DiagramConfig cfg = default_diagram_config(alpha, lam.lo, lam.hi, modes);
    cfg.depth = depth;
    cfg.max_modes = max_modes;
    cfg.validate();
    return cfg;
}

json diagram_config_json(const DiagramConfig& c)
{
    return {{"alpha", c.alpha},         {"lambda", {c.lambda_min, c.lambda_max}}, {"depth", c.depth},
            {"modes", c.modes},         {"max_modes", c.max_modes},               {"tail_tol", c.tail_tol},
            {"gate_factor", c.gate_factor}, {"newton_tol", c.branch.newton_tol}};
}

int cmd_diagram(double alpha, const std::string& lam_s, int depth, int modes, int max_modes, const std::string& out_dir)
{
    const DiagramConfig cfg = diagram_config(alpha, parse_range(lam_s, "--lambda"), depth, modes, max_modes);
    Run run("diagram", diagram_config_json(cfg), out_dir);
    const Diagram d = compute_diagram(cfg);
    write_diagram(run, d, "");
    for (const auto& l : d.loops)
        std::cout << "loop: primary " << l.mode_a << " (" << l.zeros_a << " zeros) - primary " << l.mode_b << " ("
                  << l.zeros_b << " zeros) at 1/gamma=" << io::num(l.connection_inv_gamma) << '\n';
    return run.finish();
}

int cmd_two_param(int k, int l, int modes, double lambda_max, const std::string& out_dir)
{
    require(k >= 1 && l >= 1 && std::abs(k - l) == 1, ErrorKind::InvalidArgument, "need k, l >= 1 with |k - l| = 1");
    require(modes >= 4, ErrorKind::InvalidArgument, "modes must be >= 4");
    Run run("two-param", {{"k", k}, {"l", l}, {"modes", modes}, {"lambda_max", lambda_max}}, out_dir);
    const int lo = std::min(k, l);
    const SpectralModel model(modes);
    twop::TwoParamConfig cfg;
    if (lambda_max > 0.0) {
        cfg.lambda_max = lambda_max;
        cfg.max_steps = 2000;
    }
    const auto w = twop::measure_wedge(model, lo, cfg);
    const auto predicted = ls::wedge_geometry(lo);
    for (const auto* c : {&w.lower, &w.upper}) {
        run.out().write("gamma_" + std::to_string(c->k) + "_" + std::to_string(c->l) + ".csv",
                        [&](std::ostream& os) { io::write_curve_csv(os, c->points); });
        if (c->partial) {
            run.warn(c->label + ": " + c->message);
            run.mark_partial();
        }
    }
    const auto dp = linear::double_point(lo, lo + 1);
    const double a_hi = std::min(dp.alpha_kl * 1.5, linear::asymptote(lo) * (1.0 - linear::clip_fraction));
    for (int m : {lo, lo + 1}) {
        const auto c = linear::gamma_curve_samples(m, 0.5 * dp.alpha_kl, a_hi, 100);
        run.out().write("gamma_" + std::to_string(m) + ".csv", [&](std::ostream& os) { io::write_curve_csv(os, c.points); });
    }
    json j = {{"k", lo},
              {"double_point", double_point_json(dp)},
              {"lower", terminus_json(w.lower)},
              {"upper", terminus_json(w.upper)},
              {"predicted_wedge", ls::to_string(predicted.wedge)},
              {"lower_curve_on_top", w.lower_curve_on_top}};
    j["measured_wedge"] = w.wedge ? json(ls::to_string(*w.wedge)) : json(nullptr);
    std::cout << "wedge: " << (w.wedge ? ls::to_string(*w.wedge) : "undetermined") << " (predicted "
              << ls::to_string(predicted.wedge) << ")\n";
    run.out().write_json("summary.json", j);
    if (!w.wedge) run.mark_partial();
    return run.finish();
}

json loop_event_json(const two_mode::LoopEvent& e)
{
    return {{"type", cont::to_string(e.type)}, {"branch", e.branch}, {"a1", e.a1},
            {"a3", e.a3},                      {"gamma", e.gamma},   {"p1_scaled", e.p1_scaled}};
}

int cmd_loop(double alpha_r, bool pde, double lambda_max, int modes, int max_modes, const std::string& out_dir)
{
    Run run("loop",
            {{"alpha_rescaled", alpha_r}, {"pde", pde}, {"lambda_max", lambda_max}, {"modes", modes}, {"max_modes", max_modes}},
            out_dir);
    const auto t = two_mode::trace_loop(alpha_r);
    for (std::size_t i = 0; i < t.branches.size(); ++i) {
        std::string name = t.branches[i].label;
        for (auto& ch : name)
            if (ch == ' ' || ch == '>' || ch == '<') ch = ch == ' ' ? '_' : (ch == '>' ? 'p' : 'n');
        run.out().write("two_mode_" + name + ".csv", [&](std::ostream& os) { io::write_loop_csv(os, t.branches[i], alpha_r); });
    }
    json j;
    j["alpha_rescaled"] = alpha_r;
    j["pitchfork_line"] = two_mode::pitchfork_line(alpha_r);
    j["pitchfork"] = t.pitchfork ? loop_event_json(*t.pitchfork) : json(nullptr);
    json folds = json::array();
    for (const auto& f : t.folds) folds.push_back(loop_event_json(f));
    j["folds"] = folds;
    j["joining_leg_a1_sign"] = t.joining_leg;
    if (t.pitchfork)
        std::cout << "pitchfork at gamma=" << io::num(t.pitchfork->gamma) << " (line "
                  << io::num(two_mode::pitchfork_line(alpha_r)) << ")\n";
    for (const auto& f : t.folds)
        std::cout << "fold on " << f.branch << " at gamma=" << io::num(f.gamma) << " |P1| scaled "
                  << io::num(f.p1_scaled) << '\n';

    if (pde) {
        const auto unit = two_mode::coordinate_map(two_mode::Direction::RescaledToUnit, {alpha_r, 1.0});
        const DiagramConfig cfg = diagram_config(unit.alpha, {1.0, lambda_max}, 1, modes, max_modes);
        const Diagram d = compute_diagram(cfg);
        write_diagram(run, d, "pde_");
        json loops = json::array();
        for (const auto& l : d.loops) {
            loops.push_back({{"mode_a", l.mode_a}, {"mode_b", l.mode_b}, {"zeros_a", l.zeros_a},
                             {"zeros_b", l.zeros_b}, {"connection_inv_gamma", l.connection_inv_gamma}});
            std::cout << "pde loop at alpha=" << io::num(unit.alpha) << ": primary " << l.mode_a << " - primary "
                      << l.mode_b << " at 1/gamma=" << io::num(l.connection_inv_gamma) << '\n';
        }
        j["pde"] = {{"alpha", unit.alpha}, {"loops", loops}};
        if (d.loops.empty()) run.warn("no loop found in the full model at alpha=" + io::num(unit.alpha));
    }
    run.out().write_json("summary.json", j);
    return run.finish();
}

int cmd_conjectures(const std::string& alpha_s, const std::string& k_s, double lambda_max, const std::string& lam_s,
                    int depth, int modes, int samples, const std::string& out_dir)
{
    const auto alphas = parse_list(alpha_s, "--alpha");
    std::vector<int> ks;
    for (double v : parse_list(k_s, "--k")) {
        require(v >= 1.0 && v == std::floor(v), ErrorKind::InvalidArgument, "--k needs positive integers");
        ks.push_back(static_cast<int>(v));
    }
    const Range lam = parse_range(lam_s, "--lambda");
    Run run("conjectures",
            {{"alpha", alphas}, {"k", ks}, {"lambda_max", lambda_max}, {"lambda", {lam.lo, lam.hi}}, {"depth", depth},
             {"modes", modes}, {"samples", samples}},
            out_dir);
    const SpectralModel model(modes);
    json wedges = json::array();
    for (int k : ks) {
        const auto w = conj::wedge_extent(model, k, lambda_max, samples);
        const std::string tag = "wedge_k" + std::to_string(k);
        run.out().write(tag + ".csv", [&](std::ostream& os) {
            os << "inv_gamma,alpha_lower,alpha_upper,width\n";
            for (const auto& r : w.rows)
                os << io::num(r.inv_gamma) << ',' << io::num(r.alpha_lower) << ',' << io::num(r.alpha_upper) << ','
                   << io::num(r.width) << '\n';
        });
        auto asym = [](const std::optional<conj::Asymptote>& a) -> json {
            if (!a) return nullptr;
            return {{"alpha_estimate", a->alpha}, {"fit_residual", a->fit_residual},
                    {"last_inv_gamma", a->last_inv_gamma}, {"last_alpha", a->last_alpha}};
        };
        wedges.push_back({{"k", k}, {"nonempty", w.nonempty}, {"rows", w.rows.size()},
                          {"lower_asymptote", asym(w.lower_asymptote)}, {"upper_asymptote", asym(w.upper_asymptote)}});
        std::cout << "wedge k=" << k << ": " << (w.nonempty ? "non-empty" : "not non-empty") << " over "
                  << w.rows.size() << " samples";
        if (w.lower_asymptote) std::cout << ", Gamma_{k,k+1} alpha -> " << io::num(w.lower_asymptote->alpha);
        if (w.upper_asymptote) std::cout << ", Gamma_{k+1,k} alpha -> " << io::num(w.upper_asymptote->alpha);
        std::cout << '\n';
        if (w.lower.partial || w.upper.partial) run.mark_partial();
    }
    json sweeps = json::array();
    for (double a : alphas)
        for (int k : ks) {
            const DiagramConfig cfg = diagram_config(a, lam, depth, modes, 0);
            const auto z = conj::zero_count_sweep(cfg, k);
            json hist = json::object();
            for (auto [zc, cnt] : z.histogram) hist[std::to_string(zc)] = cnt;
            sweeps.push_back({{"alpha", a},
                              {"k", k},
                              {"alpha_exceeds_k2pi2", a > linear::asymptote(k)},
                              {"min_zeros", z.min_zeros ? json(*z.min_zeros) : json(nullptr)},
                              {"min_zeros_inv_gamma", z.min_zeros_inv_gamma},
                              {"no_fewer_than_k_minus_1", z.holds_k_minus_1},
                              {"no_fewer_than_k", z.holds_k},
                              {"histogram", hist}});
            std::cout << "alpha=" << io::num(a) << " k=" << k << ": min internal zeros "
                      << (z.min_zeros ? std::to_string(*z.min_zeros) : std::string("none")) << '\n';
        }
    run.out().write_json("summary.json", {{"wedges", wedges}, {"zero_sweeps", sweeps}});
    return run.finish();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bifurcation toolkit for the regularized Ericksen bar"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = "out";
    app.add_option("--out", out_dir, "output directory");

    std::string alpha_range = "0:40";
    int kmax = 3, samples = 200;
    auto* eig = app.add_subcommand("eigencurves", "Gamma_k curves and double points");
    eig->add_option("--alpha", alpha_range, "alpha range lo:hi")->capture_default_str();
    eig->add_option("--kmax", kmax)->capture_default_str();
    eig->add_option("--samples", samples)->capture_default_str();

    auto* dps = app.add_subcommand("double-points", "double eigenvalue points (k,l), k<l<=kmax");
    dps->add_option("--kmax", kmax)->capture_default_str();

    int k = 1, l = 2, n_quad = 0;
    auto* lsc = app.add_subcommand("ls", "Lyapunov-Schmidt report at the (k,k+1) double point");
    lsc->add_option("--k", k)->capture_default_str();
    lsc->add_option("--n-quad", n_quad, "quadrature points (0: automatic)");

    double alpha = 7.5;
    std::string lambda_range = "1:300";
    int depth = 2, modes = 32, max_modes = 64;
    auto* dia = app.add_subcommand("diagram", "one-parameter bifurcation diagram at fixed alpha");
    dia->add_option("--alpha", alpha)->capture_default_str();
    dia->add_option("--lambda", lambda_range, "1/gamma range lo:hi")->capture_default_str();
    dia->add_option("--depth", depth)->capture_default_str();
    dia->add_option("--modes", modes)->capture_default_str();
    dia->add_option("--max-modes", max_modes, "refinement cap")->capture_default_str();

    double lambda_max = 0.0;
    auto* tp = app.add_subcommand("two-param", "secondary bifurcation curves near the (k,l) double point");
    tp->add_option("--k", k)->capture_default_str();
    tp->add_option("--l", l)->capture_default_str();
    tp->add_option("--modes", modes)->capture_default_str();
    tp->add_option("--lambda-max", lambda_max, "continue outwards to this 1/gamma (0: off)")->capture_default_str();

    double alpha_r = 0.8, loop_lambda_max = 200.0;
    bool no_pde = false;
    auto* lp = app.add_subcommand("loop", "two-mode loop and the full-model loop at the mapped alpha");
    lp->add_option("--alpha-rescaled", alpha_r)->capture_default_str();
    lp->add_flag("--no-pde", no_pde, "skip the full model");
    lp->add_option("--lambda-max", loop_lambda_max)->capture_default_str();
    lp->add_option("--modes", modes)->capture_default_str();
    lp->add_option("--max-modes", max_modes, "refinement cap")->capture_default_str();

    std::string alpha_list = "12", k_list = "1", sweep_range = "1:300";
    double wedge_lambda_max = 400.0;
    int wedge_samples = 20, sweep_depth = 2;
    auto* cj = app.add_subcommand("conjectures", "wedge-extent and internal-zero sweeps");
    cj->add_option("--alpha", alpha_list, "comma-separated alpha values")->capture_default_str();
    cj->add_option("--k", k_list, "comma-separated k values")->capture_default_str();
    cj->add_option("--lambda-max", wedge_lambda_max, "outer 1/gamma of the wedge sweep")->capture_default_str();
    cj->add_option("--lambda", sweep_range, "1/gamma range of the zero sweep")->capture_default_str();
    cj->add_option("--depth", sweep_depth)->capture_default_str();
    cj->add_option("--modes", modes)->capture_default_str();
    cj->add_option("--samples", wedge_samples)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*eig) return cmd_eigencurves(alpha_range, kmax, samples, out_dir);
        if (*dps) return cmd_double_points(kmax, out_dir);
        if (*lsc) return cmd_ls(k, n_quad, out_dir);
        if (*dia) return cmd_diagram(alpha, lambda_range, depth, modes, max_modes, out_dir);
        if (*tp) return cmd_two_param(k, l, modes, lambda_max, out_dir);
        if (*lp) return cmd_loop(alpha_r, !no_pde, loop_lambda_max, modes, max_modes, out_dir);
        if (*cj)
            return cmd_conjectures(alpha_list, k_list, wedge_lambda_max, sweep_range, sweep_depth, modes, wedge_samples,
                                   out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numerical() || e.kind() == ErrorKind::Internal ? exit_numerical : exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}
