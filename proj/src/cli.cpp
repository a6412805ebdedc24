#include "aa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "aa/json_io.hpp"
#include "aa/modulus.hpp"
#include "aa/stretch.hpp"
#include "aa/verify.hpp"

namespace aa::cli {

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string scenario;
    std::optional<double> k;
    std::optional<double> r0;
    std::optional<double> psi0;
    std::optional<int> grid;
    std::optional<int> curves;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string out;
    std::string tol_profile = "strict";
};

struct Resolved {
    ScenarioKind kind;
    double k;
    double r0;
    double psi0;
    int grid;
    int curves;
    std::uint64_t seed;
    VerifyOptions tol;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

double default_k(ScenarioKind kind) { return kind == ScenarioKind::linear_k_gt_1 ? 3.0 : 0.5; }

VerifyOptions profile(const std::string& name) {
    if (name == "strict") return VerifyOptions::strict();
    if (name == "fast") return VerifyOptions::fast();
    throw UsageError("unknown tolerance profile '" + name + "'");
}

Resolved resolve(const CommonArgs& a, int default_grid, int default_curves) {
    if (a.scenario.empty()) throw UsageError("--scenario is required");
    const VerifyOptions base = profile(a.tol_profile);
    ScenarioConfig cfg;
    bool is_kind = true;
    try {
        cfg.kind = parse_scenario_kind(a.scenario);
        cfg.tolerances = base;
    } catch (const InvalidParameters&) {
        is_kind = false;
    }
    if (!is_kind) {
        if (!std::filesystem::exists(a.scenario))
            throw UsageError("--scenario '" + a.scenario + "' is neither a scenario kind nor a file");
        try {
            cfg = load_scenario_config(a.scenario, base);
        } catch (const InvalidParameters& e) {
            throw UsageError(e.what());
        }
    }
    Resolved r{cfg.kind,
               a.k.value_or(cfg.k.value_or(default_k(cfg.kind))),
               a.r0.value_or(cfg.r0.value_or(std::numbers::e)),
               a.psi0.value_or(cfg.psi0.value_or(std::numbers::pi / 4)),
               a.grid.value_or(cfg.grid.value_or(default_grid)),
               a.curves.value_or(cfg.curves.value_or(default_curves)),
               a.seed.value_or(cfg.seed.value_or(1)),
               cfg.tolerances};
    r.tol.seed = r.seed;
    if (r.grid < 1) throw UsageError("--grid must be positive");
    if (r.curves < 1) throw UsageError("--curves must be positive");
    return r;
}

Scenario build_scenario(const Resolved& r) {
    try {
        return make_scenario(r.kind, r.k, r.r0, r.psi0);
    } catch (const InvalidParameters& e) {
        throw UsageError(e.what());
    }
}

void add_common(CLI::App* sub, CommonArgs& a, bool with_scenario) {
    if (with_scenario) sub->add_option("--scenario", a.scenario, "scenario kind or JSON config path");
    sub->add_option("--k", a.k, "stretch factor");
    sub->add_option("--r0", a.r0, "outer radius (radial)");
    sub->add_option("--psi0", a.psi0, "angular half-width (radial)");
    sub->add_option("--grid", a.grid, "grid size");
    sub->add_option("--curves", a.curves, "number of curves");
    sub->add_option("--seed", a.seed, "perturbation RNG seed");
    sub->add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", a.out, "output path (default stdout)");
    sub->add_option("--tol-profile", a.tol_profile, "strict or fast")->check(CLI::IsMember({"strict", "fast"}));
}

void emit(const CommonArgs& a, const std::string& text, std::ostream& out) {
    if (a.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + a.out + "'");
    f << text;
}

json scenario_json(const Resolved& r) {
    json j = {{"scenario", to_string(r.kind)}, {"k", r.k}};
    if (r.kind == ScenarioKind::radial) {
        j["r0"] = r.r0;
        j["psi0"] = r.psi0;
    }
    return j;
}

Check within(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, threshold - measured, measured <= threshold};
}

bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json checks_json(const std::vector<Check>& checks) {
    json arr = json::array();
    for (const Check& c : checks) arr.push_back(to_json(c));
    return arr;
}

int cmd_modulus(const CommonArgs& a, std::ostream& out) {
    const Resolved r = resolve(a, 32, 500);
    const Scenario sc = build_scenario(r);
    const Foliation& fol = sc.foliation;
    quad::Options qopt;
    qopt.rel_tol = 1e-12;
    const ExtremalDensity ext = extremal_density_modulus(fol, qopt);

    const int m = std::min(r.grid, static_cast<int>(std::floor(std::sqrt(static_cast<double>(r.curves)))));
    std::vector<HorizontalCurve> curves = fiber_grid(sc, m);
    if (r.curves > m * m) {
        auto extra = sample_connecting_family(sc, r.curves - m * m, r.tol.perturbation, r.seed);
        curves.insert(curves.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
    }
    const ModulusProblem pb = ModulusProblem::build(fol, curves, {r.grid, m, m});
    const ModulusResult res = discrete_modulus(pb);
    const double rel = std::abs(res.value - sc.mod_gamma0) / sc.mod_gamma0;

    std::vector<Check> checks{
        within("quadrature_vs_closed_form", std::abs(ext.value - sc.mod_gamma0) / sc.mod_gamma0,
               r.tol.closed_form_rel_tol),
        within("discrete_vs_closed_form", rel, 0.05),
        within("discrete_max_violation", res.max_violation, 1e-9),
    };
    const bool ok = all_passed(checks);
    if (a.format == "csv") {
        std::ostringstream os;
        os << "scenario,k,r0,psi0,grid,curves,closed_form,quadrature,discrete,lower_bound,relative_error,"
              "iterations,converged,max_violation,passed\n";
        os.precision(17);
        os << to_string(r.kind) << ',' << r.k << ',' << r.r0 << ',' << r.psi0 << ',' << r.grid << ','
           << curves.size() << ',' << sc.mod_gamma0 << ',' << ext.value << ',' << res.value << ','
           << res.lower_bound << ',' << rel << ',' << res.iterations << ','
           << (res.converged ? "true" : "false") << ',' << res.max_violation << ','
           << (ok ? "true" : "false") << '\n';
        emit(a, os.str(), out);
    } else {
        json j = scenario_json(r);
        j["schema"] = kJsonSchema;
        j["report"] = "modulus";
        j["closed_form"] = sc.mod_gamma0;
        j["quadrature"] = ext.value;
        j["discrete"] = to_json(res);
        j["relative_error"] = rel;
        j["seed"] = r.seed;
        j["checks"] = checks_json(checks);
        j["passed"] = ok;
        emit(a, dump_json(j), out);
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_distortion(const CommonArgs& a, std::ostream& out) {
    const Resolved r = resolve(a, 8, 1);
    const Scenario sc = build_scenario(r);
    const Foliation& fol = sc.foliation;
    const int n = r.grid;
    double worst = 0.0;
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "s,d1,d2,a,lambda,t,mu_re,mu_im,K,K_expected,J\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                const double s = fol.s_range.lo + (i + 0.5) * fol.s_range.width() / n;
                const double d1 = fol.d1.lo + (j + 0.5) * fol.d1.width() / n;
                const double d2 = fol.d2.lo + (l + 0.5) * fol.d2.width() / n;
                const Point p = fol.map(s, d1, d2);
                const PointDiagnostic d = diagnose(sc.map, p);
                const double expected = sc.fiber_distortion(d1, d2);
                worst = std::max(worst, std::abs(d.K - expected) / expected);
                if (a.format == "csv") {
                    csv << s << ',' << d1 << ',' << d2 << ',' << p.a() << ',' << p.lambda() << ','
                        << p.t() << ',' << d.mu.real() << ',' << d.mu.imag() << ',' << d.K << ','
                        << expected << ',' << d.J << '\n';
                } else {
                    rows.push_back({{"s", s}, {"d1", d1}, {"d2", d2}, {"point", {p.a(), p.lambda(), p.t()}},
                                    {"mu", {d.mu.real(), d.mu.imag()}}, {"K", d.K},
                                    {"K_expected", expected}, {"J", d.J},
                                    {"contact_residual", d.residuals.max_abs()}});
                }
            }
        }
    }
    std::vector<Check> checks{within("distortion_closed_form", worst, r.tol.msp_value_tol)};
    if (a.format == "csv") {
        emit(a, csv.str(), out);
    } else {
        json j = scenario_json(r);
        j["schema"] = kJsonSchema;
        j["report"] = "distortion";
        j["grid"] = n;
        j["max_distortion"] = sc.max_distortion;
        j["points"] = rows;
        j["checks"] = checks_json(checks);
        j["passed"] = all_passed(checks);
        emit(a, dump_json(j), out);
    }
    return all_passed(checks) ? kExitOk : kExitCheckFailed;
}

int cmd_msp(const CommonArgs& a, std::ostream& out) {
    const Resolved r = resolve(a, 4, 1);
    const Scenario sc = build_scenario(r);
    const Foliation& fol = sc.foliation;
    const int m = r.grid;
    constexpr int kSamples = 17;
    double max_real = -std::numeric_limits<double>::infinity(), max_imag = 0.0, max_gap = 0.0;
    json traces = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "fiber,d1,d2,s,indicator_re,indicator_im,expected,pushforward_speed,lower_bound\n";
    int fiber_id = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j, ++fiber_id) {
            const double d1 = fol.d1.lo + (i + 0.5) * fol.d1.width() / m;
            const double d2 = fol.d2.lo + (j + 0.5) * fol.d2.width() / m;
            const HorizontalCurve fiber = fol.fiber(d1, d2);
            json samples = json::array();
            for (int n = 0; n < kSamples; ++n) {
                const double s = fiber.c() + (fiber.d() - fiber.c()) * n / (kSamples - 1);
                const Complex ind = msp_indicator(sc.map, fiber, s);
                const double push = pushforward_speed(sc.map, fiber, s);
                const double lo = stretching_bounds(sc.map, fiber, s).lower;
                if (std::abs(ind) > 1e-14) max_real = std::max(max_real, ind.real());
                max_imag = std::max(max_imag, std::abs(ind.imag()));
                max_gap = std::max(max_gap, std::abs(push - lo));
                if (a.format == "csv") {
                    csv << fiber_id << ',' << d1 << ',' << d2 << ',' << s << ',' << ind.real() << ','
                        << ind.imag() << ',' << sc.fiber_msp(d1, d2) << ',' << push << ',' << lo << '\n';
                } else {
                    samples.push_back({{"s", s}, {"indicator", {ind.real(), ind.imag()}},
                                       {"pushforward_speed", push}, {"lower_bound", lo}});
                }
            }
            if (a.format != "csv")
                traces.push_back({{"d1", d1}, {"d2", d2}, {"expected", sc.fiber_msp(d1, d2)}, {"samples", samples}});
        }
    }
    const bool vacuous = max_real == -std::numeric_limits<double>::infinity();
    std::vector<Check> checks{
        {"msp_real_part_negative", vacuous ? 0.0 : max_real, 0.0, vacuous ? 0.0 : -max_real,
         vacuous || max_real < 0.0},
        within("msp_imaginary_part", max_imag, r.tol.msp_imag_tol),
        within("pushforward_attains_lower_bound", max_gap, r.tol.msp_value_tol)};
    if (a.format == "csv") {
        emit(a, csv.str(), out);
    } else {
        json j = scenario_json(r);
        j["schema"] = kJsonSchema;
        j["report"] = "msp";
        j["fibers"] = traces;
        j["checks"] = checks_json(checks);
        j["passed"] = all_passed(checks);
        emit(a, dump_json(j), out);
    }
    return all_passed(checks) ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const CommonArgs& a, std::ostream& out) {
    const Resolved r = resolve(a, 32, 1000);
    VerifyOptions opt = r.tol;
    if (a.curves) opt.perturbed_curves = *a.curves;
    (void)build_scenario(r);  // parameter validation as a usage error
    const TheoremReport rep = r.kind == ScenarioKind::radial ? verify_radial(r.k, r.r0, r.psi0, opt)
                                                             : verify_linear(r.k, r.kind, opt);
    if (a.format == "csv") {
        std::ostringstream os;
        write_checks_csv(os, rep.checks);
        emit(a, os.str(), out);
    } else {
        json j = to_json(rep);
        j["seed"] = r.seed;
        emit(a, dump_json(j), out);
    }
    return rep.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_open_question(const CommonArgs& a, std::ostream& out) {
    const double k = a.k.value_or(0.5);
    const double r0 = a.r0.value_or(std::numbers::e);
    const double psi0 = a.psi0.value_or(std::numbers::pi / 3);
    OQReport rep;
    try {
        rep = open_question_report(k, r0, psi0);
    } catch (const InvalidParameters& e) {
        throw UsageError(e.what());
    }
    std::vector<double> psis{std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3,
                             5 * std::numbers::pi / 12, psi0};
    std::sort(psis.begin(), psis.end());
    psis.erase(std::unique(psis.begin(), psis.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               psis.end());
    const int kSamples = a.grid.value_or(19);
    if (kSamples < 1) throw UsageError("--grid must be positive");
    std::vector<OQReport> sweep;
    for (double p : psis)
        for (int i = 1; i <= kSamples; ++i) sweep.push_back(open_question_report(static_cast<double>(i) / (kSamples + 1), r0, p));

    if (a.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "k,r0,psi0,mod_gamma,mod_image,ratio,bound_k_pow_minus_7_2,K_f_sq,inequality_regime,passed\n";
        for (const OQReport& s : sweep)
            os << s.k << ',' << s.r0 << ',' << s.psi0 << ',' << s.mod_gamma << ',' << s.mod_image << ','
               << s.ratio << ',' << s.bound << ',' << s.k_f_sq << ',' << (s.inequality_regime ? "true" : "false")
               << ',' << (s.passed() ? "true" : "false") << '\n';
        emit(a, os.str(), out);
    } else {
        json j = to_json(rep);
        json rows = json::array();
        for (const OQReport& s : sweep)
            rows.push_back({{"k", s.k}, {"psi0", s.psi0}, {"ratio", s.ratio}, {"bound", s.bound},
                            {"K_f_sq", s.k_f_sq}, {"inequality_regime", s.inequality_regime},
                            {"passed", s.passed()}});
        j["sweep"] = rows;
        json profile = json::array();
        for (const auto& [psi, K] : radial_distortion_profile(k, psi0, 33)) profile.push_back({psi, K});
        j["distortion_profile"] = profile;
        emit(a, dump_json(j), out);
    }
    return rep.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stretch maps and 4-modulus computations on the affine-additive group", "aastretch"};
    app.require_subcommand(1);
    CommonArgs args;
    auto* mod = app.add_subcommand("modulus", "closed-form, quadrature and discrete modulus of a scenario");
    auto* dist = app.add_subcommand("distortion", "pointwise mu, K and J over a grid");
    auto* msp = app.add_subcommand("msp", "minimal-stretching indicator along fibers");
    auto* ver = app.add_subcommand("verify", "full theorem report for a scenario");
    auto* oq = app.add_subcommand("open-question", "ratio and monotonicity sweep for the radial stretch");
    for (auto* sub : {mod, dist, msp, ver}) add_common(sub, args, true);
    add_common(oq, args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (mod->parsed()) return cmd_modulus(args, out);
        if (dist->parsed()) return cmd_distortion(args, out);
        if (msp->parsed()) return cmd_msp(args, out);
        if (ver->parsed()) return cmd_verify(args, out);
        return cmd_open_question(args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace aa::cli
