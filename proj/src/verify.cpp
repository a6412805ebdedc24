#include "aa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aa/modulus.hpp"

namespace aa {

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// measured <= threshold passes; slack = threshold - measured.
Check upper(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, threshold - measured, measured <= threshold};
}

// measured >= threshold passes; slack = measured - threshold.
Check lower(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, measured - threshold, measured >= threshold};
}

std::vector<Point> interior_points(const Foliation& fol, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double s = fol.s_range.lo + unit(rng) * fol.s_range.width();
        const double d1 = fol.d1.lo + unit(rng) * fol.d1.width();
        const double d2 = fol.d2.lo + unit(rng) * fol.d2.width();
        pts.push_back(fol.map(s, d1, d2));
    }
    return pts;
}

// Boundary samples that miss their image component, counted in both
// directions.
int boundary_misses(const Scenario& sc, int n, double tol) {
    int misses = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        const BoundaryComponent& src = sc.source[i];
        const BoundaryComponent& dst = sc.target[i];
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const double x = static_cast<double>(a) / (n - 1);
                const double y = static_cast<double>(b) / (n - 1);
                const Point p = src.param(src.u.lo + x * src.u.width(), src.v.lo + y * src.v.width());
                if (!dst.contains(sc.map(p), tol)) ++misses;
                const Point q = dst.param(dst.u.lo + x * dst.u.width(), dst.v.lo + y * dst.v.width());
                if (!src.contains(sc.map.inverse(q), tol)) ++misses;
            }
        }
    }
    return misses;
}

struct FiberSweep {
    double msp_value_err = 0.0;
    double k_value_err = 0.0;
    double pushforward_err = 0.0;
    double unit_integral_err = 0.0;
};

FiberSweep sweep_fibers(const Scenario& sc, int m, int samples) {
    const Foliation& fol = sc.foliation;
    FiberSweep out;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double d1 = fol.d1.lo + (i + 0.5) * fol.d1.width() / m;
            const double d2 = fol.d2.lo + (j + 0.5) * fol.d2.width() / m;
            const HorizontalCurve fiber = fol.fiber(d1, d2);
            for (int n = 0; n < samples; ++n) {
                const double s = fiber.c() + (fiber.d() - fiber.c()) * n / (samples - 1);
                const Point p = fiber.position(s);
                const Complex ind = msp_indicator(sc.map, fiber, s);
                out.msp_value_err = std::max(out.msp_value_err, std::abs(ind - sc.fiber_msp(d1, d2)));
                out.k_value_err = std::max(out.k_value_err,
                                           rel_err(distortion(sc.map, p), sc.fiber_distortion(d1, d2)));
                const StretchBounds b = stretching_bounds(sc.map, fiber, s);
                out.pushforward_err =
                    std::max(out.pushforward_err, std::abs(pushforward_speed(sc.map, fiber, s) - b.lower));
            }
            out.unit_integral_err =
                std::max(out.unit_integral_err, std::abs(line_integral(sc.rho0, fiber) - 1.0));
        }
    }
    return out;
}

void add_value(TheoremReport& r, std::string key, double v) { r.values.emplace_back(std::move(key), v); }

void run_scenario_checks(const Scenario& sc, const VerifyOptions& opt, TheoremReport& rep) {
    const Foliation& fol = sc.foliation;
    quad::Options qopt;
    qopt.rel_tol = 1e-12;

    const ExtremalDensity ext = extremal_density_modulus(fol, qopt);
    add_value(rep, "mod_gamma0", sc.mod_gamma0);
    add_value(rep, "mod_gamma0_quadrature", ext.value);
    add_value(rep, "foliation_volume_residual", ext.volume_residual);
    rep.checks.push_back(upper("modulus_quadrature_vs_closed_form", rel_err(ext.value, sc.mod_gamma0),
                               opt.closed_form_rel_tol));
    const double vol =
        quad::adaptive3([&](double s, double d1, double d2) {
            return std::pow(fol.speed(s, d1, d2), 4) * fol.nu_density(d1, d2);
        }, fol.s_range, fol.d1, fol.d2, qopt).value;
    add_value(rep, "domain_volume", sc.domain_volume);
    rep.checks.push_back(upper("domain_volume", rel_err(vol, sc.domain_volume), opt.closed_form_rel_tol));

    // Contact equations, with the map's own derivative and by differences.
    double res_an = 0.0, res_fd = 0.0;
    for (const Point& p : interior_points(fol, opt.random_points, opt.seed)) {
        res_an = std::max(res_an, contact_residual(sc.map, p, DerivativeMethod::analytic).max_abs());
        res_fd = std::max(res_fd, contact_residual(sc.map, p, DerivativeMethod::finite_difference).max_abs());
    }
    rep.checks.push_back(upper("contact_residual_analytic", res_an, opt.contact_tol));
    rep.checks.push_back(upper("contact_residual_finite_difference", res_fd, opt.contact_tol));

    const FiberChecks fc = check_fibers(sc.map, fol);
    const bool vacuous = fc.msp_max_real == -std::numeric_limits<double>::infinity();
    Check sign{"msp_real_part_negative", vacuous ? 0.0 : fc.msp_max_real, 0.0,
               vacuous ? 0.0 : -fc.msp_max_real, vacuous || fc.msp_max_real < 0.0};
    rep.checks.push_back(sign);
    rep.checks.push_back(upper("msp_imaginary_part", fc.msp_max_imag, opt.msp_imag_tol));
    rep.checks.push_back(upper("distortion_fiber_spread", fc.k_max_spread, opt.fiber_const_tol));

    const FiberSweep sw = sweep_fibers(sc, 5, 9);
    rep.checks.push_back(upper("msp_closed_form", sw.msp_value_err, opt.msp_value_tol));
    rep.checks.push_back(upper("distortion_closed_form", sw.k_value_err, opt.msp_value_tol));
    rep.checks.push_back(upper("pushforward_attains_lower_bound", sw.pushforward_err, opt.msp_value_tol));
    rep.checks.push_back(upper("fiber_integral_unity", sw.unit_integral_err, opt.admissibility_tol));

    const AdmissibilityReport adm = check_admissibility(
        sc.rho0, sample_connecting_family(sc, opt.perturbed_curves, opt.perturbation, opt.seed));
    add_value(rep, "admissibility_min", adm.min_integral);
    rep.checks.push_back(lower("admissibility_perturbed_family", adm.min_integral, 1.0 - opt.admissibility_tol));

    rep.checks.push_back(
        upper("boundary_correspondence_misses", boundary_misses(sc, opt.boundary_samples, opt.boundary_tol), 0.0));

    const double md = mean_distortion(sc.map, sc.rho0, fol, qopt);
    const double im = image_family_modulus(sc.map, fol, qopt);
    add_value(rep, "mean_distortion", md);
    add_value(rep, "image_family_modulus", im);
    add_value(rep, "mod_image_closed_form", sc.mod_image);
    add_value(rep, "max_distortion", sc.max_distortion);
    rep.checks.push_back(upper("mean_distortion_vs_image_modulus", rel_err(md, im), opt.identity_rel_tol));
    rep.checks.push_back(upper("image_modulus_vs_closed_form", rel_err(im, sc.mod_image), opt.identity_rel_tol));

    const QuasiInvarianceReport qi = quasi_invariance_check(sc.max_distortion, ext.value, im);
    const double qi_tol = opt.quasi_invariance_slack * std::max(1.0, im);
    rep.checks.push_back({"quasi_invariance_lower", im, qi.lower, qi.lower_slack, qi.lower_slack >= -qi_tol});
    rep.checks.push_back({"quasi_invariance_upper", im, qi.upper, qi.upper_slack, qi.upper_slack >= -qi_tol});

    // Admissible densities dominating rho0 cannot beat the image modulus.
    const Density scaled([rho = sc.rho0](const Point& p) { return 1.25 * rho(p); },
                         [rho = sc.rho0](const Point& p) { return rho.in_support(p); });
    const Density bumped(
        [rho = sc.rho0, fol](const Point& p) {
            const FoliationCoords q = fol.inverse(p);
            const double x = (q.s - fol.s_range.lo) / fol.s_range.width() - 0.5;
            const double y = (q.d1 - fol.d1.lo) / fol.d1.width() - 0.5;
            const double z = (q.d2 - fol.d2.lo) / fol.d2.width() - 0.5;
            return rho(p) * (1.0 + 0.5 * std::exp(-8.0 * (x * x + y * y + z * z)));
        },
        [rho = sc.rho0](const Point& p) { return rho.in_support(p); });
    double battery_slack = std::numeric_limits<double>::infinity();
    for (const Density* rho : {&sc.rho0, &scaled, &bumped})
        battery_slack = std::min(battery_slack, mean_distortion(sc.map, *rho, fol, qopt) - im);
    rep.checks.push_back(lower("density_battery_slack", battery_slack, -opt.quasi_invariance_slack));
}

}  // namespace

VerifyOptions VerifyOptions::fast() {
    VerifyOptions o;
    o.random_points = 200;
    o.perturbed_curves = 100;
    o.boundary_samples = 9;
    return o;
}

bool TheoremReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double TheoremReport::value(const std::string& key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    throw InvalidParameters("report has no value '" + key + "'");
}

TheoremReport verify_linear(double k, ScenarioKind kind, const VerifyOptions& opt) {
    if (kind == ScenarioKind::radial) throw InvalidParameters("verify_linear needs a linear scenario kind");
    const Scenario sc = make_scenario(kind, k);
    TheoremReport rep;
    rep.theorem = "linear_stretch_extremality";
    rep.kind = kind;
    rep.k = k;
    run_scenario_checks(sc, opt, rep);
    const double KsqMod = sc.max_distortion * sc.max_distortion * sc.mod_gamma0;
    add_value(rep, "K_f_sq_times_mod_gamma0", KsqMod);
    rep.checks.push_back(upper("mean_distortion_vs_K_f_sq_mod",
                               rel_err(rep.value("mean_distortion"), KsqMod), opt.identity_rel_tol));
    return rep;
}

TheoremReport verify_radial(double k, double r0, double psi0, const VerifyOptions& opt) {
    const Scenario sc = make_scenario(ScenarioKind::radial, k, r0, psi0);
    TheoremReport rep;
    rep.theorem = "radial_stretch_extremality";
    rep.kind = ScenarioKind::radial;
    rep.k = k;
    rep.r0 = r0;
    rep.psi0 = psi0;
    run_scenario_checks(sc, opt, rep);
    const double direct = radial_image_modulus_quadrature(k, r0, psi0);
    add_value(rep, "image_modulus_direct_quadrature", direct);
    rep.checks.push_back(upper("image_modulus_direct_quadrature",
                               rel_err(rep.value("image_family_modulus"), direct), opt.identity_rel_tol));
    return rep;
}

double open_question_h(double k, double psi0) {
    return std::pow(k, 1.5) * std::sin(2 * psi0) / (1 + k * k + (k * k - 1) * std::cos(2 * psi0)) +
           std::sqrt(k) * std::atan(std::tan(psi0) / k);
}

double radial_image_modulus_closed(double k, double r0, double psi0) {
    const double L = std::log(r0);
    return std::pow(2.0 / L, 3) / (k * k * k) *
           (k * std::sin(2 * psi0) / (1 + k * k + (k * k - 1) * std::cos(2 * psi0)) +
            std::atan(std::tan(psi0) / k));
}

double radial_image_modulus_quadrature(double k, double r0, double psi0) {
    const double L = std::log(r0);
    quad::Options opt;
    opt.rel_tol = 1e-13;
    const double I = quad::adaptive(
                         [k](double psi) {
                             const double c = std::cos(psi), s = std::sin(psi);
                             const double den = k * k * c * c + s * s;
                             return c * c / (den * den);
                         },
                         {0.0, psi0}, opt)
                         .value;
    return 16.0 / (L * L * L) * I;
}

bool OQReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

OQReport open_question_report(double k, double r0, double psi0) {
    if (!(k > 0 && k < 1)) throw InvalidParameters("open question report needs 0 < k < 1");
    if (!(r0 > 1) || !std::isfinite(r0)) throw InvalidParameters("open question report needs r0 > 1");
    if (!(psi0 > 0 && psi0 < std::numbers::pi / 2))
        throw InvalidParameters("open question report needs 0 < psi0 < pi/2");
    OQReport r;
    r.k = k;
    r.r0 = r0;
    r.psi0 = psi0;
    const double L = std::log(r0);
    r.mod_gamma = std::pow(2.0 / L, 3) * (psi0 + std::sin(psi0) * std::cos(psi0));
    r.mod_image = radial_image_modulus_closed(k, r0, psi0);
    r.mod_image_quadrature = radial_image_modulus_quadrature(k, r0, psi0);
    r.ratio = r.mod_image / r.mod_gamma;
    r.bound = std::pow(k, -3.5);
    r.k_f_sq = std::pow(k, -4.0);
    r.inequality_regime = psi0 > std::numbers::pi / 4;
    r.h_bound = psi0 + std::sin(psi0) * std::cos(psi0);
    r.monotone_min_diff = std::numeric_limits<double>::infinity();
    double prev = open_question_h(0.01, psi0);
    r.h_max = prev;
    for (int i = 2; i <= r.monotone_grid; ++i) {
        const double h = open_question_h(0.01 * i, psi0);
        r.monotone_min_diff = std::min(r.monotone_min_diff, h - prev);
        r.h_max = std::max(r.h_max, h);
        prev = h;
    }
    r.checks.push_back(upper("image_modulus_closed_vs_quadrature",
                             rel_err(r.mod_image, r.mod_image_quadrature), 1e-8));
    Check strict{"k_pow_minus_7_2_below_K_f_sq", r.k_f_sq - r.bound, 0.0, r.k_f_sq - r.bound,
                 r.k_f_sq - r.bound > 0.0};
    r.checks.push_back(strict);
    // h is not monotone for small psi0; the chain below is only claimed for psi0 > pi/4.
    if (r.inequality_regime) {
        r.checks.push_back(lower("ratio_below_k_pow_minus_7_2", r.bound - r.ratio, -1e-12 * r.bound));
        Check mono{"h_monotone_increasing", r.monotone_min_diff, 0.0, r.monotone_min_diff,
                   r.monotone_min_diff > 0.0};
        r.checks.push_back(mono);
        r.checks.push_back(lower("h_upper_bound", r.h_bound - r.h_max, -1e-12));
    }
    return r;
}

std::vector<std::pair<double, double>> radial_distortion_profile(double k, double psi0, int samples) {
    if (samples < 2) throw InvalidParameters("profile needs at least 2 samples");
    const MapUnderTest f = radial_stretch(k);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double psi = psi0 * i / (samples - 1);
        out.emplace_back(psi, distortion(f, from_logcyl(LogCylPoint(0.0, 0.5, psi))));
    }
    return out;
}

}  // namespace aa
