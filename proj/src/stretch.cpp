#include "aa/stretch.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace aa {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 matmul(const Mat3& A, const Mat3& B) {
    Mat3 C{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t l = 0; l < 3; ++l) C[i][j] += A[i][l] * B[l][j];
    return C;
}

// d(a, lambda, t) / d(a, xi, psi) at the cartesian image point p.
Mat3 dphi(const Point& p) {
    return {{{1, 0, 0}, {0, p.lambda(), -p.t()}, {0, p.t(), p.lambda()}}};
}

// d(a, xi, psi) / d(a, lambda, t) at p.
Mat3 dphi_inv(const Point& p) {
    const double r2 = p.lambda() * p.lambda() + p.t() * p.t();
    return {{{1, 0, 0}, {0, p.lambda() / r2, p.t() / r2}, {0, -p.t() / r2, p.lambda() / r2}}};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameters(what);
}

bool within(double x, double lo, double hi, double tol) {
    const double slack = tol * std::max(1.0, hi - lo);
    return x >= lo - slack && x <= hi + slack;
}

double psi_image(double k, double psi) { return std::atan(std::tan(psi) / k); }

// Inverse of psi -> atan(tan(psi)/k).
double psi_preimage(double k, double Psi) { return std::atan(k * std::tan(Psi)); }

// Components joined by the fibers: the s = c and s = d faces of the box.
std::array<BoundaryComponent, 2> fiber_faces(const Foliation& fol,
                                             const std::array<std::string, 2>& names) {
    std::array<BoundaryComponent, 2> out;
    for (std::size_t i = 0; i < 2; ++i) {
        const double s = i == 0 ? fol.s_range.lo : fol.s_range.hi;
        out[i].name = names[i];
        out[i].u = fol.d1;
        out[i].v = fol.d2;
        out[i].param = [map = fol.map, s](double u, double v) { return map(s, u, v); };
        out[i].contains = [fol, s](const Point& p, double tol) {
            const FoliationCoords q = fol.inverse(p);
            return std::abs(q.s - s) <= tol * std::max(1.0, std::abs(s)) &&
                   within(q.d1, fol.d1.lo, fol.d1.hi, tol) && within(q.d2, fol.d2.lo, fol.d2.hi, tol);
        };
    }
    return out;
}

Scenario linear_lt1(double k) {
    Foliation fol;
    fol.name = "linear_lt1";
    fol.s_range = {0.0, 1.0};
    fol.d1 = {0.0, 1.0};
    fol.d2 = {0.5, 1.0};
    fol.map = [](double s, double a, double l) { return Point(a + s / (2 * l), l, s); };
    fol.fiber = [](double a, double l) {
        return HorizontalCurve::cartesian(
            0.0, 1.0, [a, l](double s) { return Point(a + s / (2 * l), l, s); },
            [l](double) { return Tangent{1 / (2 * l), 0, 1}; });
    };
    fol.speed = [](double, double, double l) { return 1 / (2 * l); };
    fol.nu_density = [](double, double l) { return 16 * l * l; };
    fol.inverse = [](const Point& p) {
        return FoliationCoords{p.t(), p.a() - p.t() / (2 * p.lambda()), p.lambda()};
    };

    Scenario sc{ScenarioKind::linear_k_lt_1, k, 0.0, 0.0, fol, Density::zero(), linear_stretch(k),
                {}, {}, {}, {}, 14.0 / 3.0, 14.0 / (3.0 * k * k), 1.0 / k, 1.0, {}, {}};
    sc.in_domain = [fol](const Point& p, double tol) { return fol.contains(p, tol); };
    sc.rho0 = Density([](const Point& p) { return 2 * p.lambda(); },
                      [fol](const Point& p) { return fol.contains(p, 1e-9); });
    sc.in_image = [k](const Point& p, double tol) {
        const double t = p.t() / k;
        const double a = p.a() / k - t / (2 * p.lambda());
        return within(t, 0, 1, tol) && within(p.lambda(), 0.5, 1, tol) && within(a, 0, 1, tol);
    };
    sc.source = fiber_faces(fol, {"dOmega_0", "dOmega_1"});
    for (int i = 0; i < 2; ++i) {
        const double tc = i;
        BoundaryComponent& b = sc.target[i];
        b.name = i == 0 ? "dOmega^k_0" : "dOmega^k_1";
        b.u = fol.d1;
        b.v = fol.d2;
        b.param = [k, tc](double a, double l) { return Point(k * (a + tc / (2 * l)), l, k * tc); };
        b.contains = [k, tc](const Point& p, double tol) {
            const double a = p.a() / k - tc / (2 * p.lambda());
            return std::abs(p.t() - k * tc) <= tol * std::max(1.0, k) && within(a, 0, 1, tol) &&
                   within(p.lambda(), 0.5, 1, tol);
        };
    }
    sc.fiber_distortion = [k](double, double) { return (1 + std::abs((1 - k) / (1 + k))) /
                                                       (1 - std::abs((1 - k) / (1 + k))); };
    sc.fiber_msp = [k](double, double) { return (k - 1) / (1 + k); };
    return sc;
}

Scenario linear_gt1(double k) {
    const double c = 3.0 / std::cbrt(2.0);
    const double c0 = std::pow(2.0, 4.0 / 3.0) / (3.0 * (std::cbrt(2.0) - 1.0));
    Foliation fol;
    fol.name = "linear_gt1";
    fol.s_range = {c, 3.0};
    fol.d1 = {0.0, 1.0};
    fol.d2 = {0.0, 1.0};
    fol.map = [](double s, double a, double t) { return Point(a, s * s * s / 27, t); };
    fol.fiber = [c](double a, double t) {
        return HorizontalCurve::cartesian(
            c, 3.0, [a, t](double s) { return Point(a, s * s * s / 27, t); },
            [](double s) { return Tangent{0, s * s / 9, 0}; });
    };
    fol.speed = [](double s, double, double) { return 3 / (2 * s); };
    fol.nu_density = [](double, double) { return 16.0; };
    fol.inverse = [](const Point& p) {
        return FoliationCoords{3 * std::cbrt(p.lambda()), p.a(), p.t()};
    };

    const double gap = std::cbrt(2.0) - 1.0;
    const double mod = 32.0 / (27.0 * gap * gap * gap);
    Scenario sc{ScenarioKind::linear_k_gt_1, k, 0.0, 0.0, fol, Density::zero(), linear_stretch(k),
                {}, {}, {}, {}, mod, k * k * mod, k, 1.0, {}, {}};
    sc.in_domain = [fol](const Point& p, double tol) { return fol.contains(p, tol); };
    sc.rho0 = Density([c0](const Point& p) { return c0 * std::cbrt(p.lambda()); },
                      [fol](const Point& p) { return fol.contains(p, 1e-9); });
    sc.in_image = [k](const Point& p, double tol) {
        return within(p.a() / k, 0, 1, tol) && within(p.lambda(), 0.5, 1, tol) &&
               within(p.t() / k, 0, 1, tol);
    };
    sc.source = fiber_faces(fol, {"dOmega_1/2", "dOmega_1"});
    for (int i = 0; i < 2; ++i) {
        const double l0 = i == 0 ? 0.5 : 1.0;
        BoundaryComponent& b = sc.target[i];
        b.name = i == 0 ? "dOmega^k_1/2" : "dOmega^k_1";
        b.u = {0.0, 1.0};
        b.v = {0.0, 1.0};
        b.param = [k, l0](double a, double t) { return Point(k * a, l0, k * t); };
        b.contains = [k, l0](const Point& p, double tol) {
            return std::abs(p.lambda() - l0) <= tol && within(p.a() / k, 0, 1, tol) &&
                   within(p.t() / k, 0, 1, tol);
        };
    }
    sc.fiber_distortion = [k](double, double) { return k; };
    sc.fiber_msp = [k](double, double) { return (1 - k) / (1 + k); };
    return sc;
}

Scenario radial(double k, double r0, double psi0) {
    const double L = std::log(r0);
    Foliation fol;
    fol.name = "radial";
    fol.s_range = {0.0, L};
    fol.d1 = {0.0, 1.0};
    fol.d2 = {0.0, psi0};
    fol.map = [](double s, double a, double psi) {
        return from_logcyl(LogCylPoint(a + std::tan(psi) * s / 2, s, psi));
    };
    fol.fiber = [L](double a, double psi) {
        const double tp = std::tan(psi);
        return HorizontalCurve::logcyl(
            0.0, L, [a, psi, tp](double s) { return LogCylPoint(a + tp * s / 2, s, psi); },
            [tp](double) { return LogCylVelocity{tp / 2, 1, 0}; });
    };
    fol.speed = [](double, double, double psi) { return 1 / (2 * std::cos(psi)); };
    fol.nu_density = [](double, double psi) { return 16 * std::cos(psi) * std::cos(psi); };
    fol.inverse = [](const Point& p) {
        const LogCylPoint q = to_logcyl(p);
        return FoliationCoords{q.xi(), q.a() - std::tan(q.psi()) * q.xi() / 2, q.psi()};
    };

    const double two_over_L3 = std::pow(2.0 / L, 3);
    const double mod = two_over_L3 * (psi0 + std::sin(psi0) * std::cos(psi0));
    const double image =
        two_over_L3 / (k * k * k) *
        (k * std::sin(2 * psi0) / (1 + k * k + (k * k - 1) * std::cos(2 * psi0)) +
         std::atan(std::tan(psi0) / k));
    Scenario sc{ScenarioKind::radial, k, r0, psi0, fol, Density::zero(), radial_stretch(k),
                {}, {}, {}, {}, mod, image, 1 / (k * k), L * std::tan(psi0), {}, {}};
    sc.in_domain = [fol](const Point& p, double tol) { return fol.contains(p, tol); };
    sc.rho0 = Density(
        [L](const Point& p) { return 2 * p.lambda() / std::abs(p.planar()) / L; },
        [fol](const Point& p) { return fol.contains(p, 1e-9); });
    // Image coordinates (A, Xi, Psi) pulled back through the set description of D^k.
    auto pullback = [k](const Point& p) {
        const LogCylPoint q = to_logcyl(p);
        const double psi = psi_preimage(k, q.psi());
        const double s = q.xi() / k;
        const double a = q.a() + psi / 2 - q.psi() / 2 - std::tan(psi) * s / 2;
        return FoliationCoords{s, a, psi};
    };
    sc.in_image = [pullback, L, psi0](const Point& p, double tol) {
        const FoliationCoords c = pullback(p);
        return within(c.s, 0, L, tol) && within(c.d1, 0, 1, tol) && within(c.d2, 0, psi0, tol);
    };
    sc.source = fiber_faces(fol, {"E", "F"});
    for (int i = 0; i < 2; ++i) {
        const double s = i == 0 ? 0.0 : L;
        BoundaryComponent& b = sc.target[i];
        b.name = i == 0 ? "E^k" : "F^k";
        b.u = {0.0, 1.0};
        b.v = {0.0, psi0};
        b.param = [k, s](double a, double psi) {
            const double Psi = psi_image(k, psi);
            return from_logcyl(LogCylPoint(a + std::tan(psi) * s / 2 - psi / 2 + Psi / 2, k * s, Psi));
        };
        b.contains = [pullback, s, psi0](const Point& p, double tol) {
            const FoliationCoords c = pullback(p);
            return std::abs(c.s - s) <= tol * std::max(1.0, s) && within(c.d1, 0, 1, tol) &&
                   within(c.d2, 0, psi0, tol);
        };
    }
    sc.fiber_distortion = [k](double, double psi) {
        const double c = std::cos(psi), s = std::sin(psi);
        return 1 / (k * k * c * c + s * s);
    };
    sc.fiber_msp = [k](double, double psi) {
        const double tp = std::tan(psi);
        return (k * k - 1) / (k * k + 2 * tp * tp + 1);
    };
    return sc;
}

// Planar base path of the fiber through (d1, d2) and the chart it lives in.
struct PlanarBase {
    Chart chart;
    std::function<std::array<double, 2>(double)> pos;
    std::function<std::array<double, 2>(double)> vel;
    std::array<double, 2> widths;
};

PlanarBase planar_base(const Scenario& sc, double d2) {
    switch (sc.kind) {
        case ScenarioKind::linear_k_lt_1:
            return {Chart::cartesian, [d2](double s) { return std::array<double, 2>{d2, s}; },
                    [](double) { return std::array<double, 2>{0, 1}; }, {0.5, 1.0}};
        case ScenarioKind::linear_k_gt_1:
            return {Chart::cartesian,
                    [d2](double s) { return std::array<double, 2>{s * s * s / 27, d2}; },
                    [](double s) { return std::array<double, 2>{s * s / 9, 0}; }, {0.5, 1.0}};
        case ScenarioKind::radial:
            return {Chart::logcyl, [d2](double s) { return std::array<double, 2>{s, d2}; },
                    [](double) { return std::array<double, 2>{1, 0}; },
                    {std::log(sc.r0), sc.psi0}};
    }
    throw InvalidParameters("unknown scenario kind");
}

bool stays_inside(const Scenario& sc, const HorizontalCurve& curve, int samples) {
    for (int i = 0; i < samples; ++i) {
        const double s = curve.c() + (curve.d() - curve.c()) * i / (samples - 1);
        if (!sc.in_domain(curve.position(s), 1e-12)) return false;
    }
    return true;
}

}  // namespace

MapUnderTest identity_map() {
    MapUnderTest f("identity", [](const Point& p) { return p; });
    f.with_jacobian([](const Point&) { return Jacobian3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; })
        .with_inverse([](const Point& p) { return p; })
        .with_logcyl_form([](const LogCylPoint& q) { return q; });
    return f;
}

MapUnderTest linear_stretch(double k) {
    require(k > 0 && std::isfinite(k), "linear stretch needs k > 0");
    MapUnderTest f("linear_stretch", [k](const Point& p) { return Point(k * p.a(), p.lambda(), k * p.t()); });
    f.with_jacobian([k](const Point&) { return Jacobian3{{{k, 0, 0}, {0, 1, 0}, {0, 0, k}}}; })
        .with_inverse([k](const Point& p) { return Point(p.a() / k, p.lambda(), p.t() / k); });
    return f;
}

std::pair<double, double> g_k_planar(double k, double xi, double psi) {
    require(k > 0 && std::isfinite(k), "g_k needs k > 0");
    require(std::abs(psi) < std::numbers::pi / 2, "g_k needs |psi| < pi/2");
    return {k * xi, psi_image(k, psi)};
}

MapUnderTest radial_stretch(double k) {
    require(k > 0 && std::isfinite(k), "radial stretch needs k > 0");
    auto tilde = [k](const LogCylPoint& q) {
        const double Psi = psi_image(k, q.psi());
        return LogCylPoint(q.a() - q.psi() / 2 + Psi / 2, k * q.xi(), Psi);
    };
    auto tilde_inv = [k](const LogCylPoint& q) {
        const double psi = psi_preimage(k, q.psi());
        return LogCylPoint(q.a() + psi / 2 - q.psi() / 2, q.xi() / k, psi);
    };
    MapUnderTest f("radial_stretch", [tilde](const Point& p) { return from_logcyl(tilde(to_logcyl(p))); });
    f.with_logcyl_form(tilde)
        .with_inverse([tilde_inv](const Point& p) { return from_logcyl(tilde_inv(to_logcyl(p))); })
        .with_jacobian([k, tilde](const Point& p) {
            const LogCylPoint q = to_logcyl(p);
            const double c = std::cos(q.psi()), s = std::sin(q.psi());
            const double dPsi = k / (k * k * c * c + s * s);
            const Mat3 Dt{{{1, 0, 0.5 * (dPsi - 1)}, {0, k, 0}, {0, 0, dPsi}}};
            return matmul(matmul(dphi(from_logcyl(tilde(q))), Dt), dphi_inv(p));
        });
    return f;
}

Point radial_stretch_cartesian(double k, const Point& p) {
    require(k > 0 && std::isfinite(k), "radial stretch needs k > 0");
    const double l = p.lambda(), t = p.t();
    const double r2 = l * l + t * t;
    const double scale = std::sqrt(std::pow(r2, k) / (l * l * k * k + t * t));
    return Point(p.a() - 0.5 * std::atan(t / l) + 0.5 * std::atan(t / (l * k)), scale * l * k,
                 scale * t);
}

MapUnderTest f_minus_one() {
    auto fwd = [](const Point& p) {
        const double r2 = p.lambda() * p.lambda() + p.t() * p.t();
        return Point(p.a() - std::atan(p.t() / p.lambda()), p.lambda() / r2, -p.t() / r2);
    };
    MapUnderTest f("f_minus_one", fwd);
    f.with_inverse(fwd)
        .with_logcyl_form([](const LogCylPoint& q) { return LogCylPoint(q.a() - q.psi(), -q.xi(), -q.psi()); })
        .with_jacobian([](const Point& p) {
            const double l = p.lambda(), t = p.t();
            const double r2 = l * l + t * t, r4 = r2 * r2;
            return Jacobian3{{{1, t / r2, -l / r2},
                              {0, (t * t - l * l) / r4, -2 * l * t / r4},
                              {0, 2 * l * t / r4, (t * t - l * l) / r4}}};
        });
    return f;
}

const char* to_string(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::linear_k_lt_1: return "linear_lt1";
        case ScenarioKind::linear_k_gt_1: return "linear_gt1";
        case ScenarioKind::radial: return "radial";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    if (name == "linear_lt1" || name == "linear_k_lt_1") return ScenarioKind::linear_k_lt_1;
    if (name == "linear_gt1" || name == "linear_k_gt_1") return ScenarioKind::linear_k_gt_1;
    if (name == "radial") return ScenarioKind::radial;
    throw InvalidParameters("unknown scenario kind '" + std::string(name) + "'");
}

Scenario make_scenario(ScenarioKind kind, double k, double r0, double psi0) {
    require(std::isfinite(k) && k > 0, "k must be a positive finite number");
    switch (kind) {
        case ScenarioKind::linear_k_lt_1:
            require(k <= 1, "linear_lt1 needs 0 < k <= 1");
            return linear_lt1(k);
        case ScenarioKind::linear_k_gt_1:
            require(k >= 1, "linear_gt1 needs k >= 1");
            return linear_gt1(k);
        case ScenarioKind::radial:
            require(k <= 1, "radial needs 0 < k <= 1");
            require(std::isfinite(r0) && r0 > 1, "radial needs r0 > 1");
            require(std::isfinite(psi0) && psi0 > 0 && psi0 <= std::numbers::pi / 2 - 1e-3,
                    "radial needs 0 < psi0 <= pi/2 - 1e-3");
            return radial(k, r0, psi0);
    }
    throw InvalidParameters("unknown scenario kind");
}

void check_connecting_curve(const Scenario& sc, const HorizontalCurve& curve, int samples) {
    require_horizontal(curve);
    if (!stays_inside(sc, curve, samples)) throw InvalidParameters("curve leaves the domain");
    if (!sc.source[0].contains(curve.position(curve.c()), 1e-9) ||
        !sc.source[1].contains(curve.position(curve.d()), 1e-9))
        throw InvalidParameters("curve does not join the boundary components");
}

std::vector<HorizontalCurve> fiber_grid(const Scenario& sc, int m) {
    require(m >= 1, "fiber grid needs m >= 1");
    const Foliation& fol = sc.foliation;
    std::vector<HorizontalCurve> out;
    out.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.push_back(fol.fiber(fol.d1.lo + (i + 0.5) * fol.d1.width() / m,
                                    fol.d2.lo + (j + 0.5) * fol.d2.width() / m));
    return out;
}

std::vector<HorizontalCurve> sample_connecting_family(const Scenario& sc, int n_curves,
                                                      double perturbation, std::uint64_t seed) {
    require(n_curves >= 1, "n_curves must be at least 1");
    require(perturbation >= 0 && std::isfinite(perturbation), "perturbation must be >= 0");
    const Foliation& fol = sc.foliation;
    const double c = fol.s_range.lo, d = fol.s_range.hi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);

    std::vector<HorizontalCurve> out;
    out.reserve(static_cast<std::size_t>(n_curves));
    for (int n = 0; n < n_curves; ++n) {
        const double d1 = fol.d1.lo + unit(rng) * fol.d1.width();
        const double d2 = fol.d2.lo + unit(rng) * fol.d2.width();
        std::array<std::array<double, 3>, 2> cm{};
        for (auto& row : cm)
            for (std::size_t m = 0; m < 3; ++m) row[m] = coef(rng) / static_cast<double>(m + 1);
        if (perturbation == 0.0) {
            out.push_back(fol.fiber(d1, d2));
            continue;
        }
        const PlanarBase base = planar_base(sc, d2);
        double amp = perturbation;
        bool placed = false;
        for (int attempt = 0; attempt < 40 && !placed; ++attempt, amp *= 0.5) {
            auto bump = [c, d, cm](std::size_t i, double s) {
                const double x = std::numbers::pi * (s - c) / (d - c);
                return cm[i][0] * std::sin(x) + cm[i][1] * std::sin(2 * x) + cm[i][2] * std::sin(3 * x);
            };
            auto dbump = [c, d, cm](std::size_t i, double s) {
                const double w = std::numbers::pi / (d - c);
                const double x = w * (s - c);
                return w * (cm[i][0] * std::cos(x) + 2 * cm[i][1] * std::cos(2 * x) +
                            3 * cm[i][2] * std::cos(3 * x));
            };
            const std::array<double, 2> scale{amp * base.widths[0], amp * base.widths[1]};
            PlanarPath path{
                [base, bump, scale](double s) {
                    auto x = base.pos(s);
                    x[0] += scale[0] * bump(0, s);
                    x[1] += scale[1] * bump(1, s);
                    return x;
                },
                [base, dbump, scale](double s) {
                    auto v = base.vel(s);
                    v[0] += scale[0] * dbump(0, s);
                    v[1] += scale[1] * dbump(1, s);
                    return v;
                }};
            // Reject planar paths leaving the chart before lifting.
            bool chart_ok = true;
            for (int i = 0; i <= 256 && chart_ok; ++i) {
                const auto x = path.position(c + (d - c) * i / 256);
                chart_ok = base.chart == Chart::cartesian ? x[0] > 0 : std::abs(x[1]) < std::numbers::pi / 2;
            }
            if (!chart_ok) continue;
            HorizontalCurve curve = lift_planar_path(base.chart, c, d, d1, std::move(path));
            if (!stays_inside(sc, curve, 257)) continue;
            if (!sc.source[1].contains(curve.position(d), 1e-9)) continue;
            out.push_back(std::move(curve));
            placed = true;
        }
        if (!placed)
            throw PerturbationLeavesDomain("no admissible amplitude found for curve " + std::to_string(n));
    }
    return out;
}

}  // namespace aa
