#include "aa/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <memory>
#include <random>
#include <vector>

namespace aa {

namespace {

using Vec3 = std::array<double, 3>;

// Five-point 4th-order derivative; falls back to one-sided stencils within
// two steps of an interval end so the position is never sampled outside [c, d].
template <class F>
Vec3 derivative5(const F& f, double s, double c, double d) {
    const double h = 1e-5 * (d - c);
    auto combine = [](const std::array<Vec3, 5>& v, const std::array<double, 5>& w, double scale) {
        Vec3 out{};
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t k = 0; k < 3; ++k) out[k] += w[i] * v[i][k];
        for (auto& x : out) x /= scale;
        return out;
    };
    if (s - 2 * h >= c && s + 2 * h <= d) {
        return combine({f(s - 2 * h), f(s - h), f(s), f(s + h), f(s + 2 * h)}, {1, -8, 0, 8, -1},
                       12 * h);
    }
    const double step = (s - 2 * h < c) ? h : -h;
    return combine({f(s), f(s + step), f(s + 2 * step), f(s + 3 * step), f(s + 4 * step)},
                   {-25, 48, -36, 16, -3}, 12 * step);
}

}  // namespace

HorizontalCurve HorizontalCurve::cartesian(double c, double d, PositionFn position,
                                           VelocityFn velocity) {
    if (!(c < d) || !std::isfinite(c) || !std::isfinite(d))
        throw InvalidParameters("curve interval must satisfy c < d");
    HorizontalCurve curve;
    curve.c_ = c;
    curve.d_ = d;
    curve.chart_ = Chart::cartesian;
    curve.cart_pos_ = std::move(position);
    curve.cart_vel_ = std::move(velocity);
    return curve;
}

HorizontalCurve HorizontalCurve::logcyl(double c, double d, LogCylPositionFn position,
                                        LogCylVelocityFn velocity) {
    if (!(c < d) || !std::isfinite(c) || !std::isfinite(d))
        throw InvalidParameters("curve interval must satisfy c < d");
    HorizontalCurve curve;
    curve.c_ = c;
    curve.d_ = d;
    curve.chart_ = Chart::logcyl;
    curve.log_pos_ = std::move(position);
    curve.log_vel_ = std::move(velocity);
    return curve;
}

bool HorizontalCurve::has_analytic_velocity() const noexcept {
    return chart_ == Chart::cartesian ? static_cast<bool>(cart_vel_) : static_cast<bool>(log_vel_);
}

Point HorizontalCurve::position(double s) const {
    if (chart_ == Chart::cartesian) return cart_pos_(s);
    return from_logcyl(log_pos_(s));
}

LogCylPoint HorizontalCurve::logcyl_position(double s) const {
    if (chart_ == Chart::logcyl) return log_pos_(s);
    return to_logcyl(cart_pos_(s));
}

Tangent HorizontalCurve::velocity(double s) const {
    if (chart_ == Chart::cartesian) {
        if (cart_vel_) return cart_vel_(s);
        const Vec3 v = derivative5(
            [this](double x) {
                const Point p = cart_pos_(x);
                return Vec3{p.a(), p.lambda(), p.t()};
            },
            s, c_, d_);
        return {v[0], v[1], v[2]};
    }
    const LogCylVelocity w = logcyl_velocity(s);
    return logcyl_velocity_to_cartesian(log_pos_(s), w.da, w.dxi, w.dpsi);
}

LogCylVelocity HorizontalCurve::logcyl_velocity(double s) const {
    if (chart_ == Chart::logcyl) {
        if (log_vel_) return log_vel_(s);
        const Vec3 v = derivative5(
            [this](double x) {
                const LogCylPoint q = log_pos_(x);
                return Vec3{q.a(), q.xi(), q.psi()};
            },
            s, c_, d_);
        return {v[0], v[1], v[2]};
    }
    // Pull the cartesian velocity back through D Phi^{-1}.
    const Point p = position(s);
    const Tangent v = velocity(s);
    const double r2 = p.lambda() * p.lambda() + p.t() * p.t();
    return {v.da, (p.lambda() * v.dlambda + p.t() * v.dt) / r2,
            (p.lambda() * v.dt - p.t() * v.dlambda) / r2};
}

double HorizontalCurve::speed(double s) const {
    if (chart_ == Chart::logcyl) {
        const LogCylPoint q = log_pos_(s);
        const LogCylVelocity w = logcyl_velocity(s);
        return std::hypot(w.dxi, w.dpsi) / (2.0 * std::cos(q.psi()));
    }
    const Point p = position(s);
    const Tangent v = velocity(s);
    return std::hypot(v.dlambda, v.dt) / (2.0 * p.lambda());
}

HorizontalCurve HorizontalCurve::reversed() const {
    const double sum = c_ + d_;
    if (chart_ == Chart::cartesian) {
        VelocityFn vel;
        if (cart_vel_) {
            vel = [f = cart_vel_, sum](double s) { return -1.0 * f(sum - s); };
        }
        return cartesian(c_, d_, [f = cart_pos_, sum](double s) { return f(sum - s); }, vel);
    }
    LogCylVelocityFn vel;
    if (log_vel_) {
        vel = [f = log_vel_, sum](double s) {
            const LogCylVelocity w = f(sum - s);
            return LogCylVelocity{-w.da, -w.dxi, -w.dpsi};
        };
    }
    return logcyl(c_, d_, [f = log_pos_, sum](double s) { return f(sum - s); }, vel);
}

double horizontality_residual(const HorizontalCurve& curve, double s) {
    if (curve.chart() == Chart::logcyl) {
        const LogCylPoint q = curve.logcyl_position(s);
        const LogCylVelocity w = curve.logcyl_velocity(s);
        return 0.5 * w.dpsi + 0.5 * std::tan(q.psi()) * w.dxi - w.da;
    }
    return contact_form_eval(curve.position(s), curve.velocity(s));
}

void require_horizontal(const HorizontalCurve& curve, int samples) {
    for (int i = 0; i < samples; ++i) {
        const double s = curve.c() + (curve.d() - curve.c()) * i / (samples - 1);
        const double res = horizontality_residual(curve, s);
        double scale = 0.0;
        if (curve.chart() == Chart::logcyl) {
            const LogCylVelocity w = curve.logcyl_velocity(s);
            scale = std::sqrt(w.da * w.da + w.dxi * w.dxi + w.dpsi * w.dpsi);
        } else {
            scale = curve.velocity(s).norm();
        }
        if (!(std::abs(res) <= kHorizontalTol * (1.0 + scale))) {
            throw NonHorizontalCurve("residual " + std::to_string(res) + " at s = " +
                                     std::to_string(s));
        }
    }
}

double horizontal_length(const HorizontalCurve& curve, const quad::Options& opt) {
    require_horizontal(curve);
    return quad::adaptive([&](double s) { return curve.speed(s); }, {curve.c(), curve.d()}, opt)
        .value;
}

Density::Density(Eval eval, Support support)
    : eval_(std::move(eval)), support_(std::move(support)) {}

Density::Density(Eval eval) : Density(std::move(eval), [](const Point&) { return true; }) {}

Density Density::zero() {
    return Density([](const Point&) { return 0.0; }, [](const Point&) { return false; });
}

double Density::operator()(const Point& p) const {
    if (!support_(p)) return 0.0;
    const double v = eval_(p);
    if (!(v >= 0.0)) throw InvalidDensity("density value " + std::to_string(v) + " is negative");
    return v;
}

double line_integral(const Density& rho, const HorizontalCurve& curve, const quad::Options& opt) {
    require_horizontal(curve);
    return quad::adaptive([&](double s) { return rho(curve.position(s)) * curve.speed(s); },
                          {curve.c(), curve.d()}, opt)
        .value;
}

void write_curve_csv(std::ostream& os, const HorizontalCurve& curve, int samples) {
    os << "s,a,lambda,t\n";
    const auto old_prec = os.precision(17);
    for (int i = 0; i < samples; ++i) {
        const double s = curve.c() + (curve.d() - curve.c()) * i / std::max(1, samples - 1);
        const Point p = curve.position(s);
        os << s << ',' << p.a() << ',' << p.lambda() << ',' << p.t() << '\n';
    }
    os.precision(old_prec);
}

bool Foliation::contains(const FoliationCoords& q, double tol) const noexcept {
    auto in = [tol](double x, const quad::Interval& iv) {
        const double slack = tol * std::max(1.0, iv.width());
        return x >= iv.lo - slack && x <= iv.hi + slack;
    };
    return in(q.s, s_range) && in(q.d1, d1) && in(q.d2, d2);
}

bool Foliation::contains(const Point& p, double tol) const { return contains(inverse(p), tol); }

double foliation_volume_residual(const Foliation& fol, int samples) {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    const std::array<quad::Interval, 3> box{fol.s_range, fol.d1, fol.d2};
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        std::array<double, 3> x{};
        for (std::size_t k = 0; k < 3; ++k) x[k] = box[k].lo + unit(rng) * box[k].width();
        std::array<Vec3, 3> jac{};  // jac[k] = d gamma / d x_k
        for (std::size_t k = 0; k < 3; ++k) {
            const double h = 1e-4 * box[k].width();
            auto eval = [&](double off) {
                std::array<double, 3> y = x;
                y[k] += off;
                const Point p = fol.map(y[0], y[1], y[2]);
                return Vec3{p.a(), p.lambda(), p.t()};
            };
            const Vec3 m2 = eval(-2 * h), m1 = eval(-h), p1 = eval(h), p2 = eval(2 * h);
            for (std::size_t i = 0; i < 3; ++i)
                jac[k][i] = (m2[i] - 8 * m1[i] + 8 * p1[i] - p2[i]) / (12 * h);
        }
        const double det = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1]) -
                           jac[1][0] * (jac[0][1] * jac[2][2] - jac[0][2] * jac[2][1]) +
                           jac[2][0] * (jac[0][1] * jac[1][2] - jac[0][2] * jac[1][1]);
        const double lhs = haar_density(fol.map(x[0], x[1], x[2])) * std::abs(det);
        const double sp = fol.speed(x[0], x[1], x[2]);
        const double rhs = sp * sp * sp * sp * fol.nu_density(x[1], x[2]);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return worst;
}

namespace {

struct LiftTable {
    Chart chart;
    double c;
    double d;
    PlanarPath path;
    std::vector<double> knots;
    std::vector<double> a_at_knot;

    [[nodiscard]] double a_rate(double s) const {
        const auto x = path.position(s);
        const auto v = path.velocity(s);
        if (chart == Chart::cartesian) return v[1] / (2.0 * x[0]);
        return 0.5 * v[1] + 0.5 * std::tan(x[1]) * v[0];
    }

    [[nodiscard]] double a_at(double s) const {
        const double h = (d - c) / (static_cast<double>(knots.size()) - 1);
        auto j = static_cast<std::size_t>(std::clamp((s - c) / h, 0.0,
                                                     static_cast<double>(knots.size() - 1)));
        if (j == knots.size() - 1 && j > 0 && s < knots[j]) --j;
        if (s == knots[j]) return a_at_knot[j];
        return a_at_knot[j] + quad::composite([this](double x) { return a_rate(x); },
                                              {knots[j], s}, 1);
    }
};

}  // namespace

HorizontalCurve lift_planar_path(Chart chart, double c, double d, double a0, PlanarPath path) {
    constexpr std::size_t kSub = 64;
    auto table = std::make_shared<LiftTable>();
    table->chart = chart;
    table->c = c;
    table->d = d;
    table->path = std::move(path);
    table->knots.resize(kSub + 1);
    table->a_at_knot.resize(kSub + 1);
    for (std::size_t j = 0; j <= kSub; ++j) table->knots[j] = c + (d - c) * j / kSub;
    table->a_at_knot[0] = a0;
    for (std::size_t j = 1; j <= kSub; ++j) {
        table->a_at_knot[j] =
            table->a_at_knot[j - 1] +
            quad::composite([&t = *table](double x) { return t.a_rate(x); },
                            {table->knots[j - 1], table->knots[j]}, 1);
    }
    if (chart == Chart::cartesian) {
        return HorizontalCurve::cartesian(
            c, d,
            [table](double s) {
                const auto x = table->path.position(s);
                return Point(table->a_at(s), x[0], x[1]);
            },
            [table](double s) {
                const auto v = table->path.velocity(s);
                return Tangent{table->a_rate(s), v[0], v[1]};
            });
    }
    return HorizontalCurve::logcyl(
        c, d,
        [table](double s) {
            const auto x = table->path.position(s);
            return LogCylPoint(table->a_at(s), x[0], x[1]);
        },
        [table](double s) {
            const auto v = table->path.velocity(s);
            return LogCylVelocity{table->a_rate(s), v[0], v[1]};
        });
}

}  // namespace aa
