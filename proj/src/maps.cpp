#include "aa/maps.hpp"

#include <algorithm>
#include <cmath>

namespace aa {

namespace {

using Vec3 = std::array<double, 3>;

constexpr Complex kI{0.0, 1.0};

Vec3 apply(const Jacobian3& J, const Tangent& v) {
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = J[i][0] * v.da + J[i][1] * v.dlambda + J[i][2] * v.dt;
    return out;
}

Vec3 directional_fd(const MapUnderTest& f, const Point& p, const Tangent& dir, double h) {
    auto eval = [&](double tau) {
        const Point q = f(Point(p.a() + tau * dir.da, p.lambda() + tau * dir.dlambda,
                                p.t() + tau * dir.dt));
        return Vec3{q.a(), q.lambda(), q.t()};
    };
    const Vec3 m2 = eval(-2 * h), m1 = eval(-h), p1 = eval(h), p2 = eval(2 * h);
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = (m2[i] - 8 * m1[i] + 8 * p1[i] - p2[i]) / (12 * h);
    return out;
}

// Z g = (V g - i U g) / 2 for a real component g with index i.
Complex Z_of(const FrameDerivatives& d, std::size_t i) { return 0.5 * (d.V[i] - kI * d.U[i]); }
Complex Zbar_of(const FrameDerivatives& d, std::size_t i) { return 0.5 * (d.V[i] + kI * d.U[i]); }

}  // namespace

const char* to_string(DerivativeMethod m) noexcept {
    switch (m) {
        case DerivativeMethod::automatic: return "automatic";
        case DerivativeMethod::analytic: return "analytic";
        case DerivativeMethod::finite_difference: return "finite-difference";
    }
    return "unknown";
}

MapUnderTest::MapUnderTest(std::string name, Forward forward)
    : name_(std::move(name)), forward_(std::move(forward)) {}

MapUnderTest& MapUnderTest::with_jacobian(JacobianFn jac) {
    jacobian_ = std::move(jac);
    return *this;
}

MapUnderTest& MapUnderTest::with_inverse(Forward inverse) {
    inverse_ = std::move(inverse);
    return *this;
}

MapUnderTest& MapUnderTest::with_logcyl_form(LogCylForm form) {
    logcyl_ = std::move(form);
    return *this;
}

Jacobian3 MapUnderTest::jacobian(const Point& p) const {
    if (!jacobian_) throw InvalidParameters(name_ + " has no analytic derivative provider");
    return jacobian_(p);
}

Point MapUnderTest::inverse(const Point& q) const {
    if (!inverse_) throw InvalidParameters(name_ + " has no inverse");
    return inverse_(q);
}

LogCylPoint MapUnderTest::logcyl(const LogCylPoint& q) const {
    if (!logcyl_) throw InvalidParameters(name_ + " has no log-cylindrical form");
    return logcyl_(q);
}

MapUnderTest MapUnderTest::inverse_map() const {
    if (!inverse_) throw InvalidParameters(name_ + " has no inverse");
    MapUnderTest inv(name_ + "^-1", inverse_);
    inv.with_inverse(forward_);
    return inv;
}

FrameDerivatives frame_derivatives(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    if (method == DerivativeMethod::automatic) {
        method = f.has_jacobian() ? DerivativeMethod::analytic : DerivativeMethod::finite_difference;
    }
    const FrameValues frame = frame_at(p);
    FrameDerivatives out;
    out.method = method;
    if (method == DerivativeMethod::analytic) {
        const Jacobian3 J = f.jacobian(p);
        out.U = apply(J, frame.U);
        out.V = apply(J, frame.V);
        out.W = apply(J, frame.W);
        return out;
    }
    const double h = 1e-5 * (1.0 + p.coord_norm());
    out.U = directional_fd(f, p, frame.U, h);
    out.V = directional_fd(f, p, frame.V, h);
    out.W = directional_fd(f, p, frame.W, h);
    return out;
}

DerivativeRecord horizontal_derivatives(const MapUnderTest& f, const Point& p,
                                        DerivativeMethod method,
                                        bool require_orientation_preserving) {
    const FrameDerivatives d = frame_derivatives(f, p, method);
    const Complex U_fI{d.U[1], d.U[2]};
    const Complex V_fI{d.V[1], d.V[2]};
    DerivativeRecord rec{0.5 * (V_fI - kI * U_fI), 0.5 * (V_fI + kI * U_fI), p, d.method};
    if (require_orientation_preserving && !(std::abs(rec.Zf_I) > std::abs(rec.Zbar_f_I))) {
        throw DegenerateDerivative("|Z f_I| = " + std::to_string(std::abs(rec.Zf_I)) +
                                   " does not exceed |Zbar f_I| = " +
                                   std::to_string(std::abs(rec.Zbar_f_I)));
    }
    return rec;
}

Complex beltrami(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const DerivativeRecord d = horizontal_derivatives(f, p, method);
    if (std::abs(d.Zf_I) < 1e-12)
        throw DegenerateDerivative("|Z f_I| below 1e-12, Beltrami coefficient undefined");
    return d.Zbar_f_I / d.Zf_I;
}

double distortion(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const double m = std::abs(beltrami(f, p, method));
    if (m >= 1.0 - 1e-12)
        throw NotQuasiconformalAtPoint("|mu| = " + std::to_string(m));
    return (1.0 + m) / (1.0 - m);
}

double distortion_sq(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const double K = distortion(f, p, method);
    return K * K;
}

double jacobian_mu(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const DerivativeRecord d = horizontal_derivatives(f, p, method);
    const double f2 = f(p).lambda();
    const double num = std::norm(d.Zf_I) - std::norm(d.Zbar_f_I);
    const double den = std::pow(2.0 * f2, 4);
    return num * num / den;
}

double dh_norm(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const DerivativeRecord d = horizontal_derivatives(f, p, method);
    return (std::abs(d.Zf_I) + std::abs(d.Zbar_f_I)) / (2.0 * f(p).lambda());
}

double analytic_qc_ratio(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const double n = dh_norm(f, p, method);
    return n * n * n * n / jacobian_mu(f, p, method);
}

double ContactResidual::max_abs() const noexcept {
    return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

ContactResidual contact_residual(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    const FrameDerivatives d = frame_derivatives(f, p, method);
    const double f2 = f(p).lambda();
    const Complex U_fI{d.U[1], d.U[2]};
    const Complex V_fI{d.V[1], d.V[2]};
    const Complex Z_fI = 0.5 * (V_fI - kI * U_fI);
    const Complex Zb_fI = 0.5 * (V_fI + kI * U_fI);
    ContactResidual r{};
    r.sigma = (std::norm(Z_fI) - std::norm(Zb_fI)) / (4.0 * f2 * f2);
    r.r1 = Z_of(d, 2) - 2.0 * f2 * Z_of(d, 0);
    r.r2 = Zbar_of(d, 2) - 2.0 * f2 * Zbar_of(d, 0);
    r.r3 = d.W[2] - 2.0 * f2 * (r.sigma + d.W[0]);
    return r;
}

Complex msp_indicator(const MapUnderTest& f, const HorizontalCurve& curve, double s,
                      DerivativeMethod method) {
    const Complex v = curve.velocity(s).planar();
    if (std::abs(v) < 1e-14) throw ZeroVelocity("gamma_I'(s) vanishes at s = " + std::to_string(s));
    return beltrami(f, curve.position(s), method) * std::conj(v) / v;
}

double pushforward_speed(const MapUnderTest& f, const HorizontalCurve& curve, double s,
                         DerivativeMethod method) {
    const Point p = curve.position(s);
    const Complex v = curve.velocity(s).planar();
    if (std::abs(v) < 1e-14) throw ZeroVelocity("gamma_I'(s) vanishes at s = " + std::to_string(s));
    const DerivativeRecord d = horizontal_derivatives(f, p, method);
    const Complex image_velocity = (d.Zf_I * v + d.Zbar_f_I * std::conj(v)) / (2.0 * p.lambda());
    return std::abs(image_velocity) / (2.0 * f(p).lambda());
}

StretchBounds stretching_bounds(const MapUnderTest& f, const HorizontalCurve& curve, double s,
                                DerivativeMethod method) {
    const Point p = curve.position(s);
    const DerivativeRecord d = horizontal_derivatives(f, p, method);
    const double two_f2 = 2.0 * f(p).lambda();
    const double speed = curve.speed(s);
    const double a = std::abs(d.Zf_I);
    const double b = std::abs(d.Zbar_f_I);
    return {(a - b) / two_f2 * speed, (a + b) / two_f2 * speed};
}

PointDiagnostic diagnose(const MapUnderTest& f, const Point& p, DerivativeMethod method) {
    return {p, beltrami(f, p, method), distortion(f, p, method), jacobian_mu(f, p, method),
            contact_residual(f, p, method)};
}

}  // namespace aa
