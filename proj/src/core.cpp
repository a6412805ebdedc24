#include "aa/core.hpp"

#include <cmath>
#include <string>

namespace aa {

Point::Point(double a, double lambda, double t) : a_(a), lambda_(lambda), t_(t) {
    if (!(lambda > 0.0) || !std::isfinite(lambda) || !std::isfinite(a) || !std::isfinite(t)) {
        throw InvalidPoint("lambda must be positive and coordinates finite, got (" +
                           std::to_string(a) + ", " + std::to_string(lambda) + ", " +
                           std::to_string(t) + ")");
    }
}

double Point::coord_norm() const noexcept {
    return std::sqrt(a_ * a_ + lambda_ * lambda_ + t_ * t_);
}

LogCylPoint::LogCylPoint(double a, double xi, double psi) : a_(a), xi_(xi), psi_(psi) {
    if (!(std::abs(psi) < std::numbers::pi / 2) || !std::isfinite(a) || !std::isfinite(xi)) {
        throw InvalidPoint("log-cylindrical angle must satisfy |psi| < pi/2, got psi = " +
                           std::to_string(psi));
    }
}

double Tangent::norm() const noexcept {
    return std::sqrt(da * da + dlambda * dlambda + dt * dt);
}

Tangent operator*(double s, const Tangent& v) noexcept {
    return {s * v.da, s * v.dlambda, s * v.dt};
}

Tangent operator+(const Tangent& u, const Tangent& v) noexcept {
    return {u.da + v.da, u.dlambda + v.dlambda, u.dt + v.dt};
}

Point identity() noexcept { return Point(0.0, 1.0, 0.0); }

Point group_mul(const Point& p, const Point& q) {
    return Point(p.a() + q.a(), p.lambda() * q.lambda(), p.lambda() * q.t() + p.t());
}

Point group_inv(const Point& p) {
    return Point(-p.a(), 1.0 / p.lambda(), -p.t() / p.lambda());
}

double contact_form_eval(const Point& p, const Tangent& v) noexcept {
    return v.dt / (2.0 * p.lambda()) - v.da;
}

FrameValues frame_at(const Point& p) noexcept {
    const double two_l = 2.0 * p.lambda();
    return {{1.0, 0.0, two_l}, {0.0, two_l, 0.0}, {-1.0, 0.0, 0.0}};
}

bool is_horizontal(const Point& p, const Tangent& v) noexcept {
    return std::abs(contact_form_eval(p, v)) <= kHorizontalTol * (1.0 + v.norm());
}

double horizontal_norm(const Point& p, const Tangent& v) {
    if (!is_horizontal(p, v)) {
        throw NonHorizontalTangent("contact form residual " +
                                   std::to_string(contact_form_eval(p, v)));
    }
    return std::hypot(v.dlambda, v.dt) / (2.0 * p.lambda());
}

double haar_density(const Point& p) noexcept { return 1.0 / (p.lambda() * p.lambda()); }

LogCylPoint to_logcyl(const Point& p) {
    const double l = p.lambda();
    const double t = p.t();
    return LogCylPoint(p.a(), 0.5 * std::log(l * l + t * t), std::atan(t / l));
}

Point from_logcyl(const LogCylPoint& q) {
    const double r = std::exp(q.xi());
    return Point(q.a(), r * std::cos(q.psi()), r * std::sin(q.psi()));
}

double logcyl_jacobian_det(const LogCylPoint& q) noexcept { return std::exp(2.0 * q.xi()); }

Tangent logcyl_velocity_to_cartesian(const LogCylPoint& q, double da, double dxi,
                                     double dpsi) noexcept {
    const double r = std::exp(q.xi());
    const double l = r * std::cos(q.psi());
    const double t = r * std::sin(q.psi());
    return {da, l * dxi - t * dpsi, t * dxi + l * dpsi};
}

}  // namespace aa
