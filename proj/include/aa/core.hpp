#pragma once

// Group arithmetic, left-invariant frames, contact form, Haar density and the
// cylindrical-logarithmic chart of the affine-additive group R x H.
//
// Points are stored in cartesian coordinates (a, lambda, t) where lambda + i t
// lies in the right half-plane. Every formula divides by lambda, so lambda > 0
// is checked at construction.

#include <array>
#include <complex>
#include <numbers>

#include "aa/errors.hpp"

namespace aa {

using Complex = std::complex<double>;

class Point {
public:
    Point(double a, double lambda, double t);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double t() const noexcept { return t_; }

    /// lambda + i t, the half-plane component.
    [[nodiscard]] Complex planar() const noexcept { return {lambda_, t_}; }

    /// Euclidean norm of the coordinate triple; used for step scaling.
    [[nodiscard]] double coord_norm() const noexcept;

private:
    double a_;
    double lambda_;
    double t_;
};

/// (a, xi, psi) with Phi(a, xi, psi) = (a, e^{xi + i psi}), |psi| < pi/2.
class LogCylPoint {
public:
    LogCylPoint(double a, double xi, double psi);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double xi() const noexcept { return xi_; }
    [[nodiscard]] double psi() const noexcept { return psi_; }

private:
    double a_;
    double xi_;
    double psi_;
};

/// Tangent vector components in the coordinate basis (d/da, d/dlambda, d/dt).
struct Tangent {
    double da = 0.0;
    double dlambda = 0.0;
    double dt = 0.0;

    [[nodiscard]] double norm() const noexcept;
    /// dlambda + i dt, the planar part of the velocity.
    [[nodiscard]] Complex planar() const noexcept { return {dlambda, dt}; }
};

Tangent operator*(double s, const Tangent& v) noexcept;
Tangent operator+(const Tangent& u, const Tangent& v) noexcept;

struct FrameValues {
    Tangent U;
    Tangent V;
    Tangent W;
};

/// Tolerance of the horizontality gate: |theta(v)| <= kHorizontalTol * (1 + |v|).
inline constexpr double kHorizontalTol = 1e-9;

[[nodiscard]] Point identity() noexcept;

/// (a', l' + i t') * (a, l + i t) = (a' + a, l'(l + i t) + i t').
[[nodiscard]] Point group_mul(const Point& p, const Point& q);
[[nodiscard]] Point group_inv(const Point& p);

/// theta = dt / (2 lambda) - da evaluated on v at p.
[[nodiscard]] double contact_form_eval(const Point& p, const Tangent& v) noexcept;

/// U = d_a + 2 lambda d_t, V = 2 lambda d_lambda, W = -d_a.
[[nodiscard]] FrameValues frame_at(const Point& p) noexcept;

[[nodiscard]] bool is_horizontal(const Point& p, const Tangent& v) noexcept;

/// Sub-Riemannian norm sqrt(dl^2 + dt^2) / (2 lambda) of a horizontal tangent.
/// Throws NonHorizontalTangent if v fails the horizontality gate.
[[nodiscard]] double horizontal_norm(const Point& p, const Tangent& v);

/// Density 1 / lambda^2 of the left Haar measure against da dlambda dt.
[[nodiscard]] double haar_density(const Point& p) noexcept;

[[nodiscard]] LogCylPoint to_logcyl(const Point& p);
[[nodiscard]] Point from_logcyl(const LogCylPoint& q);

/// det D Phi = e^{2 xi}.
[[nodiscard]] double logcyl_jacobian_det(const LogCylPoint& q) noexcept;

/// Push a logcyl velocity (da, dxi, dpsi) at q forward to cartesian components.
[[nodiscard]] Tangent logcyl_velocity_to_cartesian(const LogCylPoint& q, double da, double dxi,
                                                   double dpsi) noexcept;

}  // namespace aa
