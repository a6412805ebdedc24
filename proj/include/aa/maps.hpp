#pragma once

// Smooth self-maps of the group and their horizontal calculus: Z f_I and
// Zbar f_I, Beltrami coefficient, distortion quotient, volume derivative,
// contact residuals and the minimal-stretching indicator along curves.

#include <array>
#include <functional>
#include <string>

#include "aa/core.hpp"
#include "aa/curves.hpp"

namespace aa {

/// J[i][j] = d f_i / d x_j with f = (f1, f2, f3) and x = (a, lambda, t).
using Jacobian3 = std::array<std::array<double, 3>, 3>;

enum class DerivativeMethod { automatic, analytic, finite_difference };

[[nodiscard]] const char* to_string(DerivativeMethod m) noexcept;

class MapUnderTest {
public:
    using Forward = std::function<Point(const Point&)>;
    using JacobianFn = std::function<Jacobian3(const Point&)>;
    using LogCylForm = std::function<LogCylPoint(const LogCylPoint&)>;

    MapUnderTest(std::string name, Forward forward);

    MapUnderTest& with_jacobian(JacobianFn jac);
    MapUnderTest& with_inverse(Forward inverse);
    MapUnderTest& with_logcyl_form(LogCylForm form);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] Point operator()(const Point& p) const { return forward_(p); }

    [[nodiscard]] bool has_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
    [[nodiscard]] bool has_inverse() const noexcept { return static_cast<bool>(inverse_); }
    [[nodiscard]] bool has_logcyl_form() const noexcept { return static_cast<bool>(logcyl_); }

    [[nodiscard]] Jacobian3 jacobian(const Point& p) const;
    [[nodiscard]] Point inverse(const Point& q) const;
    [[nodiscard]] LogCylPoint logcyl(const LogCylPoint& q) const;

    /// The inverse as a map in its own right (no analytic derivatives).
    [[nodiscard]] MapUnderTest inverse_map() const;

private:
    std::string name_;
    Forward forward_;
    JacobianFn jacobian_;
    Forward inverse_;
    LogCylForm logcyl_;
};

/// Derivatives of (f1, f2, f3) along the frame vectors U(p), V(p), W(p).
struct FrameDerivatives {
    std::array<double, 3> U{};
    std::array<double, 3> V{};
    std::array<double, 3> W{};
    DerivativeMethod method = DerivativeMethod::analytic;
};

/// Analytic derivatives come from the map's Jacobian; the finite-difference
/// path uses a 4th-order central stencil with step 1e-5 (1 + |p|) along the
/// straight line through p in the direction of each frame vector.
[[nodiscard]] FrameDerivatives frame_derivatives(const MapUnderTest& f, const Point& p,
                                                 DerivativeMethod method = DerivativeMethod::automatic);

struct DerivativeRecord {
    Complex Zf_I;
    Complex Zbar_f_I;
    Point at;
    DerivativeMethod method;
};

/// Z f_I = (V f_I - i U f_I) / 2 and Zbar f_I = (V f_I + i U f_I) / 2.
/// With require_orientation_preserving, |Z f_I| <= |Zbar f_I| raises
/// DegenerateDerivative.
[[nodiscard]] DerivativeRecord horizontal_derivatives(
    const MapUnderTest& f, const Point& p, DerivativeMethod method = DerivativeMethod::automatic,
    bool require_orientation_preserving = false);

[[nodiscard]] Complex beltrami(const MapUnderTest& f, const Point& p,
                               DerivativeMethod method = DerivativeMethod::automatic);

/// K = (1 + |mu|) / (1 - |mu|); NotQuasiconformalAtPoint once |mu| >= 1 - 1e-12.
[[nodiscard]] double distortion(const MapUnderTest& f, const Point& p,
                                DerivativeMethod method = DerivativeMethod::automatic);
[[nodiscard]] double distortion_sq(const MapUnderTest& f, const Point& p,
                                   DerivativeMethod method = DerivativeMethod::automatic);

/// Volume derivative (|Z f_I|^2 - |Zbar f_I|^2)^2 / (2 f2)^4.
[[nodiscard]] double jacobian_mu(const MapUnderTest& f, const Point& p,
                                 DerivativeMethod method = DerivativeMethod::automatic);

/// ||D_H f|| = (|Z f_I| + |Zbar f_I|) / (2 f2).
[[nodiscard]] double dh_norm(const MapUnderTest& f, const Point& p,
                             DerivativeMethod method = DerivativeMethod::automatic);

/// ||D_H f||^4 / J_mu; equals K^2 for contact maps.
[[nodiscard]] double analytic_qc_ratio(const MapUnderTest& f, const Point& p,
                                       DerivativeMethod method = DerivativeMethod::automatic);

struct ContactResidual {
    Complex r1;    // Z f3 - 2 f2 Z f1
    Complex r2;    // Zbar f3 - 2 f2 Zbar f1
    double r3;     // W f3 - 2 f2 (sigma + W f1)
    double sigma;  // (|Z f_I|^2 - |Zbar f_I|^2) / (4 f2^2)

    [[nodiscard]] double max_abs() const noexcept;
};

[[nodiscard]] ContactResidual contact_residual(const MapUnderTest& f, const Point& p,
                                               DerivativeMethod method = DerivativeMethod::automatic);

/// mu_f(gamma(s)) * conj(gamma_I'(s)) / gamma_I'(s). Real and negative on
/// fibers along which f stretches least.
[[nodiscard]] Complex msp_indicator(const MapUnderTest& f, const HorizontalCurve& curve, double s,
                                    DerivativeMethod method = DerivativeMethod::automatic);

/// |(f o gamma)'(s)|_H from the chain rule
/// (f_I o gamma)' = (Z f_I gamma_I' + Zbar f_I conj(gamma_I')) / (2 lambda).
[[nodiscard]] double pushforward_speed(const MapUnderTest& f, const HorizontalCurve& curve, double s,
                                       DerivativeMethod method = DerivativeMethod::automatic);

struct StretchBounds {
    double lower;
    double upper;
};

/// ((|Z f_I| -+ |Zbar f_I|) / (2 f2)) |gamma'(s)|_H.
[[nodiscard]] StretchBounds stretching_bounds(const MapUnderTest& f, const HorizontalCurve& curve,
                                              double s,
                                              DerivativeMethod method = DerivativeMethod::automatic);

/// Per-point record for diagnostic reports.
struct PointDiagnostic {
    Point p;
    Complex mu;
    double K;
    double J;
    ContactResidual residuals;
};

[[nodiscard]] PointDiagnostic diagnose(const MapUnderTest& f, const Point& p,
                                       DerivativeMethod method = DerivativeMethod::automatic);

}  // namespace aa
