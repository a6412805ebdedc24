#pragma once

// Horizontal curves, line integrals against densities, and foliations of a
// domain by horizontal fibers carrying a fiber measure nu.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>

#include "aa/core.hpp"
#include "aa/quadrature.hpp"

namespace aa {

enum class Chart { cartesian, logcyl };

/// Velocity components (da, dxi, dpsi) in log-cylindrical coordinates.
struct LogCylVelocity {
    double da = 0.0;
    double dxi = 0.0;
    double dpsi = 0.0;
};

class HorizontalCurve {
public:
    using PositionFn = std::function<Point(double)>;
    using VelocityFn = std::function<Tangent(double)>;
    using LogCylPositionFn = std::function<LogCylPoint(double)>;
    using LogCylVelocityFn = std::function<LogCylVelocity(double)>;

    /// Curve given in cartesian coordinates. Without a velocity, a 4th-order
    /// five-point difference with step 1e-5 (d - c) is used.
    static HorizontalCurve cartesian(double c, double d, PositionFn position,
                                     VelocityFn velocity = {});
    static HorizontalCurve logcyl(double c, double d, LogCylPositionFn position,
                                  LogCylVelocityFn velocity = {});

    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] double d() const noexcept { return d_; }
    [[nodiscard]] Chart chart() const noexcept { return chart_; }
    [[nodiscard]] bool has_analytic_velocity() const noexcept;

    [[nodiscard]] Point position(double s) const;
    /// Cartesian velocity components (da, dlambda, dt).
    [[nodiscard]] Tangent velocity(double s) const;

    [[nodiscard]] LogCylPoint logcyl_position(double s) const;
    [[nodiscard]] LogCylVelocity logcyl_velocity(double s) const;

    /// |gamma'(s)|_H, using sqrt(xi'^2 + psi'^2) / (2 cos psi) in the logcyl chart.
    [[nodiscard]] double speed(double s) const;

    /// The same trace run backwards: s -> c + d - s.
    [[nodiscard]] HorizontalCurve reversed() const;

private:
    HorizontalCurve() = default;

    double c_ = 0.0;
    double d_ = 1.0;
    Chart chart_ = Chart::cartesian;
    PositionFn cart_pos_;
    VelocityFn cart_vel_;
    LogCylPositionFn log_pos_;
    LogCylVelocityFn log_vel_;
};

/// Signed horizontality residual t'/(2 lambda) - a' (cartesian) or
/// psi'/2 + tan(psi) xi'/2 - a' (logcyl).
[[nodiscard]] double horizontality_residual(const HorizontalCurve& curve, double s);

/// Throws NonHorizontalCurve if the residual gate fails at any of `samples`
/// equispaced parameters.
void require_horizontal(const HorizontalCurve& curve, int samples = 65);

[[nodiscard]] double horizontal_length(const HorizontalCurve& curve,
                                       const quad::Options& opt = {});

/// Nonnegative Borel density, zero outside its declared support.
class Density {
public:
    using Eval = std::function<double(const Point&)>;
    using Support = std::function<bool(const Point&)>;

    Density(Eval eval, Support support);
    /// Density supported everywhere.
    explicit Density(Eval eval);

    static Density zero();

    [[nodiscard]] double operator()(const Point& p) const;
    [[nodiscard]] bool in_support(const Point& p) const { return support_(p); }

private:
    Eval eval_;
    Support support_;
};

[[nodiscard]] double line_integral(const Density& rho, const HorizontalCurve& curve,
                                   const quad::Options& opt = {});

void write_curve_csv(std::ostream& os, const HorizontalCurve& curve, int samples);

/// A path in the planar factor: (lambda, t) for the cartesian chart or
/// (xi, psi) for the logcyl chart, with its derivative.
struct PlanarPath {
    std::function<std::array<double, 2>(double)> position;
    std::function<std::array<double, 2>(double)> velocity;
};

/// Horizontal lift of a planar path starting at additive coordinate a0: the
/// a-component solves a' = t'/(2 lambda) (cartesian) or
/// a' = psi'/2 + tan(psi) xi'/2 (logcyl), integrated by Gauss-Legendre on a
/// fixed table of 64 subintervals. The velocity is exact.
[[nodiscard]] HorizontalCurve lift_planar_path(Chart chart, double c, double d, double a0,
                                               PlanarPath path);

struct FoliationCoords {
    double s;
    double d1;
    double d2;
};

/// gamma : (c, d) x Delta -> Omega, Delta = d1 x d2 a product of intervals,
/// with d mu(gamma(s, delta)) = |gamma'|_H^4 ds d nu(delta).
struct Foliation {
    std::string name;
    quad::Interval s_range;
    quad::Interval d1;
    quad::Interval d2;
    std::function<HorizontalCurve(double, double)> fiber;
    std::function<Point(double, double, double)> map;
    std::function<double(double, double, double)> speed;
    std::function<double(double, double)> nu_density;
    /// gamma^{-1}; defined on a neighbourhood of the closure of Omega.
    std::function<FoliationCoords(const Point&)> inverse;

    [[nodiscard]] bool contains(const FoliationCoords& q, double tol = 1e-12) const noexcept;
    [[nodiscard]] bool contains(const Point& p, double tol = 1e-12) const;
};

/// Max relative deviation of mu_AA(gamma) |det D gamma| from |gamma'|_H^4 nu
/// over `samples` pseudo-random interior parameters; D gamma by 4th-order
/// central differences.
[[nodiscard]] double foliation_volume_residual(const Foliation& fol, int samples);

}  // namespace aa
