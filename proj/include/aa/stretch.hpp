#pragma once

// Catalog of stretch maps and the three model scenarios: domain, image
// domain, boundary components, foliation by fibers, extremal density and the
// closed-form values the numerical engines are checked against.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aa/core.hpp"
#include "aa/curves.hpp"
#include "aa/maps.hpp"

namespace aa {

[[nodiscard]] MapUnderTest identity_map();

/// (a, lambda, t) -> (k a, lambda, k t).
[[nodiscard]] MapUnderTest linear_stretch(double k);

/// Contact lift of g_k; logcyl form
/// (a, xi, psi) -> (a - psi/2 + atan(tan(psi)/k)/2, k xi, atan(tan(psi)/k)).
[[nodiscard]] MapUnderTest radial_stretch(double k);

/// The radial stretch evaluated through its closed cartesian expression.
[[nodiscard]] Point radial_stretch_cartesian(double k, const Point& p);

/// (xi, psi) -> (k xi, atan(tan(psi)/k)).
[[nodiscard]] std::pair<double, double> g_k_planar(double k, double xi, double psi);

/// Conformal contactomorphism (a, z) -> (a - arg z, 1/z); logcyl form
/// (a, xi, psi) -> (a - psi, -xi, -psi). It is an involution.
[[nodiscard]] MapUnderTest f_minus_one();

enum class ScenarioKind { linear_k_lt_1, linear_k_gt_1, radial };

[[nodiscard]] const char* to_string(ScenarioKind kind) noexcept;

/// Accepts "linear_lt1", "linear_gt1", "radial" and the long forms
/// "linear_k_lt_1", "linear_k_gt_1". Throws InvalidParameters otherwise.
[[nodiscard]] ScenarioKind parse_scenario_kind(std::string_view name);

/// A boundary component parametrised over a rectangle.
struct BoundaryComponent {
    std::string name;
    quad::Interval u;
    quad::Interval v;
    std::function<Point(double, double)> param;
    std::function<bool(const Point&, double)> contains;
};

struct Scenario {
    ScenarioKind kind;
    double k;
    double r0;    // radial only
    double psi0;  // radial only

    Foliation foliation;
    Density rho0;
    MapUnderTest map;

    std::function<bool(const Point&, double)> in_domain;
    std::function<bool(const Point&, double)> in_image;

    /// Components joined by the fibers (s = c face first) and their images.
    std::array<BoundaryComponent, 2> source;
    std::array<BoundaryComponent, 2> target;

    /// Closed forms.
    double mod_gamma0;
    double mod_image;
    double max_distortion;  // K_f
    double domain_volume;   // Haar volume of the domain
    /// Pointwise distortion on the fiber through (d1, d2).
    std::function<double(double, double)> fiber_distortion;
    /// Expected value of the minimal-stretching indicator on that fiber.
    std::function<double(double, double)> fiber_msp;
};

/// Parameter ranges: linear_k_lt_1 needs 0 < k <= 1, linear_k_gt_1 needs
/// k >= 1, radial needs 0 < k <= 1, r0 > 1 and 0 < psi0 <= pi/2 - 1e-3.
/// Throws InvalidParameters.
[[nodiscard]] Scenario make_scenario(ScenarioKind kind, double k, double r0 = std::numbers::e,
                                     double psi0 = std::numbers::pi / 4);

/// n_curves horizontal curves joining source[0] to source[1] inside the
/// domain. Each starts from the fiber through a uniformly drawn interior
/// parameter; for perturbation > 0 the planar path is displaced by
/// sinusoidal bumps vanishing at both ends, with amplitude halved until the
/// curve stays in the domain. Throws PerturbationLeavesDomain.
[[nodiscard]] std::vector<HorizontalCurve> sample_connecting_family(const Scenario& sc,
                                                                    int n_curves,
                                                                    double perturbation,
                                                                    std::uint64_t seed = 0);

/// Fibers through the centres of an m x m grid on the fiber parameter box.
[[nodiscard]] std::vector<HorizontalCurve> fiber_grid(const Scenario& sc, int m);

/// Throws NonHorizontalCurve or InvalidParameters if the curve is not
/// horizontal, leaves the domain or misses one of the source components.
void check_connecting_curve(const Scenario& sc, const HorizontalCurve& curve, int samples = 257);

}  // namespace aa
