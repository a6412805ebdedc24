#pragma once

// Scenario drivers. Each report lists named checks with the measured value,
// the threshold it is compared against and the signed slack (>= 0 passes).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aa/stretch.hpp"

namespace aa {

struct Check {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    double slack = 0.0;
    bool passed = false;
};

/// Pass/fail thresholds and sample sizes; the strict profile is the default.
struct VerifyOptions {
    int random_points = 1000;
    int perturbed_curves = 1000;
    double perturbation = 0.3;
    std::uint64_t seed = 1;
    double contact_tol = 1e-8;
    double msp_imag_tol = 1e-10;
    double msp_value_tol = 1e-9;
    double fiber_const_tol = 1e-10;
    double admissibility_tol = 1e-8;
    double closed_form_rel_tol = 1e-10;
    double identity_rel_tol = 1e-8;
    double boundary_tol = 1e-9;
    double quasi_invariance_slack = 1e-9;
    int boundary_samples = 33;  // per side of the parameter rectangle

    static VerifyOptions strict() { return {}; }
    static VerifyOptions fast();
};

struct TheoremReport {
    std::string theorem;
    ScenarioKind kind = ScenarioKind::radial;
    double k = 1.0;
    double r0 = 0.0;
    double psi0 = 0.0;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> values;

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] double value(const std::string& key) const;
};

/// Contact residuals, MSP on fibers, fiber constancy of K, admissibility of
/// rho0 over a perturbed connecting family, boundary correspondence, the
/// mean-distortion identity and the quasi-invariance bounds.
[[nodiscard]] TheoremReport verify_linear(double k, ScenarioKind kind,
                                          const VerifyOptions& opt = VerifyOptions::strict());

/// As verify_linear, plus the image-family modulus against its closed form
/// and against a direct quadrature of the fiber integral.
[[nodiscard]] TheoremReport verify_radial(double k, double r0, double psi0,
                                          const VerifyOptions& opt = VerifyOptions::strict());

/// k^{3/2} sin(2 psi0) / (1 + k^2 + (k^2 - 1) cos(2 psi0)) + k^{1/2} atan(tan(psi0) / k).
[[nodiscard]] double open_question_h(double k, double psi0);

/// Mod of the image of the radial family through the closed form in k and psi0.
[[nodiscard]] double radial_image_modulus_closed(double k, double r0, double psi0);

/// 16 / (log r0)^3 int_0^psi0 cos^2 / (k^2 cos^2 + sin^2)^2 by quadrature.
[[nodiscard]] double radial_image_modulus_quadrature(double k, double r0, double psi0);

struct OQReport {
    double k = 0.0;
    double r0 = 0.0;
    double psi0 = 0.0;
    double mod_gamma = 0.0;
    double mod_image = 0.0;
    double mod_image_quadrature = 0.0;
    double ratio = 0.0;
    double bound = 0.0;      // k^{-7/2}
    double k_f_sq = 0.0;     // k^{-4}
    bool inequality_regime = false;  // psi0 in (pi/4, pi/2)
    int monotone_grid = 99;
    double monotone_min_diff = 0.0;
    double h_max = 0.0;
    double h_bound = 0.0;    // psi0 + sin psi0 cos psi0
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const noexcept;
};

/// Requires 0 < k < 1, r0 > 1, 0 < psi0 < pi/2; throws InvalidParameters.
/// The ratio bound, monotonicity and h upper-bound checks are only emitted
/// for psi0 in (pi/4, pi/2); outside it the measured values are still filled.
[[nodiscard]] OQReport open_question_report(double k, double r0, double psi0);

/// (psi, K) samples of the radial stretch on [0, psi0].
[[nodiscard]] std::vector<std::pair<double, double>> radial_distortion_profile(double k, double psi0,
                                                                                int samples);

}  // namespace aa
