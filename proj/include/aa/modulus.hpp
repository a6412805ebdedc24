#pragma once

// 4-modulus engine: extremal density of a foliation, admissibility checks,
// the discrete convex modulus solver, the mean distortion functional and the
// image-family modulus of a map with the minimal stretching property.

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "aa/curves.hpp"
#include "aa/maps.hpp"
#include "aa/quadrature.hpp"

namespace aa {

struct ExtremalDensity {
    Density rho;
    double value;            // (d - c)^{-3} * nu(Delta)
    double volume_residual;  // from foliation_volume_residual
};

/// rho0(p) = 1 / ((d - c) |gamma'(gamma^{-1}(p))|_H) on the foliated domain.
/// Throws FoliationInvalid if the measure identity fails by more than 1e-6.
[[nodiscard]] ExtremalDensity extremal_density_modulus(const Foliation& fol,
                                                       const quad::Options& opt = {});

struct AdmissibilityReport {
    double min_integral = 0.0;
    double max_integral = 0.0;
    std::size_t argmin = 0;
    std::size_t n_curves = 0;
    bool passed = false;
};

inline constexpr double kAdmissibilityTol = 1e-8;

/// Passes iff every line integral is at least 1 - kAdmissibilityTol.
[[nodiscard]] AdmissibilityReport check_admissibility(const Density& rho,
                                                      const std::vector<HorizontalCurve>& curves,
                                                      const quad::Options& opt = {});

/// Tensor grid in foliation coordinates: n_s cells along s, n1 x n2 on Delta.
struct GridSpec {
    int n_s;
    int n1;
    int n2;
};

/// min sum_c w_c rho_c^4 subject to A rho >= 1, rho >= 0, with A stored by
/// rows: rows[g] lists (cell, length of curve g inside the cell).
struct ModulusProblem {
    std::vector<double> cell_measure;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    double domain_volume = 0.0;
    GridSpec grid{0, 0, 0};

    /// Cells from `grid`, measures by a 5-point Gauss rule per cell, curves cut
    /// into max(256, 8 n_s) equal parameter steps assigned to cells by
    /// midpoint with length |gamma'(mid)|_H ds.
    static ModulusProblem build(const Foliation& fol, const std::vector<HorizontalCurve>& curves,
                                GridSpec grid);

    /// Throws InvalidProblem unless measures are positive, every curve has
    /// positive length and, when domain_volume > 0, the measures sum to it
    /// within 1e-6 relative.
    void validate() const;
};

struct SolverOptions {
    int max_iterations = 50000;
    int window = 200;          // stall window for the relative objective test
    double rel_change = 1e-6;  // over `window` iterations
    double max_violation = 1e-9;
};

struct ModulusResult {
    double value = 0.0;        // objective of the rescaled feasible density
    double lower_bound = 0.0;  // best dual value
    std::vector<double> density;
    double worst_slack = 0.0;  // min_g (A rho)_g - 1 after rescaling
    double max_violation = 0.0;
    int iterations = 0;
    bool converged = false;
    GridSpec grid{0, 0, 0};
    std::size_t n_curves = 0;
};

/// Projected ascent with Polyak steps on the Lagrangian dual. For multipliers
/// y >= 0 the primal minimiser is rho_c = ((A^T y)_c / (4 w_c))^{1/3}; every
/// iterate is rescaled by 1 / min(A rho) to give a feasible density, whose
/// objective is the upper bound reported as `value`.
[[nodiscard]] ModulusResult discrete_modulus(const ModulusProblem& problem,
                                             const SolverOptions& opt = {});

/// int K(p, f)^2 rho(p)^4 d mu over the foliated domain, integrated in
/// foliation coordinates where d mu = |gamma'|_H^4 ds d nu.
[[nodiscard]] double mean_distortion(const MapUnderTest& f, const Density& rho,
                                     const Foliation& fol, const quad::Options& opt = {});

struct FiberChecks {
    double msp_max_real = 0.0;   // largest Re of the indicator where mu != 0
    double msp_max_imag = 0.0;   // largest |Im| of the indicator
    double k_max_spread = 0.0;   // largest max - min of K along one fiber
    int fibers = 0;
    int samples_per_fiber = 0;
};

/// MSP indicator and distortion samples on an m x m grid of fibers.
[[nodiscard]] FiberChecks check_fibers(const MapUnderTest& f, const Foliation& fol, int m = 7,
                                       int samples_per_fiber = 17);

inline constexpr double kMspImagTol = 1e-10;
inline constexpr double kFiberConstTol = 1e-10;

/// (d - c)^{-3} int_Delta K(delta)^2 d nu(delta). Throws MSPViolated or
/// DistortionNotFiberConstant if check_fibers fails.
[[nodiscard]] double image_family_modulus(const MapUnderTest& f, const Foliation& fol,
                                          const quad::Options& opt = {});

struct QuasiInvarianceReport {
    double lower;  // mod / K^2
    double upper;  // K^2 mod
    double value;  // mod of the image family
    double lower_slack;
    double upper_slack;
    bool passed;
};

/// K^{-2} mod <= mod_image <= K^2 mod with 1e-9 relative slack.
[[nodiscard]] QuasiInvarianceReport quasi_invariance_check(double max_distortion, double mod,
                                                           double mod_image);

}  // namespace aa
