#include "aa/modulus.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace aa {

namespace {

struct Rule5 {
    std::array<double, 5> x;
    std::array<double, 5> w;
};

const Rule5& gauss5() {
    static const Rule5 rule = [] {
        using gauss = boost::math::quadrature::gauss<double, 5>;
        const auto& x = gauss::abscissa();  // 0 first, then the positive nodes
        const auto& w = gauss::weights();
        return Rule5{{-x[2], -x[1], x[0], x[1], x[2]}, {w[2], w[1], w[0], w[1], w[2]}};
    }();
    return rule;
}

double pow4(double x) {
    const double x2 = x * x;
    return x2 * x2;
}

int cell_of(double x, const quad::Interval& iv, int n) {
    const double slack = 1e-9 * std::max(1.0, iv.width());
    if (x < iv.lo - slack || x > iv.hi + slack) return -1;
    const int i = static_cast<int>(std::floor((x - iv.lo) / iv.width() * n));
    return std::clamp(i, 0, n - 1);
}

}  // namespace

ExtremalDensity extremal_density_modulus(const Foliation& fol, const quad::Options& opt) {
    const double residual = foliation_volume_residual(fol, 64);
    if (!(residual <= 1e-6))
        throw FoliationInvalid(fol.name + ": volume identity residual " + std::to_string(residual));
    const double len = fol.s_range.width();
    const double nu = quad::adaptive2([&](double d1, double d2) { return fol.nu_density(d1, d2); },
                                      fol.d1, fol.d2, opt)
                          .value;
    Density rho(
        [fol, len](const Point& p) {
            const FoliationCoords q = fol.inverse(p);
            return 1.0 / (len * fol.speed(q.s, q.d1, q.d2));
        },
        [fol](const Point& p) { return fol.contains(p, 1e-9); });
    return {rho, nu / (len * len * len), residual};
}

AdmissibilityReport check_admissibility(const Density& rho, const std::vector<HorizontalCurve>& curves,
                                        const quad::Options& opt) {
    AdmissibilityReport rep;
    rep.n_curves = curves.size();
    rep.min_integral = std::numeric_limits<double>::infinity();
    rep.max_integral = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double v = line_integral(rho, curves[i], opt);
        if (v < rep.min_integral) {
            rep.min_integral = v;
            rep.argmin = i;
        }
        rep.max_integral = std::max(rep.max_integral, v);
    }
    if (curves.empty()) rep.min_integral = rep.max_integral = 0.0;
    rep.passed = !curves.empty() && rep.min_integral >= 1.0 - kAdmissibilityTol;
    return rep;
}

ModulusProblem ModulusProblem::build(const Foliation& fol, const std::vector<HorizontalCurve>& curves,
                                     GridSpec grid) {
    if (grid.n_s < 1 || grid.n1 < 1 || grid.n2 < 1)
        throw InvalidProblem("grid dimensions must be positive");
    ModulusProblem pb;
    pb.grid = grid;
    const auto& g5 = gauss5();
    const double hs = fol.s_range.width() / grid.n_s;
    const double h1 = fol.d1.width() / grid.n1;
    const double h2 = fol.d2.width() / grid.n2;
    pb.cell_measure.assign(static_cast<std::size_t>(grid.n_s) * grid.n1 * grid.n2, 0.0);
    for (int i = 0; i < grid.n_s; ++i) {
        for (int j = 0; j < grid.n1; ++j) {
            for (int l = 0; l < grid.n2; ++l) {
                double sum = 0.0;
                for (std::size_t a = 0; a < 5; ++a) {
                    const double s = fol.s_range.lo + (i + 0.5 + 0.5 * g5.x[a]) * hs;
                    for (std::size_t b = 0; b < 5; ++b) {
                        const double d1 = fol.d1.lo + (j + 0.5 + 0.5 * g5.x[b]) * h1;
                        for (std::size_t c = 0; c < 5; ++c) {
                            const double d2 = fol.d2.lo + (l + 0.5 + 0.5 * g5.x[c]) * h2;
                            sum += g5.w[a] * g5.w[b] * g5.w[c] * pow4(fol.speed(s, d1, d2)) *
                                   fol.nu_density(d1, d2);
                        }
                    }
                }
                pb.cell_measure[(static_cast<std::size_t>(i) * grid.n1 + j) * grid.n2 + l] =
                    sum * 0.125 * hs * h1 * h2;
            }
        }
    }
    quad::Options vol_opt;
    vol_opt.rel_tol = 1e-12;
    pb.domain_volume =
        quad::adaptive3(
            [&](double s, double d1, double d2) { return pow4(fol.speed(s, d1, d2)) * fol.nu_density(d1, d2); },
            fol.s_range, fol.d1, fol.d2, vol_opt)
            .value;

    const int segments = std::max(256, 8 * grid.n_s);
    pb.rows.reserve(curves.size());
    for (const HorizontalCurve& curve : curves) {
        std::map<std::size_t, double> row;
        const double ds = (curve.d() - curve.c()) / segments;
        for (int n = 0; n < segments; ++n) {
            const double mid = curve.c() + (n + 0.5) * ds;
            const FoliationCoords q = fol.inverse(curve.position(mid));
            const int i = cell_of(q.s, fol.s_range, grid.n_s);
            const int j = cell_of(q.d1, fol.d1, grid.n1);
            const int l = cell_of(q.d2, fol.d2, grid.n2);
            if (i < 0 || j < 0 || l < 0) continue;
            row[(static_cast<std::size_t>(i) * grid.n1 + j) * grid.n2 + l] += curve.speed(mid) * ds;
        }
        pb.rows.emplace_back(row.begin(), row.end());
    }
    return pb;
}

void ModulusProblem::validate() const {
    if (cell_measure.empty()) throw InvalidProblem("no cells");
    if (rows.empty()) throw InvalidProblem("no curves");
    for (double w : cell_measure)
        if (!(w > 0.0)) throw InvalidProblem("cell measure must be positive");
    for (std::size_t g = 0; g < rows.size(); ++g) {
        double len = 0.0;
        for (const auto& [cell, l] : rows[g]) {
            if (cell >= cell_measure.size()) throw InvalidProblem("cell index out of range");
            if (!(l >= 0.0)) throw InvalidProblem("negative segment length");
            len += l;
        }
        if (!(len > 0.0)) throw InvalidProblem("curve " + std::to_string(g) + " has zero length in the grid");
    }
    if (domain_volume > 0.0) {
        const double sum = std::accumulate(cell_measure.begin(), cell_measure.end(), 0.0);
        if (std::abs(sum - domain_volume) > 1e-6 * domain_volume)
            throw InvalidProblem("cell measures sum to " + std::to_string(sum) + ", domain volume " +
                                 std::to_string(domain_volume));
    }
}

ModulusResult discrete_modulus(const ModulusProblem& pb, const SolverOptions& opt) {
    pb.validate();
    const std::size_t n_cells = pb.cell_measure.size();
    const std::size_t n_rows = pb.rows.size();
    const auto& w = pb.cell_measure;

    std::vector<double> y(n_rows, 1.0), aty(n_cells), rho(n_cells), arho(n_rows), grad(n_rows);

    auto primal = [&] {
        std::fill(aty.begin(), aty.end(), 0.0);
        for (std::size_t g = 0; g < n_rows; ++g)
            for (const auto& [c, l] : pb.rows[g]) aty[c] += l * y[g];
        for (std::size_t c = 0; c < n_cells; ++c) rho[c] = std::cbrt(aty[c] / (4.0 * w[c]));
        for (std::size_t g = 0; g < n_rows; ++g) {
            double s = 0.0;
            for (const auto& [c, l] : pb.rows[g]) s += l * rho[c];
            arho[g] = s;
        }
    };
    auto energy = [&] {
        double e = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c) e += w[c] * pow4(rho[c]);
        return e;
    };

    // rho scales like y^{1/3}; start with mean(A rho) = 1.
    primal();
    const double mean = std::accumulate(arho.begin(), arho.end(), 0.0) / static_cast<double>(n_rows);
    for (double& v : y) v /= mean * mean * mean;

    ModulusResult res;
    res.grid = pb.grid;
    res.n_curves = n_rows;
    double best_ub = std::numeric_limits<double>::infinity();
    double best_lb = -std::numeric_limits<double>::infinity();
    std::vector<double> best_ub_hist;
    best_ub_hist.reserve(static_cast<std::size_t>(opt.max_iterations) + 1);
    double theta = 1.0;
    int since_lb_gain = 0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        primal();
        const double e = energy();
        const double ysum = std::accumulate(y.begin(), y.end(), 0.0);
        const double dual = ysum - 3.0 * e;
        const double m = *std::min_element(arho.begin(), arho.end());
        if (m > 0.0) {
            const double ub = e / pow4(m);
            if (ub < best_ub) {
                best_ub = ub;
                res.density.resize(n_cells);
                for (std::size_t c = 0; c < n_cells; ++c) res.density[c] = rho[c] / m;
            }
        }
        if (dual > best_lb) {
            best_lb = dual;
            since_lb_gain = 0;
        } else if (++since_lb_gain >= 25) {
            theta = std::max(theta * 0.5, 1e-8);
            since_lb_gain = 0;
        }
        best_ub_hist.push_back(best_ub);

        const double gap = best_ub - best_lb;
        if (std::isfinite(best_ub) && gap <= 1e-12 * best_ub) break;
        if (it >= opt.window) {
            const double old = best_ub_hist[static_cast<std::size_t>(it - opt.window)];
            if (std::isfinite(old) && (old - best_ub) <= opt.rel_change * best_ub) break;
        }

        double gnorm2 = 0.0;
        for (std::size_t g = 0; g < n_rows; ++g) {
            double d = 1.0 - arho[g];
            if (y[g] <= 0.0 && d < 0.0) d = 0.0;
            grad[g] = d;
            gnorm2 += d * d;
        }
        if (gnorm2 == 0.0) break;
        const double target = std::isfinite(best_ub) ? best_ub : dual + 1.0;
        const double step = theta * std::max(target - dual, 0.0) / gnorm2;
        if (step == 0.0) break;
        for (std::size_t g = 0; g < n_rows; ++g) y[g] = std::max(0.0, y[g] + step * grad[g]);
    }
    res.iterations = it;
    res.value = best_ub;
    res.lower_bound = best_lb;

    // Certificate on the returned density.
    double min_row = std::numeric_limits<double>::infinity();
    for (const auto& row : pb.rows) {
        double s = 0.0;
        for (const auto& [c, l] : row) s += l * res.density[c];
        min_row = std::min(min_row, s);
    }
    res.worst_slack = min_row - 1.0;
    res.max_violation = std::max(0.0, 1.0 - min_row);
    res.converged = it < opt.max_iterations && res.max_violation <= opt.max_violation;
    return res;
}

double mean_distortion(const MapUnderTest& f, const Density& rho, const Foliation& fol,
                       const quad::Options& opt) {
    return quad::adaptive3(
               [&](double s, double d1, double d2) {
                   const Point p = fol.map(s, d1, d2);
                   const double r = rho(p);
                   if (r == 0.0) return 0.0;
                   const double K = distortion(f, p);
                   return K * K * pow4(r) * pow4(fol.speed(s, d1, d2)) * fol.nu_density(d1, d2);
               },
               fol.s_range, fol.d1, fol.d2, opt)
        .value;
}

FiberChecks check_fibers(const MapUnderTest& f, const Foliation& fol, int m, int samples_per_fiber) {
    FiberChecks out;
    out.fibers = m * m;
    out.samples_per_fiber = samples_per_fiber;
    out.msp_max_real = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double d1 = fol.d1.lo + (i + 0.5) * fol.d1.width() / m;
            const double d2 = fol.d2.lo + (j + 0.5) * fol.d2.width() / m;
            const HorizontalCurve fiber = fol.fiber(d1, d2);
            double kmin = std::numeric_limits<double>::infinity();
            double kmax = -kmin;
            for (int n = 0; n < samples_per_fiber; ++n) {
                const double s = fiber.c() + (fiber.d() - fiber.c()) * n / (samples_per_fiber - 1);
                const Point p = fiber.position(s);
                const double K = distortion(f, p);
                kmin = std::min(kmin, K);
                kmax = std::max(kmax, K);
                if (std::abs(beltrami(f, p)) <= 1e-14) continue;
                const Complex ind = msp_indicator(f, fiber, s);
                out.msp_max_real = std::max(out.msp_max_real, ind.real());
                out.msp_max_imag = std::max(out.msp_max_imag, std::abs(ind.imag()));
            }
            out.k_max_spread = std::max(out.k_max_spread, kmax - kmin);
        }
    }
    return out;
}

double image_family_modulus(const MapUnderTest& f, const Foliation& fol, const quad::Options& opt) {
    const FiberChecks chk = check_fibers(f, fol);
    if (!(chk.msp_max_real < 0.0 || chk.msp_max_real == -std::numeric_limits<double>::infinity()) ||
        chk.msp_max_imag > kMspImagTol) {
        throw MSPViolated("indicator max real part " + std::to_string(chk.msp_max_real) +
                          ", max |imag| " + std::to_string(chk.msp_max_imag));
    }
    if (chk.k_max_spread > kFiberConstTol)
        throw DistortionNotFiberConstant("spread " + std::to_string(chk.k_max_spread));
    const double len = fol.s_range.width();
    const double mid = fol.s_range.lo + 0.5 * len;
    const double integral =
        quad::adaptive2(
            [&](double d1, double d2) {
                const double K = distortion(f, fol.map(mid, d1, d2));
                return K * K * fol.nu_density(d1, d2);
            },
            fol.d1, fol.d2, opt)
            .value;
    return integral / (len * len * len);
}

QuasiInvarianceReport quasi_invariance_check(double max_distortion, double mod, double mod_image) {
    if (!(max_distortion >= 1.0) || !std::isfinite(max_distortion))
        throw InvalidParameters("maximal distortion must be finite and at least 1");
    const double K2 = max_distortion * max_distortion;
    QuasiInvarianceReport r{};
    r.lower = mod / K2;
    r.upper = K2 * mod;
    r.value = mod_image;
    const double slack = 1e-9 * std::max(1.0, std::abs(mod_image));
    r.lower_slack = mod_image - r.lower;
    r.upper_slack = r.upper - mod_image;
    r.passed = r.lower_slack >= -slack && r.upper_slack >= -slack;
    return r;
}

}  // namespace aa
