#pragma once

// Composite 16-point Gauss-Legendre quadrature with panel doubling, in one,
// two and three dimensions (tensor product). All catalog integrands are
// analytic on their boxes, so doubling converges in a handful of rounds.

#include <array>
#include <cmath>
#include <cstddef>

namespace aa::quad {

struct Rule16 {
    std::array<double, 16> nodes;    // on [-1, 1]
    std::array<double, 16> weights;
};

const Rule16& gauss_legendre16();

struct Interval {
    double lo;
    double hi;
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

struct Result {
    double value = 0.0;
    int panels = 0;       // panels per dimension in the last round
    bool converged = false;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_panels = 1 << 14;  // per dimension
};

namespace detail {
inline bool close_enough(double prev, double cur, const Options& o) noexcept {
    const double diff = std::abs(cur - prev);
    return diff <= o.rel_tol * std::abs(cur) || diff <= o.abs_tol || (prev == 0.0 && cur == 0.0);
}
}  // namespace detail

template <class F>
double composite(F&& f, Interval iv, int panels) {
    const auto& r = gauss_legendre16();
    const double h = iv.width() / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = iv.lo + (p + 0.5) * h;
        double panel = 0.0;
        for (std::size_t i = 0; i < 16; ++i) panel += r.weights[i] * f(mid + 0.5 * h * r.nodes[i]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

template <class F>
Result adaptive(F&& f, Interval iv, const Options& opt = {}) {
    Result res{composite(f, iv, 1), 1, false};
    for (int panels = 2; panels <= opt.max_panels; panels *= 2) {
        const double next = composite(f, iv, panels);
        const bool done = detail::close_enough(res.value, next, opt);
        res = {next, panels, done};
        if (done) break;
    }
    return res;
}

template <class F>
double composite2(F&& f, Interval x, Interval y, int panels) {
    const auto& r = gauss_legendre16();
    const double hx = x.width() / panels;
    const double hy = y.width() / panels;
    double sum = 0.0;
    for (int px = 0; px < panels; ++px) {
        const double mx = x.lo + (px + 0.5) * hx;
        for (std::size_t i = 0; i < 16; ++i) {
            const double xv = mx + 0.5 * hx * r.nodes[i];
            double inner = 0.0;
            for (int py = 0; py < panels; ++py) {
                const double my = y.lo + (py + 0.5) * hy;
                for (std::size_t j = 0; j < 16; ++j) inner += r.weights[j] * f(xv, my + 0.5 * hy * r.nodes[j]);
            }
            sum += r.weights[i] * inner;
        }
    }
    return sum * 0.25 * hx * hy;
}

template <class F>
Result adaptive2(F&& f, Interval x, Interval y, Options opt = {}) {
    if (opt.max_panels > 256) opt.max_panels = 256;
    Result res{composite2(f, x, y, 1), 1, false};
    for (int panels = 2; panels <= opt.max_panels; panels *= 2) {
        const double next = composite2(f, x, y, panels);
        const bool done = detail::close_enough(res.value, next, opt);
        res = {next, panels, done};
        if (done) break;
    }
    return res;
}

template <class F>
double composite3(F&& f, Interval x, Interval y, Interval z, int panels) {
    const auto& r = gauss_legendre16();
    const double hx = x.width() / panels;
    const double hy = y.width() / panels;
    const double hz = z.width() / panels;
    double sum = 0.0;
    for (int px = 0; px < panels; ++px) {
        const double mx = x.lo + (px + 0.5) * hx;
        for (std::size_t i = 0; i < 16; ++i) {
            const double xv = mx + 0.5 * hx * r.nodes[i];
            double mid = 0.0;
            for (int py = 0; py < panels; ++py) {
                const double my = y.lo + (py + 0.5) * hy;
                for (std::size_t j = 0; j < 16; ++j) {
                    const double yv = my + 0.5 * hy * r.nodes[j];
                    double inner = 0.0;
                    for (int pz = 0; pz < panels; ++pz) {
                        const double mz = z.lo + (pz + 0.5) * hz;
                        for (std::size_t l = 0; l < 16; ++l)
                            inner += r.weights[l] * f(xv, yv, mz + 0.5 * hz * r.nodes[l]);
                    }
                    mid += r.weights[j] * inner;
                }
            }
            sum += r.weights[i] * mid;
        }
    }
    return sum * 0.125 * hx * hy * hz;
}

template <class F>
Result adaptive3(F&& f, Interval x, Interval y, Interval z, Options opt = {}) {
    if (opt.max_panels > 16) opt.max_panels = 16;
    Result res{composite3(f, x, y, z, 1), 1, false};
    for (int panels = 2; panels <= opt.max_panels; panels *= 2) {
        const double next = composite3(f, x, y, z, panels);
        const bool done = detail::close_enough(res.value, next, opt);
        res = {next, panels, done};
        if (done) break;
    }
    return res;
}

}  // namespace aa::quad
