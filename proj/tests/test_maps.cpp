#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "aa/maps.hpp"
#include "aa/stretch.hpp"

using namespace aa;

namespace {

std::vector<Point> random_points(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> xi(-0.8, 0.8);
    std::uniform_real_distribution<double> psi(-1.3, 1.3);
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) out.push_back(from_logcyl(LogCylPoint(u(rng), xi(rng), psi(rng))));
    return out;
}

// Central differences of the forward map, independent of frame_derivatives.
Jacobian3 fd_jacobian(const MapUnderTest& f, const Point& p) {
    Jacobian3 J{};
    const double h = 1e-6;
    for (std::size_t k = 0; k < 3; ++k) {
        std::array<double, 3> e{0, 0, 0};
        e[k] = h;
        const Point a = f(Point(p.a() + e[0], p.lambda() + e[1], p.t() + e[2]));
        const Point b = f(Point(p.a() - e[0], p.lambda() - e[1], p.t() - e[2]));
        J[0][k] = (a.a() - b.a()) / (2 * h);
        J[1][k] = (a.lambda() - b.lambda()) / (2 * h);
        J[2][k] = (a.t() - b.t()) / (2 * h);
    }
    return J;
}

}  // namespace

TEST_CASE("linear stretch Beltrami coefficient and distortion") {
    for (double k : {0.25, 0.5, 1.0, 3.0}) {
        const MapUnderTest f = linear_stretch(k);
        for (const Point& p : random_points(50, 1)) {
            for (auto m : {DerivativeMethod::analytic, DerivativeMethod::finite_difference}) {
                const DerivativeRecord d = horizontal_derivatives(f, p, m);
                CHECK(std::abs(d.Zf_I - Complex(p.lambda() * (1 + k), 0)) < 1e-8);
                CHECK(std::abs(d.Zbar_f_I - Complex(p.lambda() * (1 - k), 0)) < 1e-8);
                CHECK(std::abs(beltrami(f, p, m) - (1 - k) / (1 + k)) < 1e-9);
                CHECK(distortion(f, p, m) == doctest::Approx(k < 1 ? 1 / k : k).epsilon(1e-9));
                CHECK(contact_residual(f, p, m).sigma == doctest::Approx(k).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("hand-coded Jacobians agree with differences") {
    for (const MapUnderTest& f : {radial_stretch(0.5), radial_stretch(1.7), f_minus_one(), linear_stretch(2.0)}) {
        for (const Point& p : random_points(100, 2)) {
            const Jacobian3 A = f.jacobian(p), B = fd_jacobian(f, p);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(A[i][j] - B[i][j]) < 1e-7);
        }
    }
}

TEST_CASE("analytic and finite-difference frame derivatives agree") {
    const MapUnderTest f = radial_stretch(0.4);
    for (const Point& p : random_points(100, 3)) {
        const DerivativeRecord a = horizontal_derivatives(f, p, DerivativeMethod::analytic);
        const DerivativeRecord b = horizontal_derivatives(f, p, DerivativeMethod::finite_difference);
        CHECK(std::abs(a.Zf_I - b.Zf_I) < 1e-8 * (1 + std::abs(a.Zf_I)));
        CHECK(std::abs(a.Zbar_f_I - b.Zbar_f_I) < 1e-8 * (1 + std::abs(a.Zf_I)));
        CHECK(b.method == DerivativeMethod::finite_difference);
    }
}

TEST_CASE("operator norm, volume derivative and distortion") {
    for (const MapUnderTest& f : {radial_stretch(0.3), linear_stretch(0.6), f_minus_one()}) {
        for (const Point& p : random_points(200, 4)) {
            const double K = distortion(f, p);
            CHECK(analytic_qc_ratio(f, p) == doctest::Approx(K * K).epsilon(1e-10));
            // Contact maps scale the Haar volume by sigma^2.
            const double sigma = contact_residual(f, p).sigma;
            CHECK(jacobian_mu(f, p) == doctest::Approx(sigma * sigma).epsilon(1e-10));
            // Against the Euclidean determinant and the Haar densities.
            const Jacobian3 J = f.jacobian(p);
            const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                               J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                               J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
            CHECK(jacobian_mu(f, p) == doctest::Approx(std::abs(det) * haar_density(f(p)) / haar_density(p)).epsilon(1e-9));
        }
    }
}

TEST_CASE("contact residuals vanish for contact maps and not otherwise") {
    for (const MapUnderTest& f : {radial_stretch(0.5), linear_stretch(2.5), f_minus_one(), identity_map()})
        for (const Point& p : random_points(100, 5)) CHECK(contact_residual(f, p).max_abs() < 1e-9);
    const MapUnderTest shear("shear", [](const Point& p) { return Point(p.a(), p.lambda(), p.t() + p.a()); });
    CHECK(contact_residual(shear, Point(0.1, 1.0, 0.2)).max_abs() > 0.1);
}

TEST_CASE("degenerate and orientation-reversing maps") {
    const MapUnderTest constant("constant", [](const Point&) { return Point(1, 1, 1); });
    CHECK_THROWS_AS((void)beltrami(constant, Point(0, 1, 0)), DegenerateDerivative);
    const MapUnderTest flip("flip", [](const Point& p) { return Point(-p.a(), p.lambda(), -p.t()); });
    CHECK_THROWS_AS((void)distortion(flip, Point(0, 1, 0)), NotQuasiconformalAtPoint);
    CHECK_THROWS_AS((void)horizontal_derivatives(flip, Point(0, 1, 0), DerivativeMethod::automatic, true),
                    DegenerateDerivative);
    CHECK_THROWS_AS((void)constant.jacobian(Point(0, 1, 0)), InvalidParameters);
    CHECK_THROWS_AS((void)constant.inverse(Point(0, 1, 0)), InvalidParameters);
}

TEST_CASE("minimal-stretching indicator needs planar motion") {
    const HorizontalCurve still = HorizontalCurve::cartesian(
        0.0, 1.0, [](double) { return Point(0, 1, 0); }, [](double) { return Tangent{}; });
    CHECK_THROWS_AS((void)msp_indicator(linear_stretch(0.5), still, 0.5), ZeroVelocity);
}

TEST_CASE("pushforward speed matches the speed of the image curve") {
    const HorizontalCurve c = lift_planar_path(
        Chart::cartesian, 0.0, 1.0, 0.0,
        {[](double s) { return std::array<double, 2>{1.0 + 0.3 * s * s, std::sin(2 * s)}; },
         [](double s) { return std::array<double, 2>{0.6 * s, 2 * std::cos(2 * s)}; }});
    for (const MapUnderTest& f : {radial_stretch(0.5), linear_stretch(0.5), f_minus_one()}) {
        const HorizontalCurve image = HorizontalCurve::cartesian(0.0, 1.0, [&](double s) { return f(c.position(s)); });
        for (int i = 1; i < 10; ++i) {
            const double s = i / 10.0;
            CHECK(pushforward_speed(f, c, s) == doctest::Approx(image.speed(s)).epsilon(1e-8));
            const StretchBounds b = stretching_bounds(f, c, s);
            CHECK(b.lower <= pushforward_speed(f, c, s) * (1 + 1e-12));
            CHECK(pushforward_speed(f, c, s) <= b.upper * (1 + 1e-12));
        }
    }
}

TEST_CASE("diagnostic record") {
    const PointDiagnostic d = diagnose(radial_stretch(0.5), from_logcyl(LogCylPoint(0, 0.2, 0)));
    CHECK(d.K == doctest::Approx(4.0));
    CHECK(d.mu.real() == doctest::Approx(-0.6));
    CHECK(d.residuals.max_abs() < 1e-12);
    CHECK(std::string(to_string(DerivativeMethod::finite_difference)) == "finite-difference");
}
