#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "aa/core.hpp"

using namespace aa;

namespace {

Point random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> pos(0.1, 4.0);
    return Point(u(rng), pos(rng), u(rng));
}

void require_close(const Point& p, const Point& q, double tol) {
    const double scale = 1.0 + p.coord_norm();
    CHECK(std::abs(p.a() - q.a()) <= tol * scale);
    CHECK(std::abs(p.lambda() - q.lambda()) <= tol * scale);
    CHECK(std::abs(p.t() - q.t()) <= tol * scale);
}

}  // namespace

TEST_CASE("group product is associative on random triples") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Point p = random_point(rng), q = random_point(rng), r = random_point(rng);
        require_close(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)), 1e-12);
    }
}

TEST_CASE("identity and inverse") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const Point p = random_point(rng);
        require_close(group_mul(p, identity()), p, 1e-15);
        require_close(group_mul(identity(), p), p, 1e-15);
        require_close(group_mul(p, group_inv(p)), identity(), 1e-12);
        require_close(group_mul(group_inv(p), p), identity(), 1e-12);
    }
}

TEST_CASE("product in complex form") {
    const Point p(0.5, 2.0, -1.0), q(1.5, 0.5, 3.0);
    const Complex z = Complex(2.0, 0.0) * q.planar() + Complex(0.0, -1.0);
    const Point r = group_mul(p, q);
    CHECK(r.a() == doctest::Approx(2.0));
    CHECK(r.lambda() == doctest::Approx(z.real()));
    CHECK(r.t() == doctest::Approx(z.imag()));
}

TEST_CASE("invalid points are rejected") {
    CHECK_THROWS_AS(Point(0, 0, 0), InvalidPoint);
    CHECK_THROWS_AS(Point(0, -1, 0), InvalidPoint);
    CHECK_THROWS_AS(Point(std::nan(""), 1, 0), InvalidPoint);
    CHECK_THROWS_AS(LogCylPoint(0, 0, std::numbers::pi / 2), InvalidPoint);
    CHECK_THROWS_AS(LogCylPoint(0, 0, -2.0), InvalidPoint);
}

TEST_CASE("frame values against the contact form") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const Point p = random_point(rng);
        const FrameValues f = frame_at(p);
        CHECK(std::abs(contact_form_eval(p, f.U)) < 1e-15);
        CHECK(std::abs(contact_form_eval(p, f.V)) < 1e-15);
        CHECK(contact_form_eval(p, f.W) == doctest::Approx(1.0));
        CHECK(horizontal_norm(p, f.U) == doctest::Approx(1.0));
        CHECK(horizontal_norm(p, f.V) == doctest::Approx(1.0));
    }
}

TEST_CASE("horizontal norm rejects vertical vectors") {
    const Point p(0, 1, 0);
    CHECK(is_horizontal(p, {0.5, 3.0, 1.0}));
    CHECK_FALSE(is_horizontal(p, {1.0, 0.0, 0.0}));
    CHECK_THROWS_AS((void)horizontal_norm(p, {1.0, 0.0, 0.0}), NonHorizontalTangent);
}

TEST_CASE("contact form and Haar density are left invariant") {
    std::mt19937_64 rng(14);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const Point g = random_point(rng), q = random_point(rng);
        // Differential of left translation by central differences.
        std::array<std::array<double, 3>, 3> J{};
        for (int k = 0; k < 3; ++k) {
            std::array<double, 3> e{0, 0, 0};
            e[k] = h;
            const Point plus = group_mul(g, Point(q.a() + e[0], q.lambda() + e[1], q.t() + e[2]));
            const Point minus = group_mul(g, Point(q.a() - e[0], q.lambda() - e[1], q.t() - e[2]));
            J[0][k] = (plus.a() - minus.a()) / (2 * h);
            J[1][k] = (plus.lambda() - minus.lambda()) / (2 * h);
            J[2][k] = (plus.t() - minus.t()) / (2 * h);
        }
        const Tangent v{0.3, -0.7, 1.1};
        const Tangent w{J[0][0] * v.da + J[0][1] * v.dlambda + J[0][2] * v.dt,
                        J[1][0] * v.da + J[1][1] * v.dlambda + J[1][2] * v.dt,
                        J[2][0] * v.da + J[2][1] * v.dlambda + J[2][2] * v.dt};
        const Point gq = group_mul(g, q);
        CHECK(contact_form_eval(gq, w) == doctest::Approx(contact_form_eval(q, v)).epsilon(1e-8));
        const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        CHECK(haar_density(gq) * std::abs(det) == doctest::Approx(haar_density(q)).epsilon(1e-8));
    }
}

TEST_CASE("log-cylindrical chart round trip and Jacobian") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 500; ++i) {
        const LogCylPoint q(u(rng), u(rng), u(rng));
        const Point p = from_logcyl(q);
        const LogCylPoint back = to_logcyl(p);
        CHECK(back.a() == doctest::Approx(q.a()));
        CHECK(back.xi() == doctest::Approx(q.xi()));
        CHECK(back.psi() == doctest::Approx(q.psi()));
        CHECK(std::abs(p.planar() - std::polar(std::exp(q.xi()), q.psi())) < 1e-12 * std::exp(q.xi()));

        // Determinant of the planar block by differences.
        const double h = 1e-6;
        const Point xp = from_logcyl(LogCylPoint(q.a(), q.xi() + h, q.psi()));
        const Point xm = from_logcyl(LogCylPoint(q.a(), q.xi() - h, q.psi()));
        const Point yp = from_logcyl(LogCylPoint(q.a(), q.xi(), q.psi() + h));
        const Point ym = from_logcyl(LogCylPoint(q.a(), q.xi(), q.psi() - h));
        const double det = (xp.lambda() - xm.lambda()) * (yp.t() - ym.t()) / (4 * h * h) -
                           (xp.t() - xm.t()) * (yp.lambda() - ym.lambda()) / (4 * h * h);
        CHECK(det == doctest::Approx(logcyl_jacobian_det(q)).epsilon(1e-7));

        const Tangent v = logcyl_velocity_to_cartesian(q, 0.2, 0.7, -0.4);
        const Point fp = from_logcyl(LogCylPoint(q.a() + 0.2 * h, q.xi() + 0.7 * h, q.psi() - 0.4 * h));
        const Point fm = from_logcyl(LogCylPoint(q.a() - 0.2 * h, q.xi() - 0.7 * h, q.psi() + 0.4 * h));
        CHECK(v.dlambda == doctest::Approx((fp.lambda() - fm.lambda()) / (2 * h)).epsilon(1e-7));
        CHECK(v.dt == doctest::Approx((fp.t() - fm.t()) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("horizontality in log-cylindrical coordinates") {
    // psi'/2 + tan(psi) xi'/2 - a' = 0 is the pulled-back contact form.
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int i = 0; i < 200; ++i) {
        const LogCylPoint q(u(rng), u(rng), u(rng));
        const double dxi = u(rng), dpsi = u(rng);
        const double da = dpsi / 2 + std::tan(q.psi()) * dxi / 2;
        const Tangent v = logcyl_velocity_to_cartesian(q, da, dxi, dpsi);
        CHECK(std::abs(contact_form_eval(from_logcyl(q), v)) < 1e-12);
        const double expected = std::hypot(dxi, dpsi) / (2 * std::cos(q.psi()));
        CHECK(horizontal_norm(from_logcyl(q), v) == doctest::Approx(expected).epsilon(1e-12));
    }
}
