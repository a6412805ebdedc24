#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "aa/verify.hpp"

using namespace aa;

namespace {

const Check& find(const std::vector<Check>& checks, const std::string& name) {
    for (const Check& c : checks)
        if (c.name == name) return c;
    FAIL("missing check " << name);
    return checks.front();
}

void require_all_pass(const TheoremReport& r) {
    for (const Check& c : r.checks) {
        INFO(c.name << " measured " << c.measured << " threshold " << c.threshold);
        CHECK(c.passed);
    }
}

}  // namespace

TEST_CASE("linear k < 1 report") {
    const TheoremReport r = verify_linear(0.5, ScenarioKind::linear_k_lt_1, VerifyOptions::fast());
    require_all_pass(r);
    CHECK(r.theorem == "linear_stretch_extremality");
    CHECK(r.value("mod_gamma0") == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
    CHECK(r.value("mean_distortion") == doctest::Approx(56.0 / 3.0).epsilon(1e-9));
    CHECK(r.value("image_family_modulus") == doctest::Approx(56.0 / 3.0).epsilon(1e-12));
    CHECK(r.value("admissibility_min") >= 1.0 - 1e-8);
    CHECK_THROWS_AS((void)r.value("no_such_value"), InvalidParameters);
}

TEST_CASE("linear k > 1 report") {
    const TheoremReport r = verify_linear(3.0, ScenarioKind::linear_k_gt_1, VerifyOptions::fast());
    require_all_pass(r);
    const double mod = 32.0 / (27.0 * std::pow(std::cbrt(2.0) - 1.0, 3));
    CHECK(r.value("mod_gamma0") == doctest::Approx(mod).epsilon(1e-12));
    CHECK(r.value("mean_distortion") == doctest::Approx(9 * mod).epsilon(1e-9));
}

TEST_CASE("k = 1 is the identity and every bound is tight") {
    const TheoremReport r = verify_linear(1.0, ScenarioKind::linear_k_lt_1, VerifyOptions::fast());
    require_all_pass(r);
    CHECK(r.value("image_family_modulus") == doctest::Approx(r.value("mod_gamma0")).epsilon(1e-12));
    CHECK(find(r.checks, "msp_real_part_negative").passed);
    const TheoremReport rad = verify_radial(1.0, std::numbers::e, 0.7, VerifyOptions::fast());
    require_all_pass(rad);
}

TEST_CASE("radial report") {
    const TheoremReport r = verify_radial(0.5, std::numbers::e, std::numbers::pi / 4, VerifyOptions::fast());
    require_all_pass(r);
    CHECK(r.theorem == "radial_stretch_extremality");
    CHECK(r.value("mod_gamma0") == doctest::Approx(2 * std::numbers::pi + 4).epsilon(1e-12));
    CHECK(r.value("image_family_modulus") == doctest::Approx(96.4575179388218).epsilon(1e-12));
    CHECK(r.value("max_distortion") == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS((void)verify_linear(0.5, ScenarioKind::radial), InvalidParameters);
    CHECK_THROWS_AS((void)verify_linear(2.0, ScenarioKind::linear_k_lt_1), InvalidParameters);
    CHECK_THROWS_AS((void)verify_radial(0.5, 0.5, 0.5), InvalidParameters);
}

TEST_CASE("a zero contact tolerance makes the report fail") {
    VerifyOptions opt = VerifyOptions::fast();
    opt.contact_tol = 0.0;
    opt.perturbed_curves = 10;
    const TheoremReport r = verify_radial(0.5, std::numbers::e, std::numbers::pi / 4, opt);
    CHECK_FALSE(r.passed());
    CHECK_FALSE(find(r.checks, "contact_residual_finite_difference").passed);
}

TEST_CASE("radial image modulus closed form against quadrature") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uk(0.05, 1.0), ur(1.1, 20.0), up(0.01, 1.55);
    for (int i = 0; i < 200; ++i) {
        const double k = uk(rng), r0 = ur(rng), psi0 = up(rng);
        CHECK(radial_image_modulus_closed(k, r0, psi0) ==
              doctest::Approx(radial_image_modulus_quadrature(k, r0, psi0)).epsilon(1e-10));
    }
    // k = 1: the image family is the original family.
    CHECK(radial_image_modulus_closed(1.0, std::numbers::e, std::numbers::pi / 4) ==
          doctest::Approx(2 * std::numbers::pi + 4).epsilon(1e-14));
}

TEST_CASE("open question report") {
    const OQReport r = open_question_report(0.5, std::numbers::e, std::numbers::pi / 3);
    CHECK(r.passed());
    CHECK(r.inequality_regime);
    CHECK(r.ratio == doctest::Approx(8.410863400270392).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(std::pow(2.0, 3.5)).epsilon(1e-14));
    CHECK(r.k_f_sq == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(r.ratio < r.bound);
    CHECK(r.bound < r.k_f_sq);
    // ratio = k^{-7/2} h(k) / h(1)
    CHECK(r.ratio == doctest::Approx(r.bound * open_question_h(0.5, r.psi0) / open_question_h(1.0, r.psi0))
                         .epsilon(1e-12));
    CHECK_FALSE(open_question_report(0.5, std::numbers::e, std::numbers::pi / 6).inequality_regime);
}

TEST_CASE("open question ratio tends to one as k approaches one") {
    const OQReport r = open_question_report(1.0 - 1e-7, 3.0, 1.0);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("h is increasing in k and bounded by its value at one for psi0 above pi/4") {
    for (double psi0 : {0.786, 0.9, 1.0, 1.4, 1.55}) {
        double prev = open_question_h(0.001, psi0);
        for (int i = 2; i <= 1000; ++i) {
            const double h = open_question_h(0.001 * i, psi0);
            CHECK(h > prev);
            prev = h;
        }
        CHECK(open_question_h(1.0, psi0) == doctest::Approx(psi0 + std::sin(psi0) * std::cos(psi0)).epsilon(1e-14));
    }
}

TEST_CASE("h fails to be monotone for small psi0") {
    double min_diff = 1.0;
    for (int i = 1; i < 99; ++i)
        min_diff = std::min(min_diff, open_question_h(0.01 * (i + 1), 0.3) - open_question_h(0.01 * i, 0.3));
    CHECK(min_diff < 0.0);
    const OQReport r = open_question_report(0.5, std::numbers::e, 0.3);
    CHECK_FALSE(r.inequality_regime);
    CHECK(r.monotone_min_diff < 0.0);
    CHECK(r.passed());
    for (const Check& c : r.checks) CHECK(c.name != "h_monotone_increasing");
}

TEST_CASE("open question parameter validation") {
    CHECK_THROWS_AS((void)open_question_report(1.0, 3.0, 1.0), InvalidParameters);
    CHECK_THROWS_AS((void)open_question_report(0.0, 3.0, 1.0), InvalidParameters);
    CHECK_THROWS_AS((void)open_question_report(0.5, 1.0, 1.0), InvalidParameters);
    CHECK_THROWS_AS((void)open_question_report(0.5, 3.0, std::numbers::pi / 2), InvalidParameters);
}

TEST_CASE("distortion profile") {
    const auto prof = radial_distortion_profile(0.5, std::numbers::pi / 4, 9);
    REQUIRE(prof.size() == 9);
    CHECK(prof.front().first == 0.0);
    CHECK(prof.front().second == doctest::Approx(4.0).epsilon(1e-9));
    for (const auto& [psi, K] : prof) {
        const double c = std::cos(psi), s = std::sin(psi);
        CHECK(K == doctest::Approx(1.0 / (0.25 * c * c + s * s)).epsilon(1e-9));
    }
    CHECK_THROWS_AS((void)radial_distortion_profile(0.5, 1.0, 1), InvalidParameters);
}
