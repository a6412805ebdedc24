#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"

#include "aa/json_io.hpp"

using namespace aa;
using nlohmann::json;

TEST_CASE("doubles are written with 17 significant digits") {
    CHECK(dump_json(json(0.1), 0) == "0.10000000000000001");
    CHECK(dump_json(json(1.0 / 3.0), 0) == "0.33333333333333331");
    CHECK(dump_json(json(2.0), 0) == "2.0");
    CHECK(dump_json(json(1e300), 0) == "1.0000000000000001e+300");
    CHECK(dump_json(json(3), 0) == "3");
    const double x = 96.4575179388218;
    CHECK(json::parse(dump_json(json(x))).get<double>() == x);
}

TEST_CASE("non-finite values become null") {
    CHECK(dump_json(json(std::numeric_limits<double>::infinity()), 0) == "null");
    CHECK(dump_json(json(std::nan("")), 0) == "null");
    CHECK(dump_json(json{{"x", -std::numeric_limits<double>::infinity()}}, 0) == "{\"x\":null}");
}

TEST_CASE("keys are sorted and output ends with a newline") {
    const json j = {{"zeta", 1}, {"alpha", {1.5, true, "s"}}, {"mid", json::object()}};
    CHECK(dump_json(j) == "{\n  \"alpha\": [\n    1.5,\n    true,\n    \"s\"\n  ],\n  \"mid\": {},\n  \"zeta\": 1\n}\n");
    CHECK(dump_json(j, 0) == "{\"alpha\":[1.5,true,\"s\"],\"mid\":{},\"zeta\":1}");
}

TEST_CASE("reports carry the schema version") {
    const Check c{"x", 1.0, 2.0, 1.0, true};
    const json jc = to_json(c);
    CHECK(jc.at("name") == "x");
    CHECK(jc.at("passed") == true);

    TheoremReport r;
    r.theorem = "t";
    r.kind = ScenarioKind::linear_k_gt_1;
    r.k = 2.0;
    r.checks = {c};
    r.values = {{"mod_gamma0", 1.25}};
    const json jr = to_json(r);
    CHECK(jr.at("schema") == kJsonSchema);
    CHECK(jr.at("scenario") == "linear_gt1");
    CHECK(jr.at("values").at("mod_gamma0") == 1.25);
    CHECK_FALSE(jr.contains("r0"));

    const json jo = to_json(open_question_report(0.5, 3.0, 1.0));
    CHECK(jo.at("schema") == kJsonSchema);
    CHECK(jo.at("report") == "open_question");
    CHECK(jo.at("passed") == true);
}

TEST_CASE("checks csv") {
    std::ostringstream os;
    write_checks_csv(os, {{"a", 0.5, 1.0, 0.5, true}, {"b", std::numeric_limits<double>::infinity(), 0.0, -1.0, false}});
    CHECK(os.str() == "name,measured,threshold,slack,passed\na,0.5,1.0,0.5,true\nb,null,0.0,-1.0,false\n");
}

TEST_CASE("summary csv row has one field per header column") {
    TheoremReport r;
    r.kind = ScenarioKind::radial;
    r.k = 0.5;
    r.r0 = 3.0;
    r.psi0 = 1.0;
    r.values = {{"mod_gamma0", 1.0}, {"mean_distortion", 2.0}, {"image_family_modulus", 2.0}, {"admissibility_min", 1.0}};
    const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(count(summary_csv_row(r)) == count(summary_csv_header()));
    CHECK(summary_csv_row(r).rfind("radial,0.5,3.0,1.0,", 0) == 0);
}

TEST_CASE("scenario config parsing") {
    const ScenarioConfig cfg = parse_scenario_config(json::parse(R"({
        "kind": "radial", "k": 0.25, "psi0": 0.5, "grid": 12, "seed": 9,
        "tolerances": {"contact_tol": 1e-6, "perturbed_curves": 20}})"));
    CHECK(cfg.kind == ScenarioKind::radial);
    CHECK(*cfg.k == 0.25);
    CHECK_FALSE(cfg.r0.has_value());
    CHECK(*cfg.grid == 12);
    CHECK(*cfg.seed == 9u);
    CHECK(cfg.tolerances.contact_tol == 1e-6);
    CHECK(cfg.tolerances.perturbed_curves == 20);
    CHECK(cfg.tolerances.msp_imag_tol == VerifyOptions::strict().msp_imag_tol);

    const ScenarioConfig fast = parse_scenario_config(json{{"kind", "linear_lt1"}}, VerifyOptions::fast());
    CHECK(fast.kind == ScenarioKind::linear_k_lt_1);
    CHECK(fast.tolerances.perturbed_curves == VerifyOptions::fast().perturbed_curves);
}

TEST_CASE("scenario config errors") {
    CHECK_THROWS_AS((void)parse_scenario_config(json{{"kind", "radial"}, {"colour", 1}}), InvalidParameters);
    CHECK_THROWS_AS((void)parse_scenario_config(json{{"k", 0.5}}), InvalidParameters);
    CHECK_THROWS_AS((void)parse_scenario_config(json{{"kind", "spiral"}}), InvalidParameters);
    CHECK_THROWS_AS((void)parse_scenario_config(json{{"kind", "radial"}, {"k", "half"}}), InvalidParameters);
    CHECK_THROWS_AS((void)parse_scenario_config(json{{"kind", "radial"}, {"tolerances", {{"nope", 1}}}}),
                    InvalidParameters);
    CHECK_THROWS_AS((void)parse_scenario_config(json::array()), InvalidParameters);
    CHECK_THROWS_AS((void)load_scenario_config("/nonexistent/config.json"), InvalidParameters);
}
