#pragma once

// JSON and CSV serialisation of reports, plus the scenario config file.
// Numbers are written with 17 significant digits; non-finite values as null.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "aa/modulus.hpp"
#include "aa/stretch.hpp"
#include "aa/verify.hpp"

namespace aa {

inline constexpr int kJsonSchema = 1;

/// Deterministic rendering: object keys sorted, doubles via %.17g.
[[nodiscard]] std::string dump_json(const nlohmann::json& j, int indent = 2);

[[nodiscard]] nlohmann::json to_json(const Check& c);
[[nodiscard]] nlohmann::json to_json(const TheoremReport& r);
[[nodiscard]] nlohmann::json to_json(const OQReport& r);
[[nodiscard]] nlohmann::json to_json(const ModulusResult& r);

/// One row per check: name,measured,threshold,slack,passed.
void write_checks_csv(std::ostream& os, const std::vector<Check>& checks);

/// Summary table row for a theorem report; header written by the caller.
[[nodiscard]] std::string summary_csv_header();
[[nodiscard]] std::string summary_csv_row(const TheoremReport& r);

/// Scenario file: {"kind", "k", "r0", "psi0", "grid", "curves", "seed",
/// "tolerances": {...}}; every key but "kind" optional.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::radial;
    std::optional<double> k;
    std::optional<double> r0;
    std::optional<double> psi0;
    std::optional<int> grid;
    std::optional<int> curves;
    std::optional<std::uint64_t> seed;
    VerifyOptions tolerances;
};

/// Throws InvalidParameters on malformed input or unknown keys.
[[nodiscard]] ScenarioConfig parse_scenario_config(const nlohmann::json& j,
                                                   const VerifyOptions& base = VerifyOptions::strict());
[[nodiscard]] ScenarioConfig load_scenario_config(const std::string& path,
                                                  const VerifyOptions& base = VerifyOptions::strict());

}  // namespace aa
