#include "aa/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace aa {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep the value a JSON float so readers do not narrow it to an integer.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void dump_rec(std::ostringstream& os, const json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump_rec(os, it.value(), indent, depth + 1);
            }
            os << nl << close_pad << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) os << ',' << nl;
                os << pad;
                dump_rec(os, j[i], indent, depth + 1);
            }
            os << nl << close_pad << ']';
            return;
        }
        case json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

json checks_json(const std::vector<Check>& checks) {
    json arr = json::array();
    for (const Check& c : checks) arr.push_back(to_json(c));
    return arr;
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::ostringstream os;
    dump_rec(os, j, indent, 0);
    if (indent > 0) os << '\n';
    return os.str();
}

json to_json(const Check& c) {
    return {{"name", c.name}, {"measured", c.measured}, {"threshold", c.threshold},
            {"slack", c.slack}, {"passed", c.passed}};
}

json to_json(const TheoremReport& r) {
    json values = json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    json j = {{"schema", kJsonSchema},
              {"report", "theorem"},
              {"theorem", r.theorem},
              {"scenario", to_string(r.kind)},
              {"k", r.k},
              {"values", values},
              {"checks", checks_json(r.checks)},
              {"passed", r.passed()}};
    if (r.kind == ScenarioKind::radial) {
        j["r0"] = r.r0;
        j["psi0"] = r.psi0;
    }
    return j;
}

json to_json(const OQReport& r) {
    return {{"schema", kJsonSchema},
            {"report", "open_question"},
            {"k", r.k},
            {"r0", r.r0},
            {"psi0", r.psi0},
            {"mod_gamma", r.mod_gamma},
            {"mod_image", r.mod_image},
            {"mod_image_quadrature", r.mod_image_quadrature},
            {"ratio", r.ratio},
            {"bound_k_pow_minus_7_2", r.bound},
            {"K_f_sq", r.k_f_sq},
            {"inequality_regime", r.inequality_regime},
            {"monotone_grid", r.monotone_grid},
            {"monotone_min_diff", r.monotone_min_diff},
            {"h_max", r.h_max},
            {"h_bound", r.h_bound},
            {"checks", checks_json(r.checks)},
            {"passed", r.passed()}};
}

json to_json(const ModulusResult& r) {
    return {{"value", r.value},
            {"lower_bound", r.lower_bound},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"max_violation", r.max_violation},
            {"worst_slack", r.worst_slack},
            {"grid", {r.grid.n_s, r.grid.n1, r.grid.n2}},
            {"n_curves", r.n_curves}};
}

void write_checks_csv(std::ostream& os, const std::vector<Check>& checks) {
    os << "name,measured,threshold,slack,passed\n";
    for (const Check& c : checks) {
        os << c.name << ',' << format_double(c.measured) << ',' << format_double(c.threshold) << ','
           << format_double(c.slack) << ',' << (c.passed ? "true" : "false") << '\n';
    }
}

std::string summary_csv_header() {
    return "scenario,k,r0,psi0,mod_gamma0,mean_distortion,image_family_modulus,admissibility_min,passed";
}

std::string summary_csv_row(const TheoremReport& r) {
    std::ostringstream os;
    os << to_string(r.kind) << ',' << format_double(r.k) << ',' << format_double(r.r0) << ','
       << format_double(r.psi0) << ',' << format_double(r.value("mod_gamma0")) << ','
       << format_double(r.value("mean_distortion")) << ',' << format_double(r.value("image_family_modulus"))
       << ',' << format_double(r.value("admissibility_min")) << ',' << (r.passed() ? "true" : "false");
    return os.str();
}

ScenarioConfig parse_scenario_config(const json& j, const VerifyOptions& base) {
    static const char* const kKeys[] = {"kind", "k", "r0", "psi0", "grid", "curves", "seed", "tolerances"};
    static const char* const kTolKeys[] = {
        "random_points", "perturbed_curves", "perturbation", "contact_tol", "msp_imag_tol",
        "msp_value_tol", "fiber_const_tol", "admissibility_tol", "closed_form_rel_tol",
        "identity_rel_tol", "boundary_tol", "quasi_invariance_slack", "boundary_samples"};
    auto known = [](const std::string& key, const auto& list) {
        for (const char* k : list)
            if (key == k) return true;
        return false;
    };
    try {
        if (!j.is_object()) throw InvalidParameters("scenario config must be a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!known(it.key(), kKeys)) throw InvalidParameters("unknown config key '" + it.key() + "'");
        if (!j.contains("kind")) throw InvalidParameters("scenario config needs 'kind'");
        ScenarioConfig cfg;
        cfg.kind = parse_scenario_kind(j.at("kind").get<std::string>());
        read_opt(j, "k", cfg.k);
        read_opt(j, "r0", cfg.r0);
        read_opt(j, "psi0", cfg.psi0);
        read_opt(j, "grid", cfg.grid);
        read_opt(j, "curves", cfg.curves);
        read_opt(j, "seed", cfg.seed);
        cfg.tolerances = base;
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            if (!t.is_object()) throw InvalidParameters("'tolerances' must be an object");
            for (auto it = t.begin(); it != t.end(); ++it)
                if (!known(it.key(), kTolKeys))
                    throw InvalidParameters("unknown tolerance key '" + it.key() + "'");
            VerifyOptions& o = cfg.tolerances;
            read_into(t, "random_points", o.random_points);
            read_into(t, "perturbed_curves", o.perturbed_curves);
            read_into(t, "perturbation", o.perturbation);
            read_into(t, "contact_tol", o.contact_tol);
            read_into(t, "msp_imag_tol", o.msp_imag_tol);
            read_into(t, "msp_value_tol", o.msp_value_tol);
            read_into(t, "fiber_const_tol", o.fiber_const_tol);
            read_into(t, "admissibility_tol", o.admissibility_tol);
            read_into(t, "closed_form_rel_tol", o.closed_form_rel_tol);
            read_into(t, "identity_rel_tol", o.identity_rel_tol);
            read_into(t, "boundary_tol", o.boundary_tol);
            read_into(t, "quasi_invariance_slack", o.quasi_invariance_slack);
            read_into(t, "boundary_samples", o.boundary_samples);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw InvalidParameters(std::string("malformed scenario config: ") + e.what());
    }
}

ScenarioConfig load_scenario_config(const std::string& path, const VerifyOptions& base) {
    std::ifstream in(path);
    if (!in) throw InvalidParameters("cannot open scenario config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidParameters("cannot parse '" + path + "': " + e.what());
    }
    return parse_scenario_config(j, base);
}

}  // namespace aa
