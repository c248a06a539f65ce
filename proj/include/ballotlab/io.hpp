#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ballotlab/approx.hpp"
#include "ballotlab/distributions.hpp"
#include "ballotlab/error.hpp"
#include "ballotlab/exactdp.hpp"
#include "ballotlab/harness.hpp"
#include "ballotlab/montecarlo.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// %.17g rendering, the float-mode output format.
inline std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline Json integer_to_json(const Integer& z) {
    if (z.fits_slong_p()) return Json(z.get_si());
    return Json(z.get_str());
}

inline Integer integer_from_json(const Json& j) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>(), 10);
        } catch (const std::invalid_argument&) {
        }
    }
    throw Error(ErrorCode::ParseError, "expected an integer, got " + j.dump());
}

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json rational_json(const Rational& q) { return Json(to_string(q)); }

}  // namespace detail

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer() || j.is_number_unsigned()) return Rational(detail::integer_from_json(j));
    if (j.is_number_float()) return Rational(j.get<double>());
    throw Error(ErrorCode::ParseError, "expected a rational, got " + j.dump());
}

// {"label": str, "atoms": [[value_num, value_den, prob_num, prob_den], ...]}
inline Json dist_to_json(const StepDistribution& dist) {
    dist.require_finite("JSON export");
    Json atoms = Json::array();
    for (const auto& a : dist.atoms()) {
        atoms.push_back(Json::array({detail::integer_to_json(a.value.get_num()),
                                     detail::integer_to_json(a.value.get_den()),
                                     detail::integer_to_json(a.prob.get_num()),
                                     detail::integer_to_json(a.prob.get_den())}));
    }
    return Json{{"label", dist.label()}, {"atoms", atoms}};
}

inline StepDistribution dist_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
        throw Error(ErrorCode::ParseError, "distribution literal needs an \"atoms\" array");
    }
    std::vector<Atom> atoms;
    for (const auto& row : j["atoms"]) {
        if (!row.is_array() || row.size() != 4) {
            throw Error(ErrorCode::ParseError, "atom must be [value_num, value_den, prob_num, prob_den]");
        }
        atoms.push_back({make_rational(detail::integer_from_json(row[0]), detail::integer_from_json(row[1])),
                         make_rational(detail::integer_from_json(row[2]), detail::integer_from_json(row[3]))});
    }
    const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "custom";
    return StepDistribution::finite(std::move(atoms), label);
}

inline Json leveled_to_json(const LeveledDistribution& ld) {
    Json out = dist_to_json(ld.base);
    out["family"] = family_name(ld.family);
    out["max_level"] = ld.max_level;
    out["exponent"] = ld.exponent;
    out["folded_tail_mass"] = ld.folded_tail_mass;
    Json levels = Json::array();
    for (const auto& l : ld.levels) {
        levels.push_back(Json{{"k", l.k},
                              {"value", l.value},
                              {"per_sign_prob_num", detail::integer_to_json(l.per_sign_prob.get_num())},
                              {"per_sign_prob_den", detail::integer_to_json(l.per_sign_prob.get_den())},
                              {"approximated", l.approximated}});
    }
    out["levels"] = levels;
    return out;
}

inline LeveledDistribution leveled_from_json(const Json& j) {
    LeveledDistribution ld;
    ld.base = dist_from_json(j);
    if (!j.contains("levels") || !j["levels"].is_array()) {
        throw Error(ErrorCode::ParseError, "leveled distribution needs a \"levels\" array");
    }
    const std::string family = j.value("family", "tower");
    ld.family = family == "heavy" ? LeveledFamily::Heavy : LeveledFamily::Tower;
    ld.max_level = j.value("max_level", 0);
    ld.exponent = j.value("exponent", family == "heavy" ? 1.5 : 4.0);
    ld.folded_tail_mass = j.value("folded_tail_mass", 0.0);
    for (const auto& lj : j["levels"]) {
        Level l;
        l.k = lj.at("k").get<int>();
        l.value = lj.at("value").get<std::uint64_t>();
        l.per_sign_prob = make_rational(detail::integer_from_json(lj.at("per_sign_prob_num")),
                                        detail::integer_from_json(lj.at("per_sign_prob_den")));
        l.approximated = lj.value("approximated", false);
        ld.levels.push_back(l);
    }
    return ld;
}

inline Json prob_result_to_json(const ProbResult& r) {
    Json out;
    out["mode"] = r.method == Method::ExactRational ? "rational" : r.method == Method::ExactFloat ? "float" : "monte-carlo";
    out["method"] = method_name(r.method);
    out["value"] = r.value;
    out["value_g17"] = format_g17(r.value);
    if (r.exact) out["exact"] = to_string(*r.exact);
    out["stderr"] = r.std_error;
    out["trials"] = r.trials;
    out["hits"] = r.hits;
    out["seed"] = r.seed;
    if (r.method == Method::ExactFloat) out["error_bound"] = r.error_bound;
    if (r.method == Method::MonteCarlo) out["paths"] = r.paths;
    Json flags = Json::array();
    if (r.low_precision) flags.push_back("low_precision");
    out["flags"] = flags;
    return out;
}

inline Json quantity_to_json(const Quantity& q) {
    Json out;
    out["mode"] = q.exact ? "rational" : "float";
    out["value"] = q.value;
    out["value_g17"] = format_g17(q.value);
    if (q.exact) out["exact"] = to_string(*q.exact);
    else out["error_bound"] = q.error_bound;
    return out;
}

// The machine-readable record shared by `exact` and `simulate`.
inline Json result_record(const Json& query, const Json& result) {
    Json out;
    out["ballotlab_schema"] = kSchemaVersion;
    out["kind"] = "result";
    out["query"] = query;
    for (auto it = result.begin(); it != result.end(); ++it) out[it.key()] = it.value();
    return out;
}

inline Json bound_report_to_json(const BoundReport& rep, const Json& config = Json::object()) {
    Json out;
    out["ballotlab_schema"] = kSchemaVersion;
    out["kind"] = "bound_report";
    out["defaults_version"] = defaults::kVersion;
    out["scan"] = rep.scan;
    out["dist"] = rep.dist_label;
    out["normalization"] = rep.normalization;
    out["config"] = config;
    out["mode"] = rep.grid.empty() || rep.grid.front().exact ? "rational" : "float";
    Json grid = Json::array();
    for (const auto& c : rep.grid) {
        Json cell;
        cell["n"] = c.n;
        cell["rule"] = c.rule;
        cell["requested"] = to_string(c.requested);
        cell["param"] = to_string(c.param);
        cell["snapped"] = c.snapped;
        cell["raw_prob"] = c.raw;
        if (c.exact) cell["exact"] = to_string(*c.exact);
        cell["normalized_ratio"] = c.normalized;
        cell["method"] = method_name(c.method);
        cell["stderr"] = c.std_error;
        cell["error_bound"] = c.error_bound;
        cell["seed"] = c.seed;
        cell["reachable"] = c.reachable;
        grid.push_back(cell);
    }
    out["grid"] = grid;
    out["ratio_min"] = detail::finite_or_null(rep.ratio_min);
    out["ratio_max"] = detail::finite_or_null(rep.ratio_max);
    out["fitted_lower_c"] = detail::finite_or_null(rep.fitted_lower_c);
    out["fitted_upper_C"] = detail::finite_or_null(rep.fitted_upper_C);
    out["threshold"] = rep.threshold;
    out["pass"] = rep.pass;
    return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

}  // namespace detail

inline void write_bound_report_csv(std::ostream& os, const BoundReport& rep) {
    detail::csv_row(os, {"scan", "n", "rule", "requested", "param", "snapped", "raw_prob", "exact", "normalized_ratio",
                         "method", "stderr", "error_bound", "seed", "reachable"});
    for (const auto& c : rep.grid) {
        detail::csv_row(os, {rep.scan, std::to_string(c.n), c.rule, to_string(c.requested), to_string(c.param),
                             c.snapped ? "1" : "0", format_g17(c.raw), c.exact ? to_string(*c.exact) : "",
                             format_g17(c.normalized), method_name(c.method), format_g17(c.std_error),
                             format_g17(c.error_bound), std::to_string(c.seed), c.reachable ? "1" : "0"});
    }
}

// Result records as CSV with the JSON record's columns.
inline void write_result_csv(std::ostream& os, const std::vector<Json>& records) {
    detail::csv_row(os, {"query", "value", "stderr", "trials", "hits", "seed", "flags"});
    for (const auto& r : records) {
        std::string flags;
        for (const auto& f : r.value("flags", Json::array())) {
            if (!flags.empty()) flags += ';';
            flags += f.get<std::string>();
        }
        detail::csv_row(os, {r["query"].dump(), format_g17(r["value"].get<double>()),
                             format_g17(r.value("stderr", 0.0)), std::to_string(r.value("trials", std::uint64_t{0})),
                             std::to_string(r.value("hits", std::uint64_t{0})),
                             std::to_string(r.value("seed", std::uint64_t{0})), flags});
    }
}

// Columns lattice_point_num, lattice_point_den, mass, constraint.
template <class W>
void write_law_csv(std::ostream& os, const PathLawTable<W>& law) {
    detail::csv_row(os, {"lattice_point_num", "lattice_point_den", "mass", "constraint"});
    const std::string name = law.constraint.name();
    for (std::size_t i = 0; i < law.size(); ++i) {
        const double m = law.mass_double(i);
        if (m == 0) continue;
        const Rational x = law.point(i);
        detail::csv_row(os, {to_string(x.get_num()), to_string(x.get_den()), format_g17(m), name});
    }
}

inline void write_clt_csv(std::ostream& os, const std::vector<CltRow>& rows) {
    detail::csv_row(os, {"n", "x_num", "x_den", "exact", "approx", "rel_error"});
    for (const auto& r : rows) {
        detail::csv_row(os, {std::to_string(r.n), to_string(r.x.get_num()), to_string(r.x.get_den()),
                             format_g17(r.exact), format_g17(r.approx), format_g17(r.rel_error)});
    }
}

inline Json level_summary_to_json(const LevelSummary& s) {
    Json out;
    out["n"] = s.n;
    out["trials"] = s.trials;
    out["seed"] = s.seed;
    Json levels = Json::array();
    for (const auto& [k, st] : s.levels) {
        Json hist = Json::array();
        for (const auto& [c, f] : st.count_histogram) hist.push_back(Json::array({c, f}));
        levels.push_back(Json{{"level", k},
                              {"mean_count", st.mean_count},
                              {"count_stderr", st.count_stderr},
                              {"mean_abs_sum", st.mean_abs_sum},
                              {"max_abs_sum", st.max_abs_sum},
                              {"count_histogram", hist}});
    }
    out["levels"] = levels;
    return out;
}

inline Json counterexample_to_json(const CounterexampleReport& rep) {
    Json out;
    out["ballotlab_schema"] = kSchemaVersion;
    out["kind"] = "counterexample_report";
    out["label"] = rep.label;
    out["family"] = family_name(rep.family);
    out["K"] = rep.K;
    out["n"] = rep.n;
    out["A"] = to_string(rep.window_a);
    out["target_k_rule"] = rep.rule == TargetRule::N ? "n" : "sqrt_n";
    out["k"] = to_string(rep.k);
    out["dist"] = rep.dist_label;
    out["mode"] = rep.endpoint.method == Method::ExactRational ? "rational"
                  : rep.endpoint.method == Method::ExactFloat ? "float"
                                                              : "monte-carlo";
    out["endpoint_window_prob"] = prob_result_to_json(rep.endpoint);
    out["joint_prob"] = prob_result_to_json(rep.joint);
    out["conditional"] = rep.conditional ? prob_result_to_json(*rep.conditional) : Json(nullptr);
    out["bertrand_k_over_n"] = rep.bertrand;
    out["ratio_to_bertrand"] = rep.ratio_to_bertrand;
    out["mc_conditional"] = rep.mc_conditional ? prob_result_to_json(*rep.mc_conditional) : Json(nullptr);
    out["mc_note"] = rep.mc_note;
    out["levels"] = level_summary_to_json(rep.levels);
    out["untestable_at_desk_scale"] = rep.untestable;
    return out;
}

inline Json chernoff_check_to_json(const ChernoffCheck& c) {
    Json out;
    out["ballotlab_schema"] = kSchemaVersion;
    out["kind"] = "chernoff_check";
    out["mode"] = "monte-carlo";
    out["m"] = c.m;
    out["q"] = c.q;
    out["v"] = c.v;
    out["t"] = c.t;
    out["upper_emp"] = c.upper_emp;
    out["lower_emp"] = c.lower_emp;
    out["upper_stderr"] = c.upper_stderr;
    out["lower_stderr"] = c.lower_stderr;
    out["upper_bound"] = c.upper_bound;
    out["lower_bound"] = c.lower_bound;
    out["trials"] = c.trials;
    out["seed"] = c.seed;
    return out;
}

// Checks a report emitted by this library. Returns an empty string when valid,
// otherwise a one-line description of the first problem.
inline std::string validate_report(const Json& j) {
    if (!j.is_object()) return "report is not a JSON object";
    if (!j.contains("ballotlab_schema") || j["ballotlab_schema"] != kSchemaVersion) {
        return "missing or unsupported ballotlab_schema";
    }
    if (!j.contains("kind") || !j["kind"].is_string()) return "missing kind";
    if (!j.contains("mode") || !j["mode"].is_string()) return "missing mode";
    const auto kind = j["kind"].get<std::string>();
    auto need = [&](std::initializer_list<const char*> keys) -> std::string {
        for (const char* k : keys) {
            if (!j.contains(k)) return std::string("missing field ") + k;
        }
        return "";
    };
    if (kind == "result") {
        if (auto e = need({"query", "value", "stderr", "trials", "hits", "seed", "flags"}); !e.empty()) return e;
        if (!j["value"].is_number()) return "value is not a number";
        const double v = j["value"].get<double>();
        if (j["query"].value("op", "") != "second_moment" && (v < 0 || v > 1)) return "probability outside [0,1]";
        return "";
    }
    if (kind == "bound_report") {
        if (auto e = need({"scan", "dist", "grid", "ratio_min", "ratio_max", "fitted_lower_c", "fitted_upper_C",
                           "threshold", "pass"});
            !e.empty())
            return e;
        if (!j["grid"].is_array()) return "grid is not an array";
        for (const auto& c : j["grid"]) {
            for (const char* k : {"n", "raw_prob", "normalized_ratio", "method", "reachable"}) {
                if (!c.contains(k)) return std::string("grid cell missing ") + k;
            }
            if (c["reachable"].get<bool>() && !j["ratio_min"].is_null()) {
                const double r = c["normalized_ratio"].get<double>();
                if (r < j["ratio_min"].get<double>() || r > j["ratio_max"].get<double>()) {
                    return "grid ratio outside [ratio_min, ratio_max]";
                }
            }
        }
        return "";
    }
    if (kind == "counterexample_report") {
        return need({"label", "family", "K", "n", "k", "endpoint_window_prob", "joint_prob", "conditional",
                     "bertrand_k_over_n", "levels", "untestable_at_desk_scale"});
    }
    if (kind == "chernoff_check") {
        return need({"m", "q", "v", "t", "upper_emp", "lower_emp", "upper_bound", "lower_bound", "trials", "seed"});
    }
    if (kind == "distribution") return need({"atoms", "lattice"});
    return "unknown kind '" + kind + "'";
}

}  // namespace ballotlab
