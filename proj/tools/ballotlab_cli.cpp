// ballotlab command-line front end.
//
//   ballotlab dist show <name|file> [--K k] [--json]
//   ballotlab exact <query-json> [--out file] [--csv law.csv]
//   ballotlab simulate <query-json> --trials T --seed S [--streams s] [--out file] [--csv file]
//   ballotlab scan <scan-config-json> --seed S --out report.json [--csv grid.csv]
//   ballotlab counterexample --family tower|heavy --K k --n n [--A a] [--k-rule n|sqrt_n] --trials T --seed S
//   ballotlab clt-compare --dist name --n-grid 100,400 [--x-rule zero|sqrt:c|x:v] --out table.csv
//   ballotlab validate <report.json>
//
// Exit codes: 0 success, 1 a scan pass flag failed, 2 malformed input.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ballotlab/approx.hpp"
#include "ballotlab/distributions.hpp"
#include "ballotlab/exactdp.hpp"
#include "ballotlab/harness.hpp"
#include "ballotlab/io.hpp"
#include "ballotlab/montecarlo.hpp"
#include "ballotlab/walkcore.hpp"

namespace bl = ballotlab;
using bl::Json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inline JSON, or @path to read it from a file.
Json load_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw UsageError("cannot open " + arg.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (!arg.empty() && arg.front() != '{' && std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("malformed JSON: ") + e.what());
    }
}

std::optional<int> level_of(const Json& q) {
    if (q.contains("K")) return q["K"].get<int>();
    return std::nullopt;
}

bl::StepDistribution dist_from_query(const Json& q) {
    if (!q.contains("dist")) throw UsageError("query needs a \"dist\" field");
    const auto& d = q["dist"];
    if (d.is_string()) return bl::builtin(d.get<std::string>(), level_of(q));
    return bl::dist_from_json(d);
}

bl::Rational rat(const Json& q, const char* key, const bl::Rational& fallback) {
    return q.contains(key) ? bl::rational_from_json(q[key]) : fallback;
}

bl::Rational rat_required(const Json& q, const char* key) {
    if (!q.contains(key)) throw UsageError(std::string("query needs \"") + key + "\"");
    return bl::rational_from_json(q[key]);
}

std::int64_t int_required(const Json& q, const char* key) {
    if (!q.contains(key) || !q[key].is_number_integer()) throw UsageError(std::string("query needs integer \"") + key + "\"");
    return q[key].get<std::int64_t>();
}

bl::Arithmetic mode_of(const Json& q) {
    const auto m = q.value("mode", "rational");
    if (m == "rational") return bl::Arithmetic::Rational;
    if (m == "float") return bl::Arithmetic::Float;
    throw UsageError("mode must be rational or float, got " + m);
}

void emit(const Json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw UsageError("cannot write " + out_path);
        out << text;
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    return out;
}

std::vector<std::int64_t> parse_grid(const Json& j) {
    std::vector<std::int64_t> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(v.get<std::int64_t>());
        return out;
    }
    if (j.is_object()) {
        // {"from": a, "to": b, "factor": 2} geometric, or "step" arithmetic
        const auto from = j.at("from").get<std::int64_t>();
        const auto to = j.at("to").get<std::int64_t>();
        if (j.contains("factor")) {
            const auto f = j["factor"].get<std::int64_t>();
            if (f < 2) throw UsageError("grid factor must be >= 2");
            for (auto n = from; n <= to; n *= f) out.push_back(n);
        } else {
            const auto step = j.value("step", std::int64_t{1});
            if (step < 1) throw UsageError("grid step must be >= 1");
            for (auto n = from; n <= to; n += step) out.push_back(n);
        }
        return out;
    }
    throw UsageError("n_grid must be an array or {from,to,factor|step}");
}

std::vector<std::int64_t> parse_grid_text(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw UsageError("bad n-grid entry '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty n-grid");
    return out;
}

// Rule literal: a number, "sqrt_n", or {"sqrt_n": factor}.
bl::ParamRule parse_rule(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "sqrt_n") return bl::ParamRule::sqrt_n();
    if (j.is_object() && j.contains("sqrt_n")) return bl::ParamRule::sqrt_n(bl::rational_from_json(j["sqrt_n"]));
    return bl::ParamRule::fixed(bl::rational_from_json(j));
}

std::vector<bl::ParamRule> parse_rules(const Json& j) {
    std::vector<bl::ParamRule> out;
    if (j.is_array()) {
        for (const auto& r : j) out.push_back(parse_rule(r));
    } else {
        out.push_back(parse_rule(j));
    }
    return out;
}

int cmd_dist_show(const std::string& which, std::optional<int> K, bool as_json) {
    std::optional<bl::LeveledDistribution> leveled;
    bl::StepDistribution dist = [&] {
        if (std::filesystem::exists(which)) return bl::dist_from_json(load_json_arg(which));
        auto [base, level] = bl::split_builtin_name(which);
        if (base == "tower" || base == "heavy") {
            leveled = bl::builtin_leveled(which, K);
            return leveled->base;
        }
        return bl::builtin(which, K);
    }();
    const auto li = bl::lattice_info(dist);
    const auto m2 = bl::moment(dist, 2, false);
    if (as_json) {
        Json j = leveled ? bl::leveled_to_json(*leveled) : bl::dist_to_json(dist);
        j["ballotlab_schema"] = bl::kSchemaVersion;
        j["kind"] = "distribution";
        j["mode"] = "rational";
        j["mean"] = bl::to_string(dist.mean());
        j["variance"] = bl::to_string(dist.variance_exact());
        j["second_moment"] = bl::to_string(*m2.exact);
        j["lattice"] = Json{{"span_h", bl::to_string(li.span_h)},
                            {"offset_z", bl::to_string(li.offset_z)},
                            {"period_d", bl::to_string(li.period_d)}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "distribution " << dist.label() << " (" << dist.atoms().size() << " atoms)\n";
    for (const auto& a : dist.atoms()) {
        std::cout << "  value " << bl::to_string(a.value) << "  prob " << bl::to_string(a.prob) << "  ("
                  << bl::format_g17(a.prob.get_d()) << ")\n";
    }
    std::cout << "mean " << bl::to_string(dist.mean()) << "\n";
    std::cout << "E[X^2] " << bl::to_string(*m2.exact) << " (" << bl::format_g17(m2.value) << ")\n";
    std::cout << "variance " << bl::to_string(dist.variance_exact()) << "\n";
    std::cout << "E|X|^1.5 " << bl::format_g17(bl::moment(dist, 1.5, true).value) << "\n";
    std::cout << "lattice span_h " << bl::to_string(li.span_h) << " offset_z " << bl::to_string(li.offset_z)
              << " period_d " << bl::to_string(li.period_d) << "\n";
    if (leveled) {
        std::cout << "levels (family " << bl::family_name(leveled->family) << ", K=" << leveled->max_level
                  << ", folded tail " << bl::format_g17(leveled->folded_tail_mass) << ")\n";
        for (const auto& l : leveled->levels) {
            std::cout << "  k=" << l.k << " value " << l.value << " per-sign " << bl::to_string(l.per_sign_prob)
                      << (l.approximated ? " (nearest double)" : "") << "\n";
        }
    }
    return 0;
}

bl::Multiset multiset_of(const Json& q) {
    std::vector<bl::Rational> elems;
    for (const auto& e : q.at("multiset")) elems.push_back(bl::rational_from_json(e));
    return bl::Multiset(std::move(elems));
}

Json run_exact(const Json& q, const std::string& law_csv) {
    const auto op = q.value("op", "");
    if (op == "permutation") {
        return bl::prob_result_to_json(bl::permutation_positive_prob(multiset_of(q), bl::PermutationMode::Exact));
    }
    const auto dist = dist_from_query(q);
    const auto mode = mode_of(q);
    bl::DpOptions dp;
    if (q.contains("state_cap")) dp.state_cap = q["state_cap"].get<std::int64_t>();
    if (op == "conditional_ballot" || op == "positive_window") {
        auto wq = bl::WalkQuery::make(dist, int_required(q, "n"), rat_required(q, "k"), rat_required(q, "A"));
        auto r = op == "conditional_ballot" ? bl::conditional_ballot_prob(wq, mode, dp)
                                            : bl::positive_path_window_prob(wq, mode, dp);
        return bl::prob_result_to_json(r);
    }
    if (op == "endpoint_window") {
        return bl::prob_result_to_json(
            bl::endpoint_window_prob(dist, int_required(q, "n"), rat_required(q, "k"), rat_required(q, "A"), mode, dp));
    }
    if (op == "positive_prefix") {
        return bl::prob_result_to_json(bl::positive_prefix_prob(dist, int_required(q, "m"), mode, dp));
    }
    if (op == "stopping_tail") {
        return bl::prob_result_to_json(bl::stopping_time_tail(dist, int_required(q, "n"), rat(q, "h", 0), mode, dp));
    }
    if (op == "second_moment") {
        std::optional<bl::Rational> threshold;
        if (q.contains("threshold")) threshold = bl::rational_from_json(q["threshold"]);
        return bl::quantity_to_json(
            bl::conditional_second_moment(dist, int_required(q, "n"), rat(q, "h", 0), threshold, mode, dp));
    }
    if (op == "spread_sup") {
        return bl::quantity_to_json(bl::spread_sup(dist, int_required(q, "n"), rat(q, "width", 1), mode, dp));
    }
    if (op == "endpoint_law") {
        const auto c = q.value("constraint", "none");
        bl::Constraint constraint = c == "none" ? bl::Constraint::none()
                                    : c == "strictly-positive-interior" ? bl::Constraint::positive_interior()
                                    : c == "at-least" ? bl::Constraint::at_least(rat(q, "h", 0))
                                                      : throw UsageError("unknown constraint " + c);
        const auto n = int_required(q, "n");
        Json out;
        auto fill = [&](const auto& law) {
            out["mode"] = mode == bl::Arithmetic::Rational ? "rational" : "float";
            Json points = Json::array();
            double total = 0;
            for (std::size_t i = 0; i < law.size(); ++i) {
                if (law.mass[i] == 0) continue;
                Json p{{"x", bl::to_string(law.point(i))}, {"mass", law.mass_double(i)}};
                if constexpr (std::is_same_v<std::decay_t<decltype(law.mass[0])>, bl::Integer>) {
                    p["exact"] = bl::to_string(law.mass_at(i));
                }
                total += law.mass_double(i);
                points.push_back(p);
            }
            out["value"] = total;
            out["constraint"] = law.constraint.name();
            out["points"] = points;
            out["stderr"] = 0.0;
            out["trials"] = 0;
            out["hits"] = 0;
            out["seed"] = 0;
            out["flags"] = Json::array();
            if (!law_csv.empty()) {
                auto os = open_out(law_csv);
                bl::write_law_csv(os, law);
            }
        };
        if (mode == bl::Arithmetic::Rational) {
            fill(bl::constrained_endpoint_law<bl::Integer>(dist, n, constraint, dp));
        } else {
            fill(bl::constrained_endpoint_law<double>(dist, n, constraint, dp));
        }
        return out;
    }
    throw UsageError("unknown exact op '" + op + "'");
}

Json run_simulate(const Json& q, const bl::McConfig& cfg) {
    const auto op = q.value("op", "event");
    if (op == "permutation") {
        return bl::prob_result_to_json(bl::permutation_positive_prob(multiset_of(q), bl::PermutationMode::MonteCarlo, cfg));
    }
    if (op == "chernoff_rand") {
        auto c = bl::chernoff_rand_check(int_required(q, "m"), q.at("q").get<double>(), q.at("v").get<double>(),
                                         q.at("t").get<double>(), cfg);
        Json out = bl::chernoff_check_to_json(c);
        out.erase("ballotlab_schema");
        out.erase("kind");
        out["value"] = c.upper_emp;
        out["stderr"] = c.upper_stderr;
        out["hits"] = c.upper_hits;
        out["flags"] = Json::array();
        return out;
    }
    const auto dist = dist_from_query(q);
    const auto n = q.contains("n") ? int_required(q, "n") : int_required(q, "m");
    if (op == "conditional_ballot") {
        return bl::prob_result_to_json(
            bl::estimate_conditional(dist, n, rat_required(q, "k"), rat_required(q, "A"), cfg));
    }
    bl::WalkEvent ev;
    if (op == "positive_window") {
        ev.positivity = bl::Positivity::Interior;
        ev.window_k = rat_required(q, "k");
        ev.window_a = rat_required(q, "A");
    } else if (op == "endpoint_window") {
        ev.window_k = rat_required(q, "k");
        ev.window_a = rat_required(q, "A");
    } else if (op == "positive_prefix") {
        ev.positivity = bl::Positivity::Prefix;
    } else if (op == "stopping_tail") {
        ev.barrier_h = rat(q, "h", 0);
    } else if (op == "event") {
        const auto p = q.value("positivity", "none");
        ev.positivity = p == "interior" ? bl::Positivity::Interior
                        : p == "prefix" ? bl::Positivity::Prefix
                        : p == "none"   ? bl::Positivity::None
                                        : throw UsageError("positivity must be none, interior or prefix");
        if (q.contains("h")) ev.barrier_h = bl::rational_from_json(q["h"]);
        if (q.contains("k") || q.contains("A")) {
            ev.window_k = rat_required(q, "k");
            ev.window_a = rat_required(q, "A");
        }
    } else {
        throw UsageError("unknown simulate op '" + op + "'");
    }
    return bl::prob_result_to_json(bl::estimate_event(dist, n, ev, cfg));
}

int run_scan(const Json& cfg_json, std::uint64_t seed, const std::string& out, const std::string& csv) {
    const auto kind = cfg_json.value("scan", "");
    const auto dist = dist_from_query(cfg_json);
    const auto grid = parse_grid(cfg_json.at("n_grid"));
    bl::ScanOptions opts;
    opts.mode = cfg_json.value("mode", "float") == "rational" ? bl::Arithmetic::Rational : bl::Arithmetic::Float;
    opts.mc.seed = seed;
    opts.mc.trials = cfg_json.value("trials", std::uint64_t{1'000'000});
    opts.mc.stream_count = cfg_json.value("streams", bl::defaults::kStreams);
    if (cfg_json.contains("state_cap")) opts.dp.state_cap = cfg_json["state_cap"].get<std::int64_t>();
    bl::BoundReport rep;
    if (kind == "ballot") {
        opts.threshold = cfg_json.value("threshold", bl::defaults::kBallotRatioSpread);
        rep = bl::scan_ballot_ratio(dist, grid, parse_rules(cfg_json.at("k_rule")), rat_required(cfg_json, "A"), opts);
    } else if (kind == "stopping") {
        opts.threshold = cfg_json.value("threshold", bl::defaults::kStoppingRatioSpread);
        rep = bl::scan_stopping(dist, grid, parse_rules(cfg_json.value("h_rule", Json(0))), opts);
    } else if (kind == "spread") {
        opts.threshold = cfg_json.value("threshold", bl::defaults::kSpreadRatioSpread);
        rep = bl::scan_spread(dist, grid, opts);
    } else if (kind == "second_moment") {
        opts.threshold = cfg_json.value("threshold", bl::defaults::kSecondMomentRatioSpread);
        std::optional<double> eps;
        if (cfg_json.contains("eps")) eps = cfg_json["eps"].get<double>();
        rep = bl::scan_second_moment(dist, grid, parse_rules(cfg_json.value("h_rule", Json(0))), eps, opts);
    } else {
        throw UsageError("scan must be ballot, stopping, spread or second_moment");
    }
    Json config = cfg_json;
    config["seed"] = seed;
    emit(bl::bound_report_to_json(rep, config), out);
    if (!csv.empty()) {
        auto os = open_out(csv);
        bl::write_bound_report_csv(os, rep);
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ballotlab: exact and Monte Carlo ballot-type probabilities for random walks"};
    app.require_subcommand(1);

    auto* dist_cmd = app.add_subcommand("dist", "Inspect a step distribution");
    auto* show = dist_cmd->add_subcommand("show", "Atoms, moments and lattice data");
    dist_cmd->require_subcommand(1);
    std::string show_which;
    std::optional<int> show_K;
    bool show_json = false;
    show->add_option("dist", show_which, "built-in name or JSON literal file")->required();
    show->add_option("--K", show_K, "level count for tower/heavy");
    show->add_flag("--json", show_json, "emit JSON");

    auto* exact = app.add_subcommand("exact", "Exact dynamic-programming query");
    std::string exact_query, exact_out, exact_csv;
    exact->add_option("query", exact_query, "query JSON (inline or @file)")->required();
    exact->add_option("--out", exact_out, "write the JSON record here");
    exact->add_option("--csv", exact_csv, "endpoint_law: write the law table as CSV");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate");
    std::string sim_query, sim_out, sim_csv;
    std::optional<std::uint64_t> sim_seed;
    std::uint64_t sim_trials = 1'000'000;
    std::uint32_t sim_streams = bl::defaults::kStreams;
    std::uint64_t sim_min_hits = bl::defaults::kMinHits;
    sim->add_option("query", sim_query, "query JSON (inline or @file)")->required();
    sim->add_option("--trials", sim_trials, "number of trials");
    sim->add_option("--seed", sim_seed, "master seed (required)");
    sim->add_option("--streams", sim_streams, "pseudo-random stream count");
    sim->add_option("--min-hits", sim_min_hits, "hits below this flag low_precision");
    sim->add_option("--out", sim_out, "write the JSON record here");
    sim->add_option("--csv", sim_csv, "also write a CSV row");

    auto* scan = app.add_subcommand("scan", "Scaling scan with pass/fail report");
    std::string scan_cfg, scan_out, scan_csv;
    std::optional<std::uint64_t> scan_seed;
    scan->add_option("config", scan_cfg, "scan config JSON (inline or @file)")->required();
    scan->add_option("--seed", scan_seed, "master seed (required)");
    scan->add_option("--out", scan_out, "report JSON path")->required();
    scan->add_option("--csv", scan_csv, "grid CSV path");

    auto* ce = app.add_subcommand("counterexample", "Finite-n report for the tower/heavy laws");
    std::string ce_family = "tower", ce_rule = "n", ce_out, ce_A = "1", ce_mode = "rational";
    int ce_K = 1;
    std::int64_t ce_n = 16;
    std::uint64_t ce_trials = 100'000;
    std::optional<std::uint64_t> ce_seed;
    ce->add_option("--family", ce_family, "tower or heavy")->check(CLI::IsMember({"tower", "heavy"}));
    ce->add_option("--K", ce_K, "number of heavy levels")->required();
    ce->add_option("--n", ce_n, "number of steps")->required();
    ce->add_option("--A", ce_A, "window width");
    ce->add_option("--k-rule", ce_rule, "target k: n or sqrt_n")->check(CLI::IsMember({"n", "sqrt_n"}));
    ce->add_option("--mode", ce_mode, "rational or float")->check(CLI::IsMember({"rational", "float"}));
    ce->add_option("--trials", ce_trials, "Monte Carlo trials");
    ce->add_option("--seed", ce_seed, "master seed (required)");
    ce->add_option("--out", ce_out, "report JSON path");

    auto* clt = app.add_subcommand("clt-compare", "Exact point masses against the local CLT");
    std::string clt_dist, clt_grid, clt_rule = "zero", clt_out;
    std::optional<int> clt_K;
    bool clt_no_span = false;
    clt->add_option("--dist", clt_dist, "built-in name or JSON literal file")->required();
    clt->add_option("--K", clt_K, "level count for tower/heavy");
    clt->add_option("--n-grid", clt_grid, "comma-separated n values")->required();
    clt->add_option("--x-rule", clt_rule, "zero, sqrt:c or x:value");
    clt->add_flag("--no-span", clt_no_span, "drop the lattice span factor");
    clt->add_option("--out", clt_out, "CSV path (stdout when omitted)");

    auto* validate = app.add_subcommand("validate", "Check a report against the schema");
    std::string validate_path;
    validate->add_option("report", validate_path, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*show) return cmd_dist_show(show_which, show_K, show_json);
        if (*exact) {
            const Json q = load_json_arg(exact_query);
            emit(bl::result_record(q, run_exact(q, exact_csv)), exact_out);
            return 0;
        }
        if (*sim) {
            if (!sim_seed) throw UsageError("simulate requires --seed");
            bl::McConfig cfg;
            cfg.trials = sim_trials;
            cfg.seed = *sim_seed;
            cfg.stream_count = sim_streams;
            cfg.min_hits = sim_min_hits;
            const Json q = load_json_arg(sim_query);
            const Json rec = bl::result_record(q, run_simulate(q, cfg));
            emit(rec, sim_out);
            if (!sim_csv.empty()) {
                auto os = open_out(sim_csv);
                bl::write_result_csv(os, {rec});
            }
            return 0;
        }
        if (*scan) {
            if (!scan_seed) throw UsageError("scan requires --seed");
            return run_scan(load_json_arg(scan_cfg), *scan_seed, scan_out, scan_csv);
        }
        if (*ce) {
            if (!ce_seed) throw UsageError("counterexample requires --seed");
            bl::McConfig cfg;
            cfg.trials = ce_trials;
            cfg.seed = *ce_seed;
            cfg.stream_count = std::min<std::uint64_t>(bl::defaults::kStreams, ce_trials);
            auto rep = bl::counterexample_report(
                ce_family == "tower" ? bl::LeveledFamily::Tower : bl::LeveledFamily::Heavy, ce_K, ce_n,
                bl::parse_rational(ce_A), ce_rule == "n" ? bl::TargetRule::N : bl::TargetRule::SqrtN, cfg,
                ce_mode == "rational" ? bl::Arithmetic::Rational : bl::Arithmetic::Float);
            emit(bl::counterexample_to_json(rep), ce_out);
            return 0;
        }
        if (*clt) {
            const auto dist = std::filesystem::exists(clt_dist) ? bl::dist_from_json(load_json_arg(clt_dist))
                                                                : bl::builtin(clt_dist, clt_K);
            bl::XRule rule = bl::XRule::zero();
            if (clt_rule.rfind("sqrt:", 0) == 0) {
                rule = bl::XRule::sqrt_multiple(std::stod(clt_rule.substr(5)));
            } else if (clt_rule.rfind("x:", 0) == 0) {
                rule = bl::XRule::at(bl::parse_rational(clt_rule.substr(2)));
            } else if (clt_rule != "zero") {
                throw UsageError("x-rule must be zero, sqrt:c or x:value");
            }
            const auto rows = bl::clt_compare(dist, parse_grid_text(clt_grid), rule, !clt_no_span);
            if (clt_out.empty()) {
                bl::write_clt_csv(std::cout, rows);
            } else {
                auto os = open_out(clt_out);
                bl::write_clt_csv(os, rows);
            }
            return 0;
        }
        if (*validate) {
            const auto problem = bl::validate_report(load_json_arg(validate_path));
            if (!problem.empty()) throw UsageError("invalid report: " + problem);
            std::cout << "valid\n";
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed query: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
