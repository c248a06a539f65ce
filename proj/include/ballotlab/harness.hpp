#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ballotlab/defaults.hpp"
#include "ballotlab/distributions.hpp"
#include "ballotlab/exactdp.hpp"
#include "ballotlab/montecarlo.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

// Scan parameter as a function of n: a fixed value, or factor * s(n) where
// s(n) is ceil(sqrt(n)) snapped up to the lattice of S_n.
struct ParamRule {
    enum class Kind { Fixed, SqrtN };
    Kind kind = Kind::Fixed;
    Rational value = 0;
    Rational factor = 1;

    static ParamRule fixed(Rational v) { return {Kind::Fixed, std::move(v), 1}; }
    static ParamRule sqrt_n(Rational factor = 1) { return {Kind::SqrtN, 0, std::move(factor)}; }

    Rational resolve(const LatticeInfo& li, std::int64_t n) const {
        if (kind == Kind::Fixed) return value;
        const auto root = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12));
        const Rational base = li.is_lattice ? li.snap_up(n, Rational(root)) : Rational(root);
        return factor * base;
    }

    std::string describe() const {
        if (kind == Kind::Fixed) return to_string(value);
        return factor == 1 ? "snap(ceil(sqrt n))" : to_string(factor) + "*snap(ceil(sqrt n))";
    }
};

struct BoundCell {
    std::int64_t n = 0;
    std::string rule;
    Rational requested = 0;
    Rational param = 0;  // k or h actually used
    bool snapped = false;
    double raw = 0;
    std::optional<Rational> exact;
    double normalized = 0;
    Method method = Method::ExactFloat;
    double std_error = 0;
    double error_bound = 0;
    std::uint64_t seed = 0;
    bool reachable = true;
};

struct BoundReport {
    std::string scan;
    std::string dist_label;
    std::string normalization;
    std::vector<BoundCell> grid;
    double ratio_min = 0;
    double ratio_max = 0;
    double fitted_lower_c = 0;
    double fitted_upper_C = 0;
    double threshold = 0;
    bool pass = false;

    // Ratio statistics over reachable cells; pass iff ratio_max/ratio_min <= threshold.
    void finalize() {
        ratio_min = std::numeric_limits<double>::infinity();
        ratio_max = 0;
        for (const auto& c : grid) {
            if (!c.reachable) continue;
            ratio_min = std::min(ratio_min, c.normalized);
            ratio_max = std::max(ratio_max, c.normalized);
        }
        if (ratio_max == 0) {
            ratio_min = 0;
            pass = false;
        } else {
            pass = ratio_max / ratio_min <= threshold;
        }
        fitted_lower_c = ratio_min;
        fitted_upper_C = ratio_max;
    }

    double spread() const { return ratio_min > 0 ? ratio_max / ratio_min : std::numeric_limits<double>::infinity(); }
};

struct ScanOptions {
    Arithmetic mode = Arithmetic::Float;
    DpOptions dp;
    double threshold = defaults::kBallotRatioSpread;
    // Fallback Monte Carlo when the DP state space is too large; its seed is
    // the master seed and each cell derives its own.
    McConfig mc;
    bool allow_mc = true;
};

namespace detail {

inline void fill_exact(BoundCell& cell, const ProbResult& r) {
    cell.raw = r.value;
    cell.exact = r.exact;
    cell.method = r.method;
    cell.error_bound = r.error_bound;
}

inline void fill_mc(BoundCell& cell, const ProbResult& r) {
    cell.raw = r.value;
    cell.method = Method::MonteCarlo;
    cell.std_error = r.std_error;
    cell.seed = r.seed;
}

inline McConfig cell_config(const ScanOptions& opts, std::uint64_t a, std::uint64_t b) {
    McConfig cfg = opts.mc;
    cfg.seed = derive_seed(opts.mc.seed, {a, b});
    return cfg;
}

template <class W>
ProbResult law_window(const PathLawTable<W>& law, const Rational& lo, const Rational& hi) {
    return to_prob<W>(law.window_mass(lo, hi), law.error_bound);
}

}  // namespace detail

// normalized = P{k <= S_n < k+A, S_i > 0, 0<i<n} * n^{3/2} / max{k,1}.
inline BoundReport scan_ballot_ratio(const StepDistribution& dist, const std::vector<std::int64_t>& n_grid,
                                     const std::vector<ParamRule>& k_rules, const Rational& window_a,
                                     const ScanOptions& opts = {}) {
    const auto li = lattice_info(dist);
    if (!li.acceptable(window_a)) {
        throw Error(ErrorCode::NotAcceptable, "window A=" + to_string(window_a) + " is below the span of '" +
                                                  dist.label() + "'");
    }
    BoundReport report;
    report.scan = "ballot";
    report.dist_label = dist.label();
    report.normalization = "P * n^(3/2) / max(k,1)";
    report.threshold = opts.threshold;
    for (auto n : n_grid) {
        std::optional<PathLawTable<Integer>> exact_law;
        std::optional<PathLawTable<double>> float_law;
        try {
            if (opts.mode == Arithmetic::Rational) {
                exact_law = constrained_endpoint_law<Integer>(dist, n, Constraint::positive_interior(), opts.dp);
            } else {
                float_law = constrained_endpoint_law<double>(dist, n, Constraint::positive_interior(), opts.dp);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::StateSpaceTooLarge || !opts.allow_mc) throw;
        }
        for (std::size_t r = 0; r < k_rules.size(); ++r) {
            BoundCell cell;
            cell.n = n;
            cell.rule = k_rules[r].describe();
            cell.requested = k_rules[r].resolve(li, n);
            cell.param = li.snap_up(n, cell.requested);
            cell.snapped = cell.param != cell.requested;
            if (cell.param <= 0) cell.param = li.snap_up(n, Rational(cell.param + li.span_h));
            const Rational hi = cell.param + window_a;
            if (exact_law) {
                detail::fill_exact(cell, detail::law_window(*exact_law, cell.param, hi));
            } else if (float_law) {
                detail::fill_exact(cell, detail::law_window(*float_law, cell.param, hi));
            } else {
                WalkEvent ev;
                ev.positivity = Positivity::Interior;
                ev.window_k = cell.param;
                ev.window_a = window_a;
                detail::fill_mc(cell, estimate_event(dist, n, ev, detail::cell_config(opts, static_cast<std::uint64_t>(n), r)));
            }
            cell.reachable = cell.raw > 0;
            const double k = std::max(cell.param.get_d(), 1.0);
            cell.normalized = cell.raw * std::pow(static_cast<double>(n), 1.5) / k;
            report.grid.push_back(std::move(cell));
        }
    }
    report.finalize();
    return report;
}

// normalized = P{T_h > n} * sqrt(n) / max{h,1}.
inline BoundReport scan_stopping(const StepDistribution& dist, const std::vector<std::int64_t>& n_grid,
                                 const std::vector<ParamRule>& h_rules, const ScanOptions& opts = {}) {
    const auto li = lattice_info(dist);
    BoundReport report;
    report.scan = "stopping";
    report.dist_label = dist.label();
    report.normalization = "P{T_h > n} * sqrt(n) / max(h,1)";
    report.threshold = opts.threshold;
    for (auto n : n_grid) {
        for (std::size_t r = 0; r < h_rules.size(); ++r) {
            BoundCell cell;
            cell.n = n;
            cell.rule = h_rules[r].describe();
            cell.requested = h_rules[r].resolve(li, n);
            cell.param = cell.requested;
            try {
                detail::fill_exact(cell, stopping_time_tail(dist, n, cell.param, opts.mode, opts.dp));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::StateSpaceTooLarge || !opts.allow_mc) throw;
                WalkEvent ev;
                ev.barrier_h = cell.param;
                detail::fill_mc(cell, estimate_event(dist, n, ev, detail::cell_config(opts, static_cast<std::uint64_t>(n), r)));
            }
            cell.reachable = cell.raw > 0;
            const double h = std::max(cell.param.get_d(), 1.0);
            cell.normalized = cell.raw * std::sqrt(static_cast<double>(n)) / h;
            report.grid.push_back(std::move(cell));
        }
    }
    report.finalize();
    return report;
}

// normalized = sup_x P{x <= S_n <= x+1} * sqrt(n).
inline BoundReport scan_spread(const StepDistribution& dist, std::vector<std::int64_t> n_grid,
                               const ScanOptions& opts = {}) {
    BoundReport report;
    report.scan = "spread";
    report.dist_label = dist.label();
    report.normalization = "sup_x P{x <= S_n <= x+1} * sqrt(n)";
    report.threshold = opts.threshold;
    if (n_grid.empty()) {
        report.finalize();
        return report;
    }
    const auto max_n = *std::max_element(n_grid.begin(), n_grid.end());
    const auto seq = spread_sup_sequence(dist, max_n, Rational(1), opts.mode, opts.dp);
    for (auto n : n_grid) {
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
        const auto& q = seq[static_cast<std::size_t>(n - 1)];
        BoundCell cell;
        cell.n = n;
        cell.rule = "-";
        cell.raw = q.value;
        cell.exact = q.exact;
        cell.method = q.exact ? Method::ExactRational : Method::ExactFloat;
        cell.error_bound = q.error_bound;
        cell.reachable = cell.raw > 0;
        cell.normalized = cell.raw * std::sqrt(static_cast<double>(n));
        report.grid.push_back(std::move(cell));
    }
    report.finalize();
    return report;
}

// normalized = E[S_n^2 | T_h > n (, S_n >= eps sqrt n)] / n.
inline BoundReport scan_second_moment(const StepDistribution& dist, const std::vector<std::int64_t>& n_grid,
                                      const std::vector<ParamRule>& h_rules, std::optional<double> eps,
                                      const ScanOptions& opts = {}) {
    const auto li = lattice_info(dist);
    BoundReport report;
    report.scan = eps ? "second_moment_thresholded" : "second_moment";
    report.dist_label = dist.label();
    report.normalization = eps ? "E[S_n^2 | T_h > n, S_n >= eps sqrt(n)] / n" : "E[S_n^2 | T_h > n] / n";
    report.threshold = opts.threshold;
    for (auto n : n_grid) {
        for (const auto& rule : h_rules) {
            BoundCell cell;
            cell.n = n;
            cell.rule = rule.describe();
            cell.requested = rule.resolve(li, n);
            cell.param = cell.requested;
            std::optional<Rational> threshold;
            if (eps) threshold = Rational(*eps * std::sqrt(static_cast<double>(n)));
            const auto q = conditional_second_moment(dist, n, cell.param, threshold, opts.mode, opts.dp);
            cell.raw = q.value;
            cell.exact = q.exact;
            cell.method = q.exact ? Method::ExactRational : Method::ExactFloat;
            cell.error_bound = q.error_bound;
            cell.reachable = true;
            cell.normalized = q.value / static_cast<double>(n);
            report.grid.push_back(std::move(cell));
        }
    }
    report.finalize();
    return report;
}

enum class TargetRule { N, SqrtN };

struct CounterexampleReport {
    LeveledFamily family = LeveledFamily::Tower;
    int K = 1;
    std::int64_t n = 1;
    Rational window_a = 1;
    TargetRule rule = TargetRule::N;
    Rational k = 0;
    std::string dist_label;
    ProbResult endpoint;
    ProbResult joint;
    std::optional<ProbResult> conditional;
    double bertrand = 0;  // k/n
    double ratio_to_bertrand = 0;
    std::optional<ProbResult> mc_conditional;
    std::string mc_note;
    LevelSummary levels;
    std::string label;
    std::vector<std::string> untestable;
};

inline CounterexampleReport counterexample_report(LeveledFamily family, int K, std::int64_t n,
                                                  const Rational& window_a, TargetRule rule, const McConfig& cfg,
                                                  Arithmetic mode = Arithmetic::Rational,
                                                  const DpOptions& dp = {}) {
    const auto ld = family == LeveledFamily::Tower ? tower_distribution(K) : heavy_tower_distribution(K);
    const auto li = lattice_info(ld.base);
    CounterexampleReport rep;
    rep.family = family;
    rep.K = K;
    rep.n = n;
    rep.window_a = window_a;
    rep.rule = rule;
    rep.dist_label = ld.base.label();
    const Rational want = rule == TargetRule::N
                              ? Rational(n)
                              : Rational(static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12)));
    rep.k = li.snap_up(n, want);
    const auto q = WalkQuery::make(ld.base, n, rep.k, window_a);
    try {
        rep.endpoint = endpoint_window_prob(ld.base, n, rep.k, window_a, mode, dp);
        rep.joint = positive_path_window_prob(q, mode, dp);
        if (rep.endpoint.value > 0 || (rep.endpoint.exact && *rep.endpoint.exact > 0)) {
            rep.conditional = conditional_ballot_prob(q, mode, dp);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::StateSpaceTooLarge) throw;
        WalkEvent window;
        window.window_k = rep.k;
        window.window_a = window_a;
        rep.endpoint = estimate_event(ld.base, n, window, cfg);
        WalkEvent joint = window;
        joint.positivity = Positivity::Interior;
        rep.joint = estimate_event(ld.base, n, joint, cfg);
    }
    try {
        rep.mc_conditional = estimate_conditional(ld.base, n, rep.k, window_a, cfg);
        if (rep.mc_conditional->low_precision) rep.mc_note = "low_precision: fewer than min_hits conditioning paths";
        if (!rep.conditional) rep.conditional = rep.mc_conditional;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroDenominatorSample) throw;
        rep.mc_note = "no sampled path reached the endpoint window";
    }
    rep.bertrand = rep.k.get_d() / static_cast<double>(n);
    if (rep.conditional && rep.bertrand > 0) rep.ratio_to_bertrand = rep.conditional->value / rep.bertrand;
    rep.levels = sample_level_decomposition(ld, n, cfg);
    rep.label = "finite-n diagnostic - asymptotic rate not testable at this scale";
    if (family == LeveledFamily::Tower) {
        rep.untestable = {"P{S_n = n} = Omega(n^(-7/2)) at n = f(k)",
                          "P{S_n = n, S_t > 0 for 0<t<n} = O(n^(-4)) at n = f(k)",
                          "P{S_t > 0 for 0<t<n | S_n = n} = O(n^(-1/2)) at n = f(k)"};
    } else {
        rep.untestable = {"P{S_n = sqrt n} = Omega(n^(-5/8) / sqrt(log n)) at n = g(k)^2",
                          "P{S_n = sqrt n, Pos_n} = O(log^(13/2) n / n^(5/4)) at n = g(k)^2",
                          "P{Pos_n | S_n = sqrt n} = O(log^7 n / n^(5/8)) at n = g(k)^2"};
    }
    return rep;
}

}  // namespace ballotlab
