#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ballotlab/approx.hpp"
#include "ballotlab/distributions.hpp"
#include "ballotlab/error.hpp"
#include "ballotlab/random.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

enum class Positivity { None, Interior, Prefix };

inline const char* positivity_name(Positivity p) {
    switch (p) {
        case Positivity::None: return "none";
        case Positivity::Interior: return "interior";
        case Positivity::Prefix: return "prefix";
    }
    return "?";
}

struct WalkEvent {
    Positivity positivity = Positivity::None;
    std::optional<Rational> barrier_h;    // S_i >= -h for 1 <= i <= n
    std::optional<Rational> window_k;     // k <= S_n < k + A
    std::optional<Rational> window_a;

    bool has_window() const { return window_k.has_value(); }

    void validate() const {
        if (window_k.has_value() != window_a.has_value()) {
            throw Error(ErrorCode::InvalidArgument, "endpoint window needs both k and A");
        }
        if (window_a && *window_a <= 0) throw Error(ErrorCode::InvalidArgument, "window A must be positive");
        if (barrier_h && *barrier_h < 0) throw Error(ErrorCode::InvalidArgument, "barrier h must be nonnegative");
    }
};

// Samples one walk path and evaluates a WalkEvent on it. Finite-support laws
// run on the integer lattice index so every comparison is exact.
class PathSimulator {
public:
    struct Outcome {
        bool path_ok = true;
        bool window_ok = true;
    };

    PathSimulator(const StepDistribution& dist, std::int64_t n, WalkEvent event) : n_(n), event_(std::move(event)) {
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
        event_.validate();
        finite_ = dist.is_finite_support();
        double acc = 0;
        for (const auto& a : dist.float_atoms()) {
            acc += a.prob;
            cdf_.push_back(acc);
            values_.push_back(a.value);
        }
        cdf_.back() = 1.0;
        if (!finite_) return;

        const auto li = lattice_info(dist);
        const Rational base = dist.atoms().front().value;
        const Rational& span = li.span_h;
        for (const auto& a : dist.atoms()) increments_.push_back(Rational((a.value - base) / span).get_num().get_si());
        const auto nn = static_cast<std::size_t>(n);
        positive_min_.assign(nn + 1, 0);
        barrier_min_.assign(nn + 1, 0);
        for (std::int64_t t = 1; t <= n; ++t) {
            const Rational origin = Rational(t) * base;
            positive_min_[static_cast<std::size_t>(t)] = floor_of(-origin / span).get_si() + 1;
            if (event_.barrier_h) {
                barrier_min_[static_cast<std::size_t>(t)] = ceil_of((-*event_.barrier_h - origin) / span).get_si();
            }
        }
        if (event_.has_window()) {
            const Rational origin = Rational(n) * base;
            window_lo_ = ceil_of((*event_.window_k - origin) / span).get_si();
            // largest index with value < k + A
            window_hi_ = ceil_of((*event_.window_k + *event_.window_a - origin) / span).get_si() - 1;
        }
    }

    // stop_early: abandon the path once the path constraints fail.
    Outcome run(StreamRng& rng, bool stop_early) const {
        return finite_ ? run_lattice(rng, stop_early) : run_float(rng, stop_early);
    }

private:
    std::size_t draw(StreamRng& rng) const {
        const double u = rng.uniform();
        std::size_t i = 0;
        while (i + 1 < cdf_.size() && u >= cdf_[i]) ++i;
        return i;
    }

    bool positivity_checked(std::int64_t t) const {
        switch (event_.positivity) {
            case Positivity::None: return false;
            case Positivity::Interior: return t < n_;
            case Positivity::Prefix: return true;
        }
        return false;
    }

    Outcome run_lattice(StreamRng& rng, bool stop_early) const {
        Outcome out;
        std::int64_t idx = 0;
        for (std::int64_t t = 1; t <= n_; ++t) {
            idx += increments_[draw(rng)];
            const auto ts = static_cast<std::size_t>(t);
            if (out.path_ok) {
                if (positivity_checked(t) && idx < positive_min_[ts]) out.path_ok = false;
                if (event_.barrier_h && idx < barrier_min_[ts]) out.path_ok = false;
                if (!out.path_ok && stop_early) return out;
            }
        }
        if (event_.has_window()) out.window_ok = idx >= window_lo_ && idx <= window_hi_;
        return out;
    }

    Outcome run_float(StreamRng& rng, bool stop_early) const {
        Outcome out;
        double s = 0;
        const double h = event_.barrier_h ? event_.barrier_h->get_d() : 0;
        for (std::int64_t t = 1; t <= n_; ++t) {
            s += values_[draw(rng)];
            if (out.path_ok) {
                if (positivity_checked(t) && !(s > 0)) out.path_ok = false;
                if (event_.barrier_h && s < -h) out.path_ok = false;
                if (!out.path_ok && stop_early) return out;
            }
        }
        if (event_.has_window()) {
            const double k = event_.window_k->get_d();
            out.window_ok = s >= k && s < k + event_.window_a->get_d();
        }
        return out;
    }

    std::int64_t n_;
    WalkEvent event_;
    bool finite_ = true;
    std::vector<double> cdf_;
    std::vector<double> values_;
    std::vector<std::int64_t> increments_;
    std::vector<std::int64_t> positive_min_;
    std::vector<std::int64_t> barrier_min_;
    std::int64_t window_lo_ = 0;
    std::int64_t window_hi_ = -1;
};

namespace detail {

struct HitCounts {
    std::uint64_t first = 0;
    std::uint64_t second = 0;
    HitCounts& operator+=(const HitCounts& o) {
        first += o.first;
        second += o.second;
        return *this;
    }
};

constexpr std::uint64_t kSaltEvent = 0x4556454e54ULL;
constexpr std::uint64_t kSaltPermutation = 0x5045524dULL;
constexpr std::uint64_t kSaltLevels = 0x4c45564cULL;
constexpr std::uint64_t kSaltChernoff = 0x43484552ULL;

}  // namespace detail

// P{event} by plain Monte Carlo.
inline ProbResult estimate_event(const StepDistribution& dist, std::int64_t n, const WalkEvent& event,
                                 const McConfig& cfg) {
    PathSimulator sim(dist, n, event);
    auto counts = run_streams<detail::HitCounts>(cfg, detail::kSaltEvent,
                                                 [&](StreamRng& rng, std::uint64_t count, detail::HitCounts& acc) {
                                                     for (std::uint64_t j = 0; j < count; ++j) {
                                                         auto o = sim.run(rng, true);
                                                         if (o.path_ok && o.window_ok) ++acc.first;
                                                     }
                                                 });
    auto r = ProbResult::from_counts(counts.first, cfg.trials, cfg.seed, cfg.min_hits);
    r.paths = cfg.trials;
    return r;
}

// P{S_i > 0, 0<i<n | k <= S_n < k+A} as a paired ratio over one sample. The
// result's trials/hits are the denominator/numerator counts; its stderr is
// the delta-method value sqrt(R(1-R)/denominator).
inline ProbResult estimate_conditional(const StepDistribution& dist, std::int64_t n, const Rational& k,
                                       const Rational& window_a, const McConfig& cfg) {
    WalkEvent ev;
    ev.positivity = Positivity::Interior;
    ev.window_k = k;
    ev.window_a = window_a;
    PathSimulator sim(dist, n, ev);
    auto counts = run_streams<detail::HitCounts>(cfg, detail::kSaltEvent,
                                                 [&](StreamRng& rng, std::uint64_t count, detail::HitCounts& acc) {
                                                     for (std::uint64_t j = 0; j < count; ++j) {
                                                         auto o = sim.run(rng, false);
                                                         if (o.window_ok) {
                                                             ++acc.second;
                                                             if (o.path_ok) ++acc.first;
                                                         }
                                                     }
                                                 });
    if (counts.second == 0) {
        throw Error(ErrorCode::ZeroDenominatorSample,
                    "no sampled path ended in [" + to_string(k) + ", " + to_string(Rational(k + window_a)) + ")");
    }
    auto r = ProbResult::from_counts(counts.first, counts.second, cfg.seed, 0);
    r.low_precision = counts.second < cfg.min_hits;
    r.paths = cfg.trials;
    return r;
}

enum class PermutationMode { Exact, MonteCarlo };

// Probability that every partial sum of a uniformly random arrangement of the
// multiset is strictly positive.
inline ProbResult permutation_positive_prob(const Multiset& ms, PermutationMode mode, const McConfig& cfg = {}) {
    std::vector<Rational> sorted = ms.elements;
    std::sort(sorted.begin(), sorted.end());
    if (mode == PermutationMode::Exact) {
        if (sorted.size() > 12) {
            throw Error(ErrorCode::TooLargeForExact,
                        "exact enumeration supports at most 12 elements, got " + std::to_string(sorted.size()));
        }
        std::vector<Rational> distinct;
        std::vector<int> mult;
        for (const auto& e : sorted) {
            if (distinct.empty() || distinct.back() != e) {
                distinct.push_back(e);
                mult.push_back(0);
            }
            ++mult.back();
        }
        // Distinct arrangements whose partial sums all stay positive.
        std::function<Integer(const Rational&, std::size_t)> count = [&](const Rational& sum,
                                                                          std::size_t left) -> Integer {
            if (left == 0) return 1;
            Integer total = 0;
            for (std::size_t i = 0; i < distinct.size(); ++i) {
                if (mult[i] == 0) continue;
                Rational next = sum + distinct[i];
                if (next <= 0) continue;
                --mult[i];
                total += count(next, left - 1);
                ++mult[i];
            }
            return total;
        };
        Integer good = count(Rational(0), sorted.size());
        Integer all = 1;
        for (std::size_t i = 2; i <= sorted.size(); ++i) all *= static_cast<unsigned long>(i);
        for (int m : mult) {
            for (int i = 2; i <= m; ++i) all /= i;
        }
        return ProbResult::from_rational(make_rational(good, all));
    }
    std::vector<double> values;
    for (const auto& e : ms.elements) values.push_back(e.get_d());
    const bool exact_values = std::all_of(ms.elements.begin(), ms.elements.end(),
                                          [](const Rational& e) { return is_integer(e) && abs(e) < (1L << 40); });
    auto counts = run_streams<detail::HitCounts>(
        cfg, detail::kSaltPermutation, [&](StreamRng& rng, std::uint64_t count, detail::HitCounts& acc) {
            std::vector<double> perm = values;
            std::vector<Rational> rperm = ms.elements;
            for (std::uint64_t j = 0; j < count; ++j) {
                bool ok = true;
                if (exact_values) {
                    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
                    double s = 0;
                    for (double x : perm) {
                        s += x;
                        if (!(s > 0)) {
                            ok = false;
                            break;
                        }
                    }
                } else {
                    for (std::size_t i = rperm.size(); i > 1; --i) std::swap(rperm[i - 1], rperm[rng.below(i)]);
                    Rational s = 0;
                    for (const auto& x : rperm) {
                        s += x;
                        if (s <= 0) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (ok) ++acc.first;
            }
        });
    auto r = ProbResult::from_counts(counts.first, cfg.trials, cfg.seed, cfg.min_hits);
    r.paths = cfg.trials;
    return r;
}

// Steps of one path split by level: N_i = counts[i], S_{n,i} = sums[i];
// truncated_endpoints[K] = sum_{i <= K} sums[i].
struct LevelDecomposition {
    std::map<int, std::int64_t> counts;
    std::map<int, std::int64_t> sums;
    std::map<int, std::int64_t> truncated_endpoints;
};

inline LevelDecomposition decompose_path(const LeveledDistribution& ld, std::span<const std::int64_t> steps) {
    LevelDecomposition out;
    for (auto x : steps) {
        const int level = ld.level_of(Rational(static_cast<long>(x)));
        if (level < 0) {
            throw Error(ErrorCode::InvalidArgument, std::to_string(x) + " is not a level value of " + ld.base.label());
        }
        out.counts[level] += 1;
        out.sums[level] += x;
    }
    std::int64_t running = 0;
    for (int k = 0; k <= ld.max_level; ++k) {
        auto it = out.sums.find(k);
        if (it != out.sums.end()) running += it->second;
        out.truncated_endpoints[k] = running;
    }
    return out;
}

struct LevelStats {
    double mean_count = 0;
    double count_stderr = 0;
    double mean_abs_sum = 0;
    std::int64_t max_abs_sum = 0;
    std::map<std::int64_t, std::uint64_t> count_histogram;
};

struct LevelSummary {
    std::int64_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::map<int, LevelStats> levels;
};

namespace detail {

struct LevelAccumulator {
    struct PerLevel {
        double count_sum = 0;
        double count_sq = 0;
        double abs_sum = 0;
        std::int64_t max_abs = 0;
        std::map<std::int64_t, std::uint64_t> hist;
    };
    std::map<int, PerLevel> levels;

    LevelAccumulator& operator+=(const LevelAccumulator& o) {
        for (const auto& [k, p] : o.levels) {
            auto& mine = levels[k];
            mine.count_sum += p.count_sum;
            mine.count_sq += p.count_sq;
            mine.abs_sum += p.abs_sum;
            mine.max_abs = std::max(mine.max_abs, p.max_abs);
            for (const auto& [c, f] : p.hist) mine.hist[c] += f;
        }
        return *this;
    }
};

}  // namespace detail

// Samples paths of a leveled law and aggregates their level decompositions.
// on_path, when set, sees every decomposition; it must be safe to call from
// several threads.
inline LevelSummary sample_level_decomposition(
    const LeveledDistribution& ld, std::int64_t n, const McConfig& cfg,
    const std::function<void(const LevelDecomposition&)>& on_path = {}) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    std::vector<double> cdf;
    std::vector<std::int64_t> values;
    double acc_p = 0;
    for (const auto& a : ld.base.atoms()) {
        acc_p += a.prob.get_d();
        cdf.push_back(acc_p);
        values.push_back(a.value.get_num().get_si());
    }
    cdf.back() = 1.0;
    auto acc = run_streams<detail::LevelAccumulator>(
        cfg, detail::kSaltLevels, [&](StreamRng& rng, std::uint64_t count, detail::LevelAccumulator& out) {
            std::vector<std::int64_t> steps(static_cast<std::size_t>(n));
            for (int k = 0; k <= ld.max_level; ++k) out.levels[k];
            for (std::uint64_t j = 0; j < count; ++j) {
                std::int64_t endpoint = 0;
                for (auto& s : steps) {
                    const double u = rng.uniform();
                    std::size_t i = 0;
                    while (i + 1 < cdf.size() && u >= cdf[i]) ++i;
                    s = values[i];
                    endpoint += s;
                }
                auto dec = decompose_path(ld, steps);
                std::int64_t total_count = 0;
                std::int64_t total_sum = 0;
                for (const auto& [k, c] : dec.counts) total_count += c;
                for (const auto& [k, s] : dec.sums) total_sum += s;
                if (total_count != n || total_sum != endpoint ||
                    dec.truncated_endpoints.at(ld.max_level) != endpoint) {
                    throw std::logic_error("level decomposition does not partition the path");
                }
                for (int k = 0; k <= ld.max_level; ++k) {
                    const auto c = dec.counts.count(k) ? dec.counts.at(k) : 0;
                    const auto s = dec.sums.count(k) ? dec.sums.at(k) : 0;
                    auto& pl = out.levels[k];
                    pl.count_sum += static_cast<double>(c);
                    pl.count_sq += static_cast<double>(c) * static_cast<double>(c);
                    pl.abs_sum += static_cast<double>(std::abs(s));
                    pl.max_abs = std::max(pl.max_abs, std::abs(s));
                    pl.hist[c] += 1;
                }
                if (on_path) on_path(dec);
            }
        });
    LevelSummary summary;
    summary.n = n;
    summary.trials = cfg.trials;
    summary.seed = cfg.seed;
    const double trials = static_cast<double>(cfg.trials);
    for (const auto& [k, pl] : acc.levels) {
        LevelStats st;
        st.mean_count = pl.count_sum / trials;
        const double var = std::max(0.0, pl.count_sq / trials - st.mean_count * st.mean_count);
        st.count_stderr = std::sqrt(var / trials);
        st.mean_abs_sum = pl.abs_sum / trials;
        st.max_abs_sum = pl.max_abs;
        st.count_histogram = pl.hist;
        summary.levels[k] = st;
    }
    return summary;
}

struct ChernoffCheck {
    std::int64_t m = 0;
    double q = 0;
    double v = 0;
    double t = 0;
    double upper_emp = 0;
    double lower_emp = 0;
    double upper_stderr = 0;
    double lower_stderr = 0;
    std::uint64_t upper_hits = 0;
    std::uint64_t lower_hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double upper_bound = 0;
    double lower_bound = 0;
};

// Empirical P{Y > t} and P{Y < -t} for Y = V_1 + ... + V_U next to the closed-form bounds.
inline ChernoffCheck chernoff_rand_check(std::int64_t m, double q, double v, double t, const McConfig& cfg) {
    const auto bounds = chernoff_rand_bounds(m, q, v, t);
    // Inverse-CDF table for U ~ Bin(m, q).
    std::vector<double> cdf;
    cdf.reserve(static_cast<std::size_t>(m) + 1);
    double acc = 0;
    for (std::int64_t u = 0; u <= m; ++u) {
        const double md = static_cast<double>(m), ud = static_cast<double>(u);
        const double logp = std::lgamma(md + 1) - std::lgamma(ud + 1) - std::lgamma(md - ud + 1) +
                            ud * std::log(q) + (md - ud) * std::log1p(-q);
        acc += std::exp(logp);
        cdf.push_back(acc);
    }
    cdf.back() = 1.0;
    const double level = t / v;
    auto counts = run_streams<detail::HitCounts>(
        cfg, detail::kSaltChernoff, [&](StreamRng& rng, std::uint64_t count, detail::HitCounts& out) {
            for (std::uint64_t j = 0; j < count; ++j) {
                const double x = rng.uniform();
                const auto u = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
                const auto heads = rng.fair_binomial(u);
                const double y_units = 2.0 * static_cast<double>(heads) - static_cast<double>(u);
                if (y_units > level) ++out.first;
                if (y_units < -level) ++out.second;
            }
        });
    ChernoffCheck r;
    r.m = m;
    r.q = q;
    r.v = v;
    r.t = t;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.upper_hits = counts.first;
    r.lower_hits = counts.second;
    const double tr = static_cast<double>(cfg.trials);
    r.upper_emp = static_cast<double>(counts.first) / tr;
    r.lower_emp = static_cast<double>(counts.second) / tr;
    r.upper_stderr = std::sqrt(r.upper_emp * (1 - r.upper_emp) / tr);
    r.lower_stderr = std::sqrt(r.lower_emp * (1 - r.lower_emp) / tr);
    r.upper_bound = bounds.upper;
    r.lower_bound = bounds.lower;
    return r;
}

}  // namespace ballotlab
