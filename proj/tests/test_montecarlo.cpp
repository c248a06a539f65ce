#include <gtest/gtest.h>

#include <array>
#include <mutex>

#include "ballotlab/distributions.hpp"
#include "ballotlab/exactdp.hpp"
#include "ballotlab/montecarlo.hpp"

using namespace ballotlab;

namespace {

McConfig config(std::uint64_t trials, std::uint64_t seed) {
    McConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

WalkEvent window_event(Positivity pos, long k, long a) {
    WalkEvent ev;
    ev.positivity = pos;
    ev.window_k = Rational(k);
    ev.window_a = Rational(a);
    return ev;
}

}  // namespace

TEST(EstimateEvent, RademacherWindow) {
    const auto r = estimate_event(rademacher(), 4, window_event(Positivity::None, 2, 2), config(1'000'000, 1));
    EXPECT_NEAR(r.value, 0.25, 3 * r.std_error);
    EXPECT_EQ(r.method, Method::MonteCarlo);
    EXPECT_EQ(r.trials, 1'000'000u);
    const auto p = estimate_event(rademacher(), 4, window_event(Positivity::Interior, 2, 2), config(1'000'000, 2));
    EXPECT_NEAR(p.value, 0.125, 3 * p.std_error);
}

TEST(EstimateEvent, AlwaysTrue) {
    const auto r = estimate_event(skew_walk(), 1, WalkEvent{}, config(1000, 3));
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.hits, 1000u);
}

TEST(EstimateEvent, LowPrecisionFlag) {
    const auto r = estimate_event(rademacher(), 10, window_event(Positivity::None, 10, 2), config(1000, 4));
    EXPECT_LT(r.hits, 25u);
    EXPECT_TRUE(r.low_precision);
}

TEST(EstimateEvent, Determinism) {
    const auto ev = window_event(Positivity::Interior, 2, 2);
    const auto a = estimate_event(tower_distribution(2).base, 30, ev, config(20'000, 99));
    const auto b = estimate_event(tower_distribution(2).base, 30, ev, config(20'000, 99));
    const auto c = estimate_event(tower_distribution(2).base, 30, ev, config(20'000, 100));
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.value, b.value);
    EXPECT_NE(a.hits, c.hits);
}

TEST(EstimateEvent, DeterministicAcrossThreadCounts) {
    const auto ev = window_event(Positivity::None, 0, 3);
    setenv("BALLOTLAB_THREADS", "1", 1);
    const auto one = estimate_event(lazy_walk(), 12, ev, config(50'000, 5));
    setenv("BALLOTLAB_THREADS", "4", 1);
    const auto four = estimate_event(lazy_walk(), 12, ev, config(50'000, 5));
    unsetenv("BALLOTLAB_THREADS");
    EXPECT_EQ(one.hits, four.hits);
}

TEST(EstimateEvent, SamplerOnlyLaw) {
    const double s = std::sqrt(2.0);
    const auto d = StepDistribution::sampler_only({{-s, 0.5}, {s, 0.5}}, "scaled");
    WalkEvent ev;
    ev.positivity = Positivity::Prefix;
    const auto r = estimate_event(d, 4, ev, config(200'000, 6));
    // same event as the +-1 walk, scaled
    EXPECT_NEAR(r.value, 3.0 / 16.0, 3 * r.std_error);
}

TEST(EstimateEvent, OracleAgreementAcrossGrid) {
    struct Query {
        StepDistribution dist;
        std::int64_t n;
        WalkEvent ev;
        double exact;
    };
    std::vector<Query> queries;
    for (const auto& d : {rademacher(), lazy_walk(), skew_walk(), tower_distribution(1).base}) {
        const auto li = lattice_info(d);
        for (std::int64_t n : {3, 8, 15}) {
            const Rational k = li.snap_up(n, Rational(1));
            WalkEvent w;
            w.positivity = Positivity::Interior;
            w.window_k = k;
            w.window_a = li.span_h;
            queries.push_back({d, n, w, positive_path_window_prob(WalkQuery::make(d, n, k, li.span_h)).value});
            WalkEvent pre;
            pre.positivity = Positivity::Prefix;
            queries.push_back({d, n, pre, positive_prefix_prob(d, n).value});
            WalkEvent bar;
            bar.barrier_h = Rational(1);
            queries.push_back({d, n, bar, stopping_time_tail(d, n, 1).value});
        }
    }
    int inside = 0, total = 0;
    for (const auto& q : queries) {
        for (std::uint64_t seed : {11u, 12u}) {
            const auto r = estimate_event(q.dist, q.n, q.ev, config(40'000, seed));
            ++total;
            if (std::abs(r.value - q.exact) <= 3 * r.std_error + 1e-12) ++inside;
        }
    }
    EXPECT_GE(inside, static_cast<int>(0.95 * total)) << inside << "/" << total;
}

TEST(EstimateConditional, RademacherSmall) {
    const auto r = estimate_conditional(rademacher(), 4, 2, 2, config(1'000'000, 7));
    EXPECT_NEAR(r.value, 0.5, 3 * r.std_error);
    EXPECT_NEAR(r.std_error, std::sqrt(r.value * (1 - r.value) / static_cast<double>(r.trials)), 1e-15);
    EXPECT_FALSE(r.low_precision);
}

TEST(EstimateConditional, RademacherHundred) {
    const auto r = estimate_conditional(rademacher(), 100, 10, 2, config(1'000'000, 8));
    EXPECT_NEAR(r.value, 0.1, 3 * r.std_error);
}

TEST(EstimateConditional, ParityGivesZeroDenominator) {
    try {
        estimate_conditional(rademacher(), 4, 3, 1, config(10'000, 9));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroDenominatorSample);
    }
}

TEST(Permutation, ExactExamples) {
    EXPECT_EQ(*permutation_positive_prob(Multiset({1, 1, -1}), PermutationMode::Exact).exact, Rational(1, 3));
    EXPECT_EQ(*permutation_positive_prob(Multiset({3, -1, -1}), PermutationMode::Exact).exact, Rational(1, 3));
    EXPECT_EQ(*permutation_positive_prob(Multiset({1}), PermutationMode::Exact).exact, Rational(1));
    EXPECT_EQ(*permutation_positive_prob(Multiset({-1}), PermutationMode::Exact).exact, Rational(0));
}

TEST(Permutation, BertrandBallot) {
    for (int p = 1; p <= 12; ++p) {
        for (int q = 0; q < p && p + q <= 12; ++q) {
            std::vector<Rational> e;
            for (int i = 0; i < p; ++i) e.emplace_back(1);
            for (int i = 0; i < q; ++i) e.emplace_back(-1);
            EXPECT_EQ(*permutation_positive_prob(Multiset(e), PermutationMode::Exact).exact, make_rational(p - q, p + q))
                << p << "," << q;
        }
    }
}

TEST(Permutation, TooLargeForExact) {
    std::vector<Rational> e(13, Rational(1));
    try {
        permutation_positive_prob(Multiset(e), PermutationMode::Exact);
        FAIL();
    } catch (const Error& ex) {
        EXPECT_EQ(ex.code(), ErrorCode::TooLargeForExact);
    }
    const auto r = permutation_positive_prob(Multiset(e), PermutationMode::MonteCarlo, config(1000, 1));
    EXPECT_EQ(r.value, 1.0);
}

TEST(Permutation, MonteCarloMatchesExact) {
    const Multiset ms({3, 1, 1, -2, -1, -1, Rational(1, 2)});
    const auto exact = permutation_positive_prob(ms, PermutationMode::Exact);
    const auto mc = permutation_positive_prob(ms, PermutationMode::MonteCarlo, config(400'000, 13));
    EXPECT_NEAR(mc.value, exact.value, 3 * mc.std_error);
}

TEST(LevelDecomposition, ExamplePath) {
    const auto ld = tower_distribution(3);
    const std::array<std::int64_t, 4> steps{1, -1, 16, 1};
    const auto dec = decompose_path(ld, steps);
    EXPECT_EQ(dec.counts, (std::map<int, std::int64_t>{{0, 3}, {3, 1}}));
    EXPECT_EQ(dec.sums, (std::map<int, std::int64_t>{{0, 1}, {3, 16}}));
    EXPECT_EQ(dec.truncated_endpoints.at(0), 1);
    EXPECT_EQ(dec.truncated_endpoints.at(3), 17);
    const std::array<std::int64_t, 1> bad{3};
    EXPECT_THROW(decompose_path(ld, bad), Error);
}

TEST(LevelDecomposition, TopLevelCountMean) {
    // N_3 ~ Bin(16, 2 * 1/(2 * 16^4)) = Bin(16, 1/65536)
    const auto ld = tower_distribution(3);
    std::mutex mu;
    std::uint64_t seen = 0;
    const auto summary = sample_level_decomposition(ld, 16, config(100'000, 21), [&](const LevelDecomposition& d) {
        std::int64_t c = 0;
        for (const auto& [k, v] : d.counts) c += v;
        std::lock_guard<std::mutex> lock(mu);
        EXPECT_EQ(c, 16);
        ++seen;
    });
    EXPECT_EQ(seen, 100'000u);
    const double expect = 16.0 / 65536.0;
    const auto& top = summary.levels.at(3);
    EXPECT_NEAR(top.mean_count, expect, 3 * std::sqrt(16.0 * (1.0 / 65536) / 100'000));
    const auto& l1 = summary.levels.at(1);
    EXPECT_NEAR(l1.mean_count, 1.0, 3 * l1.count_stderr);  // Bin(16, 1/16)
    std::uint64_t hist_total = 0;
    for (const auto& [c, f] : summary.levels.at(0).count_histogram) hist_total += f;
    EXPECT_EQ(hist_total, 100'000u);
}

TEST(ChernoffRand, SmallParameters) {
    const auto r = chernoff_rand_check(100, 0.5, 1, 30, config(200'000, 31));
    EXPECT_LT(r.upper_emp, r.upper_bound);
    EXPECT_LT(r.lower_emp, r.lower_bound);
    EXPECT_LT(r.upper_emp, 1e-3);
    const auto vac = chernoff_rand_check(100, 0.5, 1, 1e-6, config(10'000, 32));
    EXPECT_GT(vac.upper_bound, 1.0);
    EXPECT_LE(vac.upper_emp, 1.0);
}

TEST(ChernoffRand, SymmetricTails) {
    const auto r = chernoff_rand_check(1000, 0.1, 1, 10, config(200'000, 33));
    EXPECT_NEAR(r.upper_emp, r.lower_emp, 3 * (r.upper_stderr + r.lower_stderr));
    EXPECT_GT(r.upper_hits, 1000u);
}

TEST(McConfig, Validation) {
    EXPECT_THROW(config(0, 1).validate(), Error);
    EXPECT_THROW(config(10, 1).validate(), Error);  // fewer trials than the 64 streams
    McConfig ok = config(64, 1);
    EXPECT_NO_THROW(ok.validate());
}
