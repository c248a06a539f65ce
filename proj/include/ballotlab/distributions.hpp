#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ballotlab/error.hpp"
#include "ballotlab/rational.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

// f(0) = 1, f(k+1) = 2^f(k). Fits 64 bits for k <= 4 only.
inline std::uint64_t tower_f(int k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "tower index must be >= 0");
    if (k >= 5) throw Error(ErrorCode::Overflow, "f(" + std::to_string(k) + ") exceeds 64 bits");
    std::uint64_t v = 1;
    for (int i = 0; i < k; ++i) v = std::uint64_t{1} << v;
    return v;
}

enum class LeveledFamily { Tower, Heavy };

inline const char* family_name(LeveledFamily f) { return f == LeveledFamily::Tower ? "tower" : "heavy"; }

struct Level {
    int k = 0;
    std::uint64_t value = 1;
    Rational per_sign_prob;
    // Heavy levels whose value is not a perfect square have an irrational
    // weight; the stored probability is the nearest double, held exactly.
    bool approximated = false;
};

// A symmetric step law on {+-1} and {+-value_k : 1 <= k <= K}. Level 0 is the
// +-1 pair and absorbs the mass of the omitted levels k > K.
struct LeveledDistribution {
    StepDistribution base =
        StepDistribution::finite({{Rational(-1), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}, "rademacher");
    LeveledFamily family = LeveledFamily::Tower;
    std::vector<Level> levels;  // levels[0] is the +-1 pair
    int max_level = 0;
    double exponent = 4.0;  // per-sign mass 1/(2 value^exponent)
    // Mass sum_{k>K} value_k^-exponent moved onto +-1; 0 when it underflows a double.
    double folded_tail_mass = 0;

    // Level index for |x|, or -1 when |x| is not a level value.
    int level_of(const Rational& x) const {
        Rational a = abs(x);
        if (!is_integer(a)) return -1;
        for (const auto& l : levels) {
            if (Integer(a.get_num()) == Integer(std::to_string(l.value))) return l.k;
        }
        return -1;
    }
};

namespace detail {

inline Integer to_integer(std::uint64_t v) { return Integer(std::to_string(v)); }

inline LeveledDistribution build_leveled(LeveledFamily family, const std::vector<std::uint64_t>& values, int K,
                                         double exponent, double folded_tail, const std::string& label) {
    LeveledDistribution out;
    out.family = family;
    out.max_level = K;
    out.exponent = exponent;
    out.folded_tail_mass = folded_tail;
    Rational heavy_total = 0;
    std::vector<Level> levels;
    for (int k = 1; k <= K; ++k) {
        Level l;
        l.k = k;
        l.value = values[static_cast<std::size_t>(k)];
        const Integer v = to_integer(l.value);
        if (exponent == 4.0) {
            l.per_sign_prob = make_rational(Integer(1), 2 * pow_integer(v, 4));
        } else {
            Integer root;
            mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
            if (root * root == v) {
                l.per_sign_prob = make_rational(Integer(1), 2 * pow_integer(root, 3));
            } else {
                const double vd = static_cast<double>(l.value);
                l.per_sign_prob = Rational(1.0 / (2.0 * vd * std::sqrt(vd)));
                l.approximated = true;
            }
        }
        heavy_total += 2 * l.per_sign_prob;
        levels.push_back(l);
    }
    if (heavy_total >= 1) {
        throw Error(ErrorCode::NegativeMass, "levels carry total mass " + to_string(heavy_total) + " >= 1");
    }
    Level unit;
    unit.k = 0;
    unit.value = 1;
    unit.per_sign_prob = (1 - heavy_total) / 2;
    out.levels.push_back(unit);
    for (auto& l : levels) out.levels.push_back(l);

    std::vector<Atom> atoms;
    for (const auto& l : out.levels) {
        const Rational v(to_integer(l.value));
        atoms.push_back({v, l.per_sign_prob});
        atoms.push_back({-v, l.per_sign_prob});
    }
    out.base = StepDistribution::finite(std::move(atoms), label);
    return out;
}

}  // namespace detail

// +-f(k) with per-sign mass 1/(2 f(k)^4) for 1 <= k <= K, remaining mass on +-1.
inline LeveledDistribution tower_distribution(int K) {
    if (K < 1) throw Error(ErrorCode::InvalidArgument, "tower K must be >= 1");
    std::vector<std::uint64_t> values;
    for (int k = 0; k <= K; ++k) values.push_back(tower_f(k));
    double tail = 0;
    for (int k = K + 1; k <= 4; ++k) tail += std::pow(static_cast<double>(tower_f(k)), -4.0);
    return detail::build_leveled(LeveledFamily::Tower, values, K, 4.0, tail, "tower(" + std::to_string(K) + ")");
}

// +-g(k) with per-sign mass 1/(2 g(k)^(3/2)); g defaults to f. When given,
// g lists g(0..K') with K' >= K, g(0) = 1, strictly increasing, g >= f.
inline LeveledDistribution heavy_tower_distribution(int K, std::optional<std::vector<std::uint64_t>> g = std::nullopt) {
    if (K < 1) throw Error(ErrorCode::InvalidArgument, "heavy K must be >= 1");
    std::vector<std::uint64_t> values;
    if (g) {
        values = *g;
        if (values.size() < static_cast<std::size_t>(K) + 1) {
            throw Error(ErrorCode::InvalidG, "g must list values for levels 0.." + std::to_string(K));
        }
        if (values[0] != 1) throw Error(ErrorCode::InvalidG, "g(0) must be 1");
        for (std::size_t k = 1; k < values.size(); ++k) {
            if (values[k] <= values[k - 1]) throw Error(ErrorCode::InvalidG, "g must be strictly increasing");
            if (k >= 5) throw Error(ErrorCode::InvalidG, "g(k) >= f(k) is not representable for k >= 5");
            if (values[k] < tower_f(static_cast<int>(k))) {
                throw Error(ErrorCode::InvalidG, "g(" + std::to_string(k) + ") < f(" + std::to_string(k) + ")");
            }
        }
    } else {
        for (int k = 0; k <= K; ++k) values.push_back(tower_f(k));
        for (int k = K + 1; k <= 4; ++k) values.push_back(tower_f(k));
    }
    double tail = 0;
    for (std::size_t k = static_cast<std::size_t>(K) + 1; k < values.size(); ++k) {
        tail += std::pow(static_cast<double>(values[k]), -1.5);
    }
    values.resize(static_cast<std::size_t>(K) + 1);
    return detail::build_leveled(LeveledFamily::Heavy, values, K, 1.5, tail, "heavy(" + std::to_string(K) + ")");
}

inline StepDistribution rademacher() {
    return StepDistribution::finite({{Rational(-1), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}, "rademacher");
}

inline StepDistribution lazy_walk() {
    return StepDistribution::finite(
        {{Rational(-1), Rational(1, 3)}, {Rational(0), Rational(1, 3)}, {Rational(1), Rational(1, 3)}}, "lazy");
}

inline StepDistribution skew_walk() {
    return StepDistribution::finite({{Rational(2), Rational(1, 3)}, {Rational(-1), Rational(2, 3)}}, "skew");
}

// Splits "tower:3" or "tower(3)" into name and level.
inline std::pair<std::string, std::optional<int>> split_builtin_name(std::string_view name) {
    std::string s(name);
    std::optional<int> level;
    auto cut = s.find_first_of(":(");
    if (cut != std::string::npos) {
        std::string num = s.substr(cut + 1);
        if (!num.empty() && num.back() == ')') num.pop_back();
        try {
            level = std::stoi(num);
        } catch (const std::exception&) {
            throw Error(ErrorCode::UnknownName, "bad level in '" + s + "'");
        }
        s = s.substr(0, cut);
    }
    return {s, level};
}

inline LeveledDistribution builtin_leveled(std::string_view name, std::optional<int> K = std::nullopt) {
    auto [base, level] = split_builtin_name(name);
    if (!level) level = K;
    if (base != "tower" && base != "heavy") {
        throw Error(ErrorCode::UnknownName, "'" + std::string(name) + "' is not a leveled distribution");
    }
    if (!level) throw Error(ErrorCode::InvalidArgument, base + " needs a level K");
    return base == "tower" ? tower_distribution(*level) : heavy_tower_distribution(*level);
}

inline StepDistribution builtin(std::string_view name, std::optional<int> K = std::nullopt) {
    auto [base, level] = split_builtin_name(name);
    if (base == "rademacher") return rademacher();
    if (base == "lazy") return lazy_walk();
    if (base == "skew") return skew_walk();
    if (base == "tower" || base == "heavy") return builtin_leveled(name, K).base;
    throw Error(ErrorCode::UnknownName, "no built-in distribution named '" + std::string(name) + "'");
}

inline std::vector<std::string> builtin_names() { return {"rademacher", "lazy", "skew", "tower", "heavy"}; }

}  // namespace ballotlab
