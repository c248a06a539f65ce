#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballotlab/error.hpp"
#include "ballotlab/rational.hpp"

namespace ballotlab {

struct Atom {
    Rational value;
    Rational prob;
};

struct FloatAtom {
    double value;
    double prob;
};

enum class DistKind { FiniteSupport, SamplerOnly };

// A step law X. Finite-support laws carry exact rational atoms; sampler-only
// laws carry floating atoms (irrational values allowed) and are usable by
// Monte Carlo only. Immutable after construction.
class StepDistribution {
public:
    static StepDistribution finite(std::vector<Atom> atoms, std::string label) {
        if (atoms.size() < 2) {
            throw Error(ErrorCode::SingleAtom, "distribution '" + label + "' needs at least 2 atoms");
        }
        for (auto& a : atoms) {
            if (a.value.get_den() == 0 || a.prob.get_den() == 0) {
                throw Error(ErrorCode::InvalidDistribution, "atom with zero denominator");
            }
            a.value.canonicalize();
            a.prob.canonicalize();
        }
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.value < b.value; });
        Rational total = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (atoms[i].prob <= 0) {
                throw Error(ErrorCode::InvalidDistribution,
                            "atom probability must be positive, got " + to_string(atoms[i].prob));
            }
            if (i > 0 && atoms[i].value == atoms[i - 1].value) {
                throw Error(ErrorCode::InvalidDistribution,
                            "duplicate atom value " + to_string(atoms[i].value));
            }
            total += atoms[i].prob;
        }
        if (total != 1) {
            throw Error(ErrorCode::InvalidDistribution,
                        "probabilities sum to " + to_string(total) + ", expected 1");
        }
        StepDistribution d;
        d.kind_ = DistKind::FiniteSupport;
        d.label_ = std::move(label);
        Rational mean = 0;
        Rational second = 0;
        for (const auto& a : atoms) {
            mean += a.value * a.prob;
            second += a.value * a.value * a.prob;
            d.float_atoms_.push_back({a.value.get_d(), a.prob.get_d()});
        }
        d.atoms_ = std::move(atoms);
        d.mean_ = mean;
        d.variance_exact_ = second - mean * mean;
        d.variance_ = d.variance_exact_->get_d();
        d.mean_double_ = mean.get_d();
        return d;
    }

    static StepDistribution sampler_only(std::vector<FloatAtom> atoms, std::string label) {
        if (atoms.size() < 2) {
            throw Error(ErrorCode::SingleAtom, "distribution '" + label + "' needs at least 2 atoms");
        }
        std::sort(atoms.begin(), atoms.end(),
                  [](const FloatAtom& a, const FloatAtom& b) { return a.value < b.value; });
        double total = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!(atoms[i].prob > 0) || !std::isfinite(atoms[i].value)) {
                throw Error(ErrorCode::InvalidDistribution, "sampler atom must have positive probability");
            }
            if (i > 0 && atoms[i].value == atoms[i - 1].value) {
                throw Error(ErrorCode::InvalidDistribution, "duplicate sampler atom value");
            }
            total += atoms[i].prob;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw Error(ErrorCode::InvalidDistribution, "sampler probabilities do not sum to 1");
        }
        StepDistribution d;
        d.kind_ = DistKind::SamplerOnly;
        d.label_ = std::move(label);
        double mean = 0, second = 0;
        for (const auto& a : atoms) {
            mean += a.value * a.prob;
            second += a.value * a.value * a.prob;
        }
        d.float_atoms_ = std::move(atoms);
        d.mean_double_ = mean;
        d.variance_ = second - mean * mean;
        return d;
    }

    DistKind kind() const noexcept { return kind_; }
    bool is_finite_support() const noexcept { return kind_ == DistKind::FiniteSupport; }
    const std::string& label() const noexcept { return label_; }

    // Sorted by value. Empty for sampler-only laws.
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    // Sorted by value; always populated.
    const std::vector<FloatAtom>& float_atoms() const noexcept { return float_atoms_; }

    const Rational& mean() const {
        require_finite("mean");
        return mean_;
    }
    double mean_double() const noexcept { return mean_double_; }
    bool has_zero_mean() const {
        return is_finite_support() ? mean_ == 0 : std::abs(mean_double_) < 1e-12;
    }

    const Rational& variance_exact() const {
        require_finite("exact variance");
        return *variance_exact_;
    }
    double variance() const noexcept { return variance_; }

    void require_finite(const char* what) const {
        if (!is_finite_support()) {
            throw Error(ErrorCode::NotFiniteSupport,
                        std::string(what) + " requires a finite-support law, '" + label_ + "' is sampler-only");
        }
    }

private:
    StepDistribution() = default;

    DistKind kind_ = DistKind::FiniteSupport;
    std::vector<Atom> atoms_;
    std::vector<FloatAtom> float_atoms_;
    Rational mean_ = 0;
    double mean_double_ = 0;
    std::optional<Rational> variance_exact_;
    double variance_ = 0;
    std::string label_;
};

// X lies on offset_z + span_h * Z with span_h maximal; the classical period is
// d = 1/span_h and the classical offset is offset_z * d.
struct LatticeInfo {
    bool is_lattice = true;
    Rational span_h = 1;
    Rational offset_z = 0;
    Rational period_d = 1;

    Rational walk_offset(std::int64_t n) const { return mod_positive(Rational(n) * offset_z, span_h); }

    bool acceptable(const Rational& window) const { return is_lattice ? window >= span_h : window > 0; }

    bool on_walk_lattice(std::int64_t n, const Rational& x) const {
        return is_integer((x - Rational(n) * offset_z) / span_h);
    }

    // Smallest point of the lattice of S_n that is >= x.
    Rational snap_up(std::int64_t n, const Rational& x) const {
        Rational origin = Rational(n) * offset_z;
        Integer j = ceil_of((x - origin) / span_h);
        return origin + Rational(j) * span_h;
    }
};

inline LatticeInfo lattice_info(const StepDistribution& dist) {
    if (!dist.is_finite_support()) {
        if (dist.float_atoms().size() < 2) throw Error(ErrorCode::SingleAtom, "fewer than 2 atoms");
        LatticeInfo li;
        li.is_lattice = false;
        li.span_h = 0;
        li.offset_z = 0;
        li.period_d = 0;
        return li;
    }
    const auto& atoms = dist.atoms();
    if (atoms.size() < 2) throw Error(ErrorCode::SingleAtom, "fewer than 2 atoms");
    Integer common = 1;
    for (const auto& a : atoms) common = lcm(common, a.value.get_den());
    Integer g = 0;
    Rational first_scaled = atoms.front().value * Rational(common);
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        Rational diff = atoms[i].value * Rational(common) - first_scaled;
        g = gcd(g, diff.get_num());
    }
    LatticeInfo li;
    li.span_h = make_rational(g, common);
    li.offset_z = mod_positive(atoms.front().value, li.span_h);
    li.period_d = 1 / li.span_h;
    return li;
}

struct MomentValue {
    double value = 0;
    std::optional<Rational> exact;
};

// Sum of prob * value^order (absolute=false, integral order) or
// prob * |value|^order (absolute=true, any positive order).
inline MomentValue moment(const StepDistribution& dist, double order, bool absolute) {
    dist.require_finite("moment");
    if (!(order > 0)) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
    const bool integral = std::floor(order) == order && order <= 4096;
    if (!integral && !absolute) {
        throw Error(ErrorCode::NonIntegerOrderWithoutAbsolute,
                    "order " + std::to_string(order) + " needs absolute=true");
    }
    MomentValue out;
    if (integral) {
        const auto k = static_cast<unsigned long>(order);
        Rational sum = 0;
        for (const auto& a : dist.atoms()) {
            Rational base = absolute ? Rational(abs(a.value)) : a.value;
            Rational p(pow_integer(base.get_num(), k), pow_integer(base.get_den(), k));
            sum += p * a.prob;
        }
        out.exact = sum;
        out.value = sum.get_d();
        return out;
    }
    double sum = 0;
    for (const auto& a : dist.atoms()) {
        sum += a.prob.get_d() * std::pow(std::abs(a.value.get_d()), order);
    }
    out.value = sum;
    return out;
}

// A walk question about n steps: target level k, window width A, barrier h.
struct WalkQuery {
    StepDistribution dist;
    std::int64_t n = 1;
    Rational k = 0;
    Rational window_a = 1;
    Rational barrier_h = 0;

    static WalkQuery make(StepDistribution dist, std::int64_t n, Rational k, Rational window_a,
                          Rational barrier_h = 0) {
        if (!dist.has_zero_mean()) {
            throw Error(ErrorCode::NotMeanZero, "walk queries need a mean-zero step law, '" +
                                                    dist.label() + "' has mean " +
                                                    std::to_string(dist.mean_double()));
        }
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
        if (window_a <= 0) throw Error(ErrorCode::InvalidArgument, "window A must be positive");
        if (barrier_h < 0) throw Error(ErrorCode::InvalidArgument, "barrier h must be nonnegative");
        return WalkQuery{std::move(dist), n, std::move(k), std::move(window_a), std::move(barrier_h)};
    }

    void require_acceptable() const {
        if (!lattice_info(dist).acceptable(window_a)) {
            throw Error(ErrorCode::NotAcceptable, "window A=" + to_string(window_a) +
                                                      " is below the lattice span of '" + dist.label() + "'");
        }
    }
};

enum class Method { ExactRational, ExactFloat, MonteCarlo };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::ExactRational: return "exact-rational";
        case Method::ExactFloat: return "exact-float";
        case Method::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

struct ProbResult {
    double value = 0;
    Method method = Method::ExactFloat;
    double std_error = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    std::uint64_t seed = 0;
    // Sampled paths; differs from trials for paired conditional estimates.
    std::uint64_t paths = 0;
    std::optional<Rational> exact;
    // Absolute rounding-error bound for exact-float results.
    double error_bound = 0;
    bool low_precision = false;

    static ProbResult from_rational(Rational q) {
        ProbResult r;
        r.method = Method::ExactRational;
        r.value = q.get_d();
        r.exact = std::move(q);
        return r;
    }

    static ProbResult from_float(double v, double err) {
        ProbResult r;
        r.method = Method::ExactFloat;
        r.value = v;
        r.error_bound = err;
        return r;
    }

    static ProbResult from_counts(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed,
                                  std::uint64_t min_hits) {
        ProbResult r;
        r.method = Method::MonteCarlo;
        r.hits = hits;
        r.trials = trials;
        r.seed = seed;
        r.value = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
        r.std_error = trials == 0 ? 0.0 : std::sqrt(r.value * (1 - r.value) / static_cast<double>(trials));
        r.low_precision = hits < min_hits;
        return r;
    }

    bool is_exact() const noexcept { return method != Method::MonteCarlo; }
};

struct Multiset {
    std::vector<Rational> elements;

    explicit Multiset(std::vector<Rational> elems) : elements(std::move(elems)) {
        if (elements.empty()) throw Error(ErrorCode::InvalidArgument, "multiset must be nonempty");
    }

    Rational total() const {
        Rational s = 0;
        for (const auto& e : elements) s += e;
        return s;
    }
};

}  // namespace ballotlab
