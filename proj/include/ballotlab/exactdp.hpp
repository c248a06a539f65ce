#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ballotlab/error.hpp"
#include "ballotlab/rational.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

enum class ConstraintKind { None, StrictlyPositiveInterior, AtLeast };

struct Constraint {
    ConstraintKind kind = ConstraintKind::None;
    Rational barrier_h = 0;  // AtLeast: S_t >= -barrier_h

    static Constraint none() { return {}; }
    static Constraint positive_interior() { return {ConstraintKind::StrictlyPositiveInterior, 0}; }
    static Constraint at_least(Rational h) {
        if (h < 0) throw Error(ErrorCode::InvalidArgument, "barrier h must be nonnegative");
        return {ConstraintKind::AtLeast, std::move(h)};
    }

    std::string name() const {
        switch (kind) {
            case ConstraintKind::None: return "none";
            case ConstraintKind::StrictlyPositiveInterior: return "strictly-positive-interior";
            case ConstraintKind::AtLeast: return "at-least(" + to_string(Rational(-barrier_h)) + ")";
        }
        return "?";
    }
};

enum class Arithmetic { Rational, Float };

struct DpOptions {
    std::int64_t state_cap = 20'000'000;
};

// Exact mode stores integer path weights over a common scale D^n, where D is
// the lcm of the atom probability denominators; float mode stores
// probabilities directly with scale 1.
template <class Weight>
using MassOf = std::conditional_t<std::is_same_v<Weight, Integer>, Rational, double>;

// P{S_n = x, constraint holds} on the lattice x = origin + span_h * index.
template <class Weight>
struct PathLawTable {
    std::int64_t n = 0;
    Rational support_origin = 0;  // value at index 0, n * min atom
    Rational span_h = 1;
    std::int64_t first_index = 0;  // index of mass[0]
    std::vector<Weight> mass;
    Weight scale = Weight(1);
    Constraint constraint;
    double error_bound = 0;  // float mode: L1 bound on accumulated rounding

    std::size_t size() const noexcept { return mass.size(); }

    Rational point(std::size_t i) const {
        return support_origin + span_h * Rational(first_index + static_cast<std::int64_t>(i));
    }

    MassOf<Weight> mass_at(std::size_t i) const {
        if constexpr (std::is_same_v<Weight, Integer>) {
            return make_rational(mass[i], scale);
        } else {
            return mass[i];
        }
    }

    double mass_double(std::size_t i) const {
        if constexpr (std::is_same_v<Weight, Integer>) {
            return ratio_to_double(mass[i], scale);
        } else {
            return mass[i];
        }
    }

    // Mass of S_n within [lo, hi) (or [lo, hi] when closed_hi).
    MassOf<Weight> window_mass(const Rational& lo, const Rational& hi, bool closed_hi = false) const {
        Weight acc = Weight(0);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            Rational x = point(i);
            if (x < lo) continue;
            if (closed_hi ? x > hi : x >= hi) break;
            acc += mass[i];
        }
        return normalize(acc);
    }

    MassOf<Weight> total() const {
        Weight acc = Weight(0);
        for (const auto& w : mass) acc += w;
        return normalize(acc);
    }

    MassOf<Weight> normalize(const Weight& w) const {
        if constexpr (std::is_same_v<Weight, Integer>) {
            return make_rational(w, scale);
        } else {
            return w;
        }
    }
};

// Advances the constrained endpoint law one step at a time. Interior
// positivity is enforced lazily (before the next step), so after t steps the
// table carries the constraint for times 1..t-1; at-least(-h) is enforced
// for times 1..t.
template <class Weight>
class WalkStepper {
public:
    WalkStepper(const StepDistribution& dist, Constraint constraint, std::int64_t max_steps,
                const DpOptions& opts = {})
        : constraint_(std::move(constraint)) {
        dist.require_finite("exact dynamic programming");
        const auto li = lattice_info(dist);
        span_ = li.span_h;
        base_ = dist.atoms().front().value;
        Integer denom = 1;
        for (const auto& a : dist.atoms()) denom = lcm(denom, a.prob.get_den());
        std::int64_t amax = 0;
        for (const auto& a : dist.atoms()) {
            Rational idx = (a.value - base_) / span_;
            const auto step = static_cast<std::int64_t>(idx.get_num().get_si());
            amax = std::max(amax, step);
            if constexpr (std::is_same_v<Weight, Integer>) {
                increments_.emplace_back(step, Integer(a.prob * Rational(denom)));
            } else {
                increments_.emplace_back(step, a.prob.get_d());
            }
        }
        step_denom_ = denom;
        amax_ = amax;
        const double states = static_cast<double>(max_steps) * static_cast<double>(amax) + 1.0;
        if (states > static_cast<double>(opts.state_cap)) {
            throw Error(ErrorCode::StateSpaceTooLarge,
                        std::to_string(static_cast<long long>(states)) + " lattice states exceed cap " +
                            std::to_string(opts.state_cap) + " for '" + dist.label() + "'");
        }
        mass_.assign(1, Weight(1));
    }

    std::int64_t steps() const noexcept { return t_; }

    void step() {
        if (constraint_.kind == ConstraintKind::StrictlyPositiveInterior && t_ >= 1) {
            prune_positive(t_);
        }
        convolve();
        ++t_;
        if (constraint_.kind == ConstraintKind::AtLeast) prune_at_least(t_);
    }

    void advance_to(std::int64_t n) {
        while (t_ < n) step();
    }

    PathLawTable<Weight> table() const {
        PathLawTable<Weight> out;
        out.n = t_;
        out.support_origin = Rational(t_) * base_;
        out.span_h = span_;
        out.first_index = first_;
        out.mass = mass_;
        out.scale = scale_;
        out.constraint = constraint_;
        out.error_bound = error_bound_;
        return out;
    }

    const std::vector<Weight>& mass() const noexcept { return mass_; }
    const Weight& scale() const noexcept { return scale_; }
    std::int64_t first_index() const noexcept { return first_; }
    const Rational& span() const noexcept { return span_; }
    const Rational& base() const noexcept { return base_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    void convolve() {
        std::vector<Weight> next(mass_.size() + static_cast<std::size_t>(amax_), Weight(0));
        double l1 = 0;
        if constexpr (!std::is_same_v<Weight, Integer>) {
            for (const auto& w : mass_) l1 += w;
        }
        for (const auto& [offset, w] : increments_) {
            auto out = next.begin() + offset;
            for (std::size_t i = 0; i < mass_.size(); ++i) {
                if constexpr (std::is_same_v<Weight, Integer>) {
                    if (mass_[i] != 0) mpz_addmul(out[i].get_mpz_t(), w.get_mpz_t(), mass_[i].get_mpz_t());
                } else {
                    out[i] += w * mass_[i];
                }
            }
        }
        mass_ = std::move(next);
        if constexpr (std::is_same_v<Weight, Integer>) {
            scale_ *= step_denom_;
        } else {
            constexpr double unit = std::numeric_limits<double>::epsilon() / 2;
            error_bound_ += static_cast<double>(increments_.size() + 1) * unit * l1;
        }
    }

    void drop_below(std::int64_t min_index) {
        if (min_index <= first_) return;
        const auto drop = static_cast<std::size_t>(
            std::min<std::int64_t>(min_index - first_, static_cast<std::int64_t>(mass_.size())));
        mass_.erase(mass_.begin(), mass_.begin() + static_cast<std::ptrdiff_t>(drop));
        first_ += static_cast<std::int64_t>(drop);
        if (mass_.empty()) mass_.assign(1, Weight(0));
    }

    // S_t = t*base + span*index > 0
    void prune_positive(std::int64_t t) {
        Rational bound = -Rational(t) * base_ / span_;
        drop_below(floor_of(bound).get_si() + 1);
    }

    // S_t >= -h
    void prune_at_least(std::int64_t t) {
        Rational bound = (-constraint_.barrier_h - Rational(t) * base_) / span_;
        drop_below(ceil_of(bound).get_si());
    }

    Constraint constraint_;
    Rational span_;
    Rational base_;
    std::vector<std::pair<std::int64_t, Weight>> increments_;
    Integer step_denom_ = 1;
    std::int64_t amax_ = 0;
    std::vector<Weight> mass_;
    Weight scale_ = Weight(1);
    std::int64_t first_ = 0;
    std::int64_t t_ = 0;
    double error_bound_ = 0;
};

template <class Weight>
PathLawTable<Weight> constrained_endpoint_law(const StepDistribution& dist, std::int64_t n,
                                              const Constraint& constraint, const DpOptions& opts = {}) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    WalkStepper<Weight> stepper(dist, constraint, n, opts);
    stepper.advance_to(n);
    return stepper.table();
}

// Exact value with an optional rational form; used for expectations and suprema.
struct Quantity {
    double value = 0;
    std::optional<Rational> exact;
    double error_bound = 0;
};

namespace detail {

template <class Weight>
ProbResult to_prob(const MassOf<Weight>& m, double error_bound) {
    if constexpr (std::is_same_v<Weight, Integer>) {
        return ProbResult::from_rational(m);
    } else {
        return ProbResult::from_float(std::clamp(m, 0.0, 1.0), error_bound);
    }
}

template <class Weight>
Quantity to_quantity(const MassOf<Weight>& m, double error_bound) {
    Quantity q;
    if constexpr (std::is_same_v<Weight, Integer>) {
        q.value = m.get_d();
        q.exact = m;
    } else {
        q.value = m;
        q.error_bound = error_bound;
    }
    return q;
}

template <class F>
decltype(auto) dispatch(Arithmetic mode, F&& f) {
    if (mode == Arithmetic::Rational) return f.template operator()<Integer>();
    return f.template operator()<double>();
}

inline void require_window(const WalkQuery& q) {
    q.dist.require_finite("exact window probability");
    q.require_acceptable();
}

// Largest total over runs of consecutive lattice points spanning a closed
// window of the given width.
template <class Weight>
Weight sup_closed_window(const std::vector<Weight>& mass, const Rational& span, const Rational& width) {
    const std::size_t len = static_cast<std::size_t>(floor_of(width / span).get_si()) + 1;
    Weight best = Weight(0);
    Weight acc = Weight(0);
    for (std::size_t i = 0; i < mass.size(); ++i) {
        acc += mass[i];
        if (i >= len) acc -= mass[i - len];
        if (acc > best) best = acc;
    }
    return best;
}

}  // namespace detail

// P{k <= S_n < k+A, S_i > 0 for 0 < i < n}.
inline ProbResult positive_path_window_prob(const WalkQuery& q, Arithmetic mode = Arithmetic::Rational,
                                            const DpOptions& opts = {}) {
    detail::require_window(q);
    if (q.k <= 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(q.dist, q.n, Constraint::positive_interior(), opts);
        return detail::to_prob<W>(law.window_mass(q.k, q.k + q.window_a), law.error_bound);
    });
}

// P{k <= S_n < k+A}.
inline ProbResult endpoint_window_prob(const StepDistribution& dist, std::int64_t n, const Rational& k,
                                       const Rational& window_a, Arithmetic mode = Arithmetic::Rational,
                                       const DpOptions& opts = {}) {
    dist.require_finite("exact window probability");
    if (window_a <= 0) throw Error(ErrorCode::InvalidArgument, "window A must be positive");
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(dist, n, Constraint::none(), opts);
        return detail::to_prob<W>(law.window_mass(k, k + window_a), law.error_bound);
    });
}

// P{S_i > 0 for 0 < i < n | k <= S_n < k+A}.
inline ProbResult conditional_ballot_prob(const WalkQuery& q, Arithmetic mode = Arithmetic::Rational,
                                          const DpOptions& opts = {}) {
    detail::require_window(q);
    if (q.k <= 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    return detail::dispatch(mode, [&]<class W>() {
        auto free = constrained_endpoint_law<W>(q.dist, q.n, Constraint::none(), opts);
        auto pos = constrained_endpoint_law<W>(q.dist, q.n, Constraint::positive_interior(), opts);
        auto den = free.window_mass(q.k, q.k + q.window_a);
        auto num = pos.window_mass(q.k, q.k + q.window_a);
        if (den == 0) {
            throw Error(ErrorCode::ZeroDenominator, "endpoint window [" + to_string(q.k) + ", " +
                                                        to_string(Rational(q.k + q.window_a)) +
                                                        ") has zero mass at n=" + std::to_string(q.n));
        }
        MassOf<W> ratio = num / den;
        // Relative float error of a ratio: both error bounds relative to the denominator.
        double err = 0;
        if constexpr (!std::is_same_v<W, Integer>) {
            err = (free.error_bound + pos.error_bound) / den;
        }
        return detail::to_prob<W>(ratio, err);
    });
}

// P{S_i > 0 for all 1 <= i <= m}.
inline ProbResult positive_prefix_prob(const StepDistribution& dist, std::int64_t m,
                                       Arithmetic mode = Arithmetic::Rational, const DpOptions& opts = {}) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(dist, m, Constraint::positive_interior(), opts);
        W acc = W(0);
        for (std::size_t i = 0; i < law.size(); ++i) {
            if (law.point(i) > 0) acc += law.mass[i];
        }
        return detail::to_prob<W>(law.normalize(acc), law.error_bound);
    });
}

// P{T_h > n} = P{S_i >= -h for all 1 <= i <= n}.
inline ProbResult stopping_time_tail(const StepDistribution& dist, std::int64_t n, const Rational& h,
                                     Arithmetic mode = Arithmetic::Rational, const DpOptions& opts = {}) {
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(dist, n, Constraint::at_least(h), opts);
        return detail::to_prob<W>(law.total(), law.error_bound);
    });
}

// E[S_n^2 | T_h > n], or E[S_n^2 | T_h > n, S_n >= threshold] when a threshold is given.
inline Quantity conditional_second_moment(const StepDistribution& dist, std::int64_t n, const Rational& h,
                                          const std::optional<Rational>& threshold,
                                          Arithmetic mode = Arithmetic::Rational, const DpOptions& opts = {}) {
    if (threshold && *threshold < 0) throw Error(ErrorCode::InvalidArgument, "threshold must be nonnegative");
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(dist, n, Constraint::at_least(h), opts);
        MassOf<W> num = 0;
        MassOf<W> den = 0;
        for (std::size_t i = 0; i < law.size(); ++i) {
            Rational x = law.point(i);
            if (threshold && x < *threshold) continue;
            if constexpr (std::is_same_v<W, Integer>) {
                num += Rational(law.mass[i]) * x * x;
                den += Rational(law.mass[i]);
            } else {
                const double xd = x.get_d();
                num += law.mass[i] * xd * xd;
                den += law.mass[i];
            }
        }
        if (den == 0) {
            throw Error(ErrorCode::ZeroDenominator, "conditioning event has zero probability at n=" +
                                                        std::to_string(n));
        }
        double err = 0;
        if constexpr (!std::is_same_v<W, Integer>) {
            const double reach = std::max(std::abs(law.point(0).get_d()),
                                          std::abs(law.point(law.size() - 1).get_d()));
            err = law.error_bound * reach * reach / den;
        }
        return detail::to_quantity<W>(num / den, err);
    });
}

// sup_x P{x <= S_n <= x + width}, closed window.
inline Quantity spread_sup(const StepDistribution& dist, std::int64_t n, const Rational& width = 1,
                           Arithmetic mode = Arithmetic::Rational, const DpOptions& opts = {}) {
    if (width <= 0) throw Error(ErrorCode::InvalidArgument, "window width must be positive");
    return detail::dispatch(mode, [&]<class W>() {
        auto law = constrained_endpoint_law<W>(dist, n, Constraint::none(), opts);
        return detail::to_quantity<W>(law.normalize(detail::sup_closed_window(law.mass, law.span_h, width)),
                                      law.error_bound);
    });
}

// spread_sup for every n = 1..max_n from one incremental pass.
inline std::vector<Quantity> spread_sup_sequence(const StepDistribution& dist, std::int64_t max_n,
                                                 const Rational& width = 1,
                                                 Arithmetic mode = Arithmetic::Rational,
                                                 const DpOptions& opts = {}) {
    return detail::dispatch(mode, [&]<class W>() {
        WalkStepper<W> stepper(dist, Constraint::none(), max_n, opts);
        std::vector<Quantity> out;
        out.reserve(static_cast<std::size_t>(max_n));
        while (stepper.steps() < max_n) {
            stepper.step();
            W best = detail::sup_closed_window(stepper.mass(), stepper.span(), width);
            MassOf<W> m;
            if constexpr (std::is_same_v<W, Integer>) {
                m = make_rational(best, stepper.scale());
            } else {
                m = best;
            }
            out.push_back(detail::to_quantity<W>(m, stepper.error_bound()));
        }
        return out;
    });
}

}  // namespace ballotlab
