#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "ballotlab/error.hpp"
#include "ballotlab/exactdp.hpp"
#include "ballotlab/walkcore.hpp"

namespace ballotlab {

// h * exp(-x^2 / (2 n sigma^2)) / sqrt(2 pi sigma^2 n): Gaussian mass of a
// window of width h at x.
inline double stone_window_approx(double sigma2, std::int64_t n, double x, double hwindow) {
    if (!(sigma2 > 0)) throw Error(ErrorCode::InvalidArgument, "sigma^2 must be positive");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (!(hwindow > 0)) throw Error(ErrorCode::InvalidArgument, "window width must be positive");
    const double nv = static_cast<double>(n) * sigma2;
    return hwindow * std::exp(-x * x / (2 * nv)) / std::sqrt(2 * std::numbers::pi * nv);
}

// Point-mass approximation P{S_n = x} ~ span * exp(-x^2/(2 n sigma^2)) / sqrt(2 pi sigma^2 n).
// include_span=false drops the span factor.
inline double stone_lattice_approx(const StepDistribution& dist, std::int64_t n, const Rational& x,
                                   bool include_span = true) {
    const auto li = lattice_info(dist);
    if (!li.on_walk_lattice(n, x)) {
        throw Error(ErrorCode::OffLattice, to_string(x) + " is not on the lattice of S_" + std::to_string(n));
    }
    const double span = include_span ? li.span_h.get_d() : 1.0;
    return stone_window_approx(dist.variance(), n, x.get_d(), span);
}

struct ChernoffBounds {
    double upper = 0;
    double lower = 0;
};

// Bin(n,p) > (1+c)mu and < (1-c)mu tail bounds with mu = n p.
inline ChernoffBounds chernoff_binomial_bounds(std::int64_t n, double p, double c) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (!(p > 0 && p < 1)) throw Error(ErrorCode::InvalidArgument, "p must lie in (0,1)");
    if (!(c > 0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
    const double mu = static_cast<double>(n) * p;
    return {std::exp(-c * c * mu / (2 * (1 + c / 3))), std::exp(-c * c * mu / 2)};
}

// Tail bounds for Y = V_1 + ... + V_U, U ~ Bin(m,q), V_i = +-v fair signs.
inline ChernoffBounds chernoff_rand_bounds(std::int64_t m, double q, double v, double t) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
    if (!(q > 0 && q < 1)) throw Error(ErrorCode::InvalidArgument, "q must lie in (0,1)");
    if (!(v > 0)) throw Error(ErrorCode::InvalidArgument, "v must be positive");
    if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
    const double mq = static_cast<double>(m) * q;
    const double tail_u = std::exp(-mq / 3);
    return {std::exp(-t * t / (8 * mq + 4 * t * v / 3)) + tail_u, std::exp(-t * t / (8 * mq)) + tail_u};
}

struct XRule {
    enum class Kind { Zero, SqrtMultiple, Fixed };
    Kind kind = Kind::Zero;
    double multiple = 0;
    Rational fixed = 0;

    static XRule zero() { return {}; }
    static XRule sqrt_multiple(double c) { return {Kind::SqrtMultiple, c, 0}; }
    static XRule at(Rational x) { return {Kind::Fixed, 0, std::move(x)}; }

    // Requested x, snapped up to the lattice of S_n.
    Rational resolve(const LatticeInfo& li, std::int64_t n) const {
        Rational want = 0;
        if (kind == Kind::SqrtMultiple) want = Rational(multiple * std::sqrt(static_cast<double>(n)));
        if (kind == Kind::Fixed) want = fixed;
        return li.snap_up(n, want);
    }
};

struct CltRow {
    std::int64_t n = 0;
    Rational x = 0;
    double exact = 0;
    double approx = 0;
    double rel_error = 0;
};

// Exact point masses from the float DP against the lattice approximation.
inline std::vector<CltRow> clt_compare(const StepDistribution& dist, std::vector<std::int64_t> n_grid,
                                       const XRule& x_rule, bool include_span = true,
                                       const DpOptions& opts = {}) {
    if (n_grid.empty()) return {};
    std::sort(n_grid.begin(), n_grid.end());
    if (n_grid.front() < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    const auto li = lattice_info(dist);
    WalkStepper<double> stepper(dist, Constraint::none(), n_grid.back(), opts);
    std::vector<CltRow> rows;
    for (auto n : n_grid) {
        stepper.advance_to(n);
        CltRow row;
        row.n = n;
        row.x = x_rule.resolve(li, n);
        const Rational idx = (row.x - Rational(n) * stepper.base()) / stepper.span();
        const auto pos = idx.get_num().get_si() - stepper.first_index();
        row.exact = (pos >= 0 && pos < static_cast<std::int64_t>(stepper.mass().size()))
                        ? stepper.mass()[static_cast<std::size_t>(pos)]
                        : 0.0;
        row.approx = stone_lattice_approx(dist, n, row.x, include_span);
        row.rel_error = row.exact > 0 ? std::abs(row.approx / row.exact - 1) : std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ballotlab
