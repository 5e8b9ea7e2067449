#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "opuc/analytic.hpp"
#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/measure.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

// Relative Szegő function
//   (delta0 D)(z) = (1 - conj(alpha_0) f(z)) / rho_0 * (1 - z f_1(z)) / (1 - z f(z))
// built from the Schur function f and its one-step iterate f_1. Outer, hence
// zero-free on the disk; its boundary modulus squared is the weight ratio
// w / w_1.
inline Evaluator delta0D(const VerblunskySeq& v) {
    const cplx a0 = v.empty() ? cplx(0.0) : v.alpha(0);
    const double rho0 = v.empty() ? 1.0 : v.rho(0);
    const Evaluator f = schur_from_alphas(v);
    const Evaluator f1 = schur_from_alphas(v.shifted(1));
    return [a0, rho0, f, f1](cplx z) -> cplx {
        require_interior(z, "delta0D");
        const cplx fz = f(z);
        const cplx f1z = f1(z);
        return (1.0 - std::conj(a0) * fz) / rho0 * (1.0 - z * f1z) / (1.0 - z * fz);
    };
}

inline Evaluator delta0D(const CircleMeasure& m) {
    const SchurChain chain = SchurChain::from_measure(m, 1);
    const cplx a0 = chain.alpha(0);
    const double rho0 = std::sqrt(1.0 - abs_sqr(a0));
    const Evaluator f = chain.level(0);
    const Evaluator f1 = chain.level(1);
    return [a0, rho0, f, f1](cplx z) -> cplx {
        require_interior(z, "delta0D");
        const cplx fz = f(z);
        const cplx f1z = f1(z);
        return (1.0 - std::conj(a0) * fz) / rho0 * (1.0 - z * f1z) / (1.0 - z * fz);
    };
}

struct RatioResiduals {
    double ratio_identity = 0.0;  // | Re F / Re F_1 - |d0D|^2 (1-|z|^2|f|^2)/(1-|f|^2) |
    double disk_identity = 0.0;   // | 1-|zf_1|^2 - rho_0^2 (1-|f|^2)/|1-conj(a0) f|^2 |
};

// Residuals of the two internal identities tying F, F_1 and delta0D together.
// F and F_1 are computed independently from the sequence and its shift, not
// through the delta0D formula.
inline RatioResiduals ratio_identity_check(const VerblunskySeq& v, cplx z) {
    require_interior(z, "ratio_identity_check");
    const cplx a0 = v.empty() ? cplx(0.0) : v.alpha(0);
    const double rho0_sq = 1.0 - abs_sqr(a0);
    const cplx fz = schur_from_alphas_at(v, z);
    const cplx f1z = schur_from_alphas_at(v.shifted(1), z);

    const cplx zf = z * fz;
    const cplx zf1 = z * f1z;
    const double ReF = ((1.0 + zf) / (1.0 - zf)).real();
    const double ReF1 = ((1.0 + zf1) / (1.0 - zf1)).real();

    const cplx d0D = (1.0 - std::conj(a0) * fz) / std::sqrt(rho0_sq) * (1.0 - zf1) / (1.0 - zf);

    RatioResiduals res;
    const double scaled = abs_sqr(d0D) * (1.0 - abs_sqr(z) * abs_sqr(fz)) / (1.0 - abs_sqr(fz));
    res.ratio_identity = std::abs(ReF / ReF1 - scaled);
    res.disk_identity = std::abs((1.0 - abs_sqr(zf1)) -
                                 rho0_sq * (1.0 - abs_sqr(fz)) / abs_sqr(1.0 - std::conj(a0) * fz));
    return res;
}

// Radial-ladder limit of |delta0D|^2 at angle theta; the boundary value of
// the weight ratio w / w_1.
inline double weight_ratio_boundary(const VerblunskySeq& v, double theta,
                                    const RadialLadder& ladder = {}) {
    if (weight_from_alphas(v, theta) < 1e-12)
        throw ZeroWeight("weight_ratio_boundary: weight vanishes at this angle");
    const Evaluator d = delta0D(v);
    std::vector<double> vals;
    for (double r : ladder.radii()) vals.push_back(abs_sqr(d(std::polar(r, theta))));
    return richardson_limit(vals).value;
}

inline double weight_ratio_boundary(const CircleMeasure& m, double theta,
                                    const RadialLadder& ladder = {}) {
    if (boundary_weight(m, theta, ladder) < 1e-12)
        throw ZeroWeight("weight_ratio_boundary: weight vanishes at this angle");
    const Evaluator d = delta0D(m);
    std::vector<double> vals;
    for (double r : ladder.radii()) vals.push_back(abs_sqr(d(std::polar(r, theta))));
    return richardson_limit(vals).value;
}

// One step of the sum rule: rho_k^2 against the entropy of the weight ratio
// w_k / w_{k+1}.
struct SumRuleReport {
    int step = 0;
    double lhs = 0.0;  // coefficient side
    double rhs = 0.0;  // entropy side
    double abs_error() const { return std::abs(lhs - rhs); }
};

namespace detail {

inline std::vector<double> rational_weight_samples(const VerblunskySeq& v, std::size_t grid) {
    std::vector<double> w(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        w[j] = weight_from_alphas(v, two_pi * static_cast<double>(j) / static_cast<double>(grid));
        if (w[j] <= log_weight_floor)
            throw LogDivergence("sum rule: rational weight vanishes on the grid");
    }
    return w;
}

inline double mean_log_ratio(const std::vector<double>& num, const std::vector<double>& den) {
    double acc = 0.0;
    for (std::size_t j = 0; j < num.size(); ++j) acc += std::log(num[j] / den[j]);
    return acc / static_cast<double>(num.size());
}

}  // namespace detail

// Coefficient-backed rule: the shifted weights are the rational boundary
// values of the zero-tail fractions, evaluated exactly on the grid.
inline std::vector<SumRuleReport> step_sum_rule(const VerblunskySeq& v, int n_steps,
                                                std::size_t grid = default_grid_size) {
    if (n_steps < 0) throw Error("step_sum_rule: n_steps must be nonnegative");
    std::vector<std::vector<double>> weights;
    weights.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k)
        weights.push_back(detail::rational_weight_samples(v.shifted(static_cast<std::size_t>(k)), grid));
    std::vector<SumRuleReport> out;
    out.reserve(static_cast<std::size_t>(n_steps));
    for (int k = 0; k < n_steps; ++k) {
        SumRuleReport rep;
        rep.step = k;
        const double rho_k = static_cast<std::size_t>(k) < v.size() ? v.rho(static_cast<std::size_t>(k)) : 1.0;
        rep.lhs = rho_k * rho_k;
        rep.rhs = std::exp(detail::mean_log_ratio(weights[static_cast<std::size_t>(k)],
                                                  weights[static_cast<std::size_t>(k) + 1]));
        out.push_back(rep);
    }
    return out;
}

// Iterated form: (rho_0 ... rho_{n-1})^2 against the entropy of w / w_n.
inline SumRuleReport cumulative_sum_rule(const VerblunskySeq& v, int n,
                                         std::size_t grid = default_grid_size) {
    SumRuleReport rep;
    rep.step = n;
    rep.lhs = product_rho_sq(v, std::min(static_cast<std::size_t>(n), v.size()));
    const auto w0 = detail::rational_weight_samples(v, grid);
    const auto wn = detail::rational_weight_samples(v.shifted(static_cast<std::size_t>(n)), grid);
    rep.rhs = std::exp(detail::mean_log_ratio(w0, wn));
    return rep;
}

namespace detail {

// Extrapolated weights carry ladder noise around 1e-9; anything at or below
// this level is a zero of w for sentinel purposes, not a value to log.
inline constexpr double extrapolated_weight_floor = 1e-12;

inline std::vector<std::vector<double>> ladder_weights(const CircleMeasure& m, int levels,
                                                       std::size_t boundary_grid,
                                                       const RadialLadder& ladder) {
    const SchurChain chain = SchurChain::from_measure(m, static_cast<std::size_t>(levels));
    std::vector<std::vector<double>> weights(static_cast<std::size_t>(levels) + 1,
                                             std::vector<double>(boundary_grid));
    for (std::size_t k = 0; k <= static_cast<std::size_t>(levels); ++k) {
        const Evaluator F_k = caratheodory_from_schur(chain.level(k));
        for (std::size_t j = 0; j < boundary_grid; ++j) {
            const double theta =
                two_pi * static_cast<double>(j) / static_cast<double>(boundary_grid);
            const double w = boundary_weight(F_k, theta, ladder);
            if (w <= extrapolated_weight_floor)
                throw LogDivergence("sum rule: extrapolated weight vanishes at a grid angle");
            weights[k][j] = w;
        }
    }
    return weights;
}

}  // namespace detail

// Measure-backed rule: the shifted weights come from the Schur tower of the
// measure, read off at the boundary through the radial ladder. Coarser
// boundary grid, looser error regime.
inline std::vector<SumRuleReport> step_sum_rule(const CircleMeasure& m, int n_steps,
                                                std::size_t boundary_grid = 256,
                                                const RadialLadder& ladder = {}) {
    if (n_steps < 0) throw Error("step_sum_rule: n_steps must be nonnegative");
    const auto v = verblunsky_from_measure(m, n_steps);
    const auto weights = detail::ladder_weights(m, n_steps, boundary_grid, ladder);
    std::vector<SumRuleReport> out;
    for (int k = 0; k < n_steps; ++k) {
        SumRuleReport rep;
        rep.step = k;
        rep.lhs = v.rho(static_cast<std::size_t>(k)) * v.rho(static_cast<std::size_t>(k));
        rep.rhs = std::exp(detail::mean_log_ratio(weights[static_cast<std::size_t>(k)],
                                                  weights[static_cast<std::size_t>(k) + 1]));
        out.push_back(rep);
    }
    return out;
}

inline SumRuleReport cumulative_sum_rule(const CircleMeasure& m, int n,
                                         std::size_t boundary_grid = 256,
                                         const RadialLadder& ladder = {}) {
    const auto v = verblunsky_from_measure(m, n);
    const auto weights = detail::ladder_weights(m, n, boundary_grid, ladder);
    SumRuleReport rep;
    rep.step = n;
    rep.lhs = product_rho_sq(v, static_cast<std::size_t>(n));
    rep.rhs = std::exp(detail::mean_log_ratio(weights.front(), weights.back()));
    return rep;
}

// Both sides of the finite-order theorem: the radius product against the
// entropy of the order-n truncated weight, plus the margin over the source
// entropy (nonnegative up to roundoff, with equality as n reaches the full
// sequence).
struct SzegoTheoremReport {
    int n = 0;
    double product = 1.0;          // prod_{j<n} (1 - |alpha_j|^2)
    double entropy = 0.0;          // integral of log w^{(n)} dtheta/2pi
    double equality_error = 0.0;   // |product - exp(entropy)|
    double inequality_margin = 0.0;  // product - exp(source entropy)
};

inline SzegoTheoremReport szego_theorem_check(const VerblunskySeq& v, int n,
                                              std::size_t grid = default_grid_size) {
    SzegoTheoremReport rep;
    rep.n = n;
    rep.product = product_rho_sq(v, std::min(static_cast<std::size_t>(n), v.size()));
    const auto wn = detail::rational_weight_samples(v.truncated(static_cast<std::size_t>(n)), grid);
    double acc = 0.0;
    for (double s : wn) acc += std::log(s);
    rep.entropy = acc / static_cast<double>(grid);
    rep.equality_error = std::abs(rep.product - std::exp(rep.entropy));
    const auto w_full = detail::rational_weight_samples(v, grid);
    double acc_full = 0.0;
    for (double s : w_full) acc_full += std::log(s);
    rep.inequality_margin = rep.product - std::exp(acc_full / static_cast<double>(grid));
    return rep;
}

// Measure-backed form: coefficients are extracted first, and the margin is
// taken against the source measure's own entropy.
inline SzegoTheoremReport szego_theorem_check(const CircleMeasure& m, int n) {
    const auto v = verblunsky_from_measure(m, n);
    SzegoTheoremReport rep;
    rep.n = n;
    rep.product = product_rho_sq(v, static_cast<std::size_t>(n));
    const auto wn = detail::rational_weight_samples(v, m.grid_size());
    double acc = 0.0;
    for (double s : wn) acc += std::log(s);
    rep.entropy = acc / static_cast<double>(m.grid_size());
    rep.equality_error = std::abs(rep.product - std::exp(rep.entropy));
    double source = 0.0;
    for (double s : m.weight_samples()) {
        if (s <= log_weight_floor)
            throw LogDivergence("szego_theorem_check: source weight vanishes on the grid");
        source += std::log(s);
    }
    rep.inequality_margin = rep.product - std::exp(source / static_cast<double>(m.grid_size()));
    return rep;
}

// Ratio sequence phi*_{n-1}(z; shifted) / phi*_n(z; full) for n = 1..n_max;
// converges to delta0D(z), and is exactly stationary past the rank of a
// zero-tail sequence.
inline std::vector<cplx> delta0D_polynomial_ratios(const VerblunskySeq& v, cplx z, int n_max) {
    require_interior(z, "delta0D_polynomial_ratios");
    if (n_max < 1) throw Error("delta0D_polynomial_ratios: need n_max >= 1");
    // pad with the implied zero tail so degrees up to n_max exist
    std::vector<cplx> padded = v.alphas();
    padded.resize(std::max(v.size(), static_cast<std::size_t>(n_max)), cplx(0.0));
    const VerblunskySeq full(padded);
    const VerblunskySeq shifted = full.shifted(1);
    const auto full_vals = poly_values(full, z, n_max);
    const auto shift_vals = poly_values(shifted, z, n_max - 1);
    std::vector<cplx> ratios;
    ratios.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n)
        ratios.push_back(shift_vals[static_cast<std::size_t>(n) - 1].second /
                         full_vals[static_cast<std::size_t>(n)].second);
    return ratios;
}

// |delta0D(z) - D(z; v) / D(z; shifted v)| with both Szegő functions built
// from the truncated rational weights.
inline double delta0D_D_ratio_residual(const VerblunskySeq& v, cplx z,
                                       std::size_t grid = default_grid_size) {
    require_interior(z, "delta0D_D_ratio_residual");
    const auto D_num = szego_function(measure_from_alphas(v, grid));
    const auto D_den = szego_function(measure_from_alphas(v.shifted(1), grid));
    const cplx ratio = D_num(z) / D_den(z);
    return std::abs(delta0D(v)(z) - ratio);
}

}  // namespace opuc
