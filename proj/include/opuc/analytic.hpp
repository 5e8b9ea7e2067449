#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/fft.hpp"
#include "opuc/measure.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

// Point evaluator for a function analytic on the open unit disk. Evaluators
// are closures over immutable source data; composing them keeps per-point
// cost linear in the composition depth.
using Evaluator = std::function<cplx(cplx)>;

inline cplx require_interior(cplx z, const char* where) {
    if (!is_interior(z)) throw BoundaryPoint(std::string(where) + ": |z| too close to 1");
    return z;
}

namespace detail {

// Horner sum c_0 + 2 sum_{n>=1} c_n z^n.
inline cplx herglotz_series(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0.0;
    for (std::size_t n = c.size(); n-- > 1;) acc = (acc + 2.0 * c[n]) * z;
    return acc + c[0];
}

inline cplx atom_kernel(double theta, cplx z) {
    const cplx e = std::polar(1.0, theta);
    return (e + z) / (e - z);
}

}  // namespace detail

// Carathéodory transform of a measure. The a.c. part enters through its
// quadrature moments, truncated at the N/4 resolution guard (spectrally
// accurate for smooth weights on the whole open disk); atoms contribute
// their Moebius kernels exactly, so radial limits at atoms stay honest.
inline Evaluator caratheodory(const CircleMeasure& m) {
    std::vector<cplx> c(static_cast<std::size_t>(m.max_moment_order()) + 1);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = m.weight_moment(static_cast<int>(n));
    const std::vector<Atom> atoms = m.atoms();
    return [c = std::move(c), atoms](cplx z) -> cplx {
        require_interior(z, "caratheodory");
        cplx value = detail::herglotz_series(c, z);
        for (const auto& a : atoms) value += a.mass * detail::atom_kernel(a.theta, z);
        return value;
    };
}

// R(z) = (2z)^{-1} (F(z) - 1); the removable point at the origin is filled
// from the moment series, R(0) = c_1.
inline Evaluator r_function(const CircleMeasure& m) {
    const Evaluator F = caratheodory(m);
    std::vector<cplx> low_moments;
    for (int n = 1; n <= std::min(8, m.max_moment_order()); ++n) low_moments.push_back(m.moment(n));
    return [F, low_moments](cplx z) -> cplx {
        require_interior(z, "r_function");
        if (std::abs(z) > 1e-4) return (F(z) - 1.0) / (2.0 * z);
        cplx acc = 0.0;
        for (std::size_t n = low_moments.size(); n-- > 0;) acc = acc * z + low_moments[n];
        return acc;
    };
}

// Mean over a circle recovers the value of an analytic function at the
// center, up to aliasing of order radius^points. The tiny default radius
// serves the z = 0 branches of single evaluators; chained evaluators must
// average on a moderate circle instead (see SchurChain), since every
// Schur step divides by z and magnifies noise by 1/radius per level.
inline cplx value_at_zero(const Evaluator& f, double radius = 1e-4, int points = 16) {
    cplx acc = 0.0;
    for (int k = 0; k < points; ++k)
        acc += f(std::polar(radius, two_pi * k / points));
    return acc / static_cast<double>(points);
}

// R = (2z)^{-1}(F - 1) for an arbitrary Carathéodory evaluator; the origin is
// filled by the small-circle mean of the quotient.
inline Evaluator r_from_caratheodory(const Evaluator& F) {
    auto direct = [F](cplx z) -> cplx { return (F(z) - 1.0) / (2.0 * z); };
    return [direct](cplx z) -> cplx {
        require_interior(z, "r_function");
        if (std::abs(z) > 1e-8) return direct(z);
        return value_at_zero(direct);
    };
}

// Invert F = (1 + zf)/(1 - zf) for the Schur function. Near the origin the
// quotient is replaced by the small-circle mean of itself, which fills the
// removable singularity with f(0) = c_1.
inline Evaluator schur_from_caratheodory(const Evaluator& F) {
    auto direct = [F](cplx z) -> cplx {
        const cplx Fz = F(z);
        const cplx den = z * (Fz + 1.0);
        if (std::abs(Fz + 1.0) < 1e-14)
            throw DegenerateF("schur_from_caratheodory: F(z) + 1 vanished");
        return (Fz - 1.0) / den;
    };
    return [direct](cplx z) -> cplx {
        require_interior(z, "schur");
        if (std::abs(z) > 1e-8) return direct(z);
        return value_at_zero(direct);
    };
}

inline Evaluator caratheodory_from_schur(const Evaluator& f) {
    return [f](cplx z) -> cplx {
        require_interior(z, "caratheodory_from_schur");
        const cplx zf = z * f(z);
        if (std::abs(1.0 - zf) < 1e-14)
            throw DegenerateF("caratheodory_from_schur: 1 - z f(z) vanished");
        return (1.0 + zf) / (1.0 - zf);
    };
}

// One step of the Schur algorithm: peel the leading coefficient,
// z f_1 = (f - a0) / (1 - conj(a0) f).
inline Evaluator schur_step_down(const Evaluator& f, cplx alpha0) {
    if (!(std::abs(alpha0) < 1.0)) throw InvalidAlpha("schur_step_down: |alpha0| must be < 1");
    auto direct = [f, alpha0](cplx z) -> cplx {
        const cplx fz = f(z);
        return (fz - alpha0) / ((1.0 - std::conj(alpha0) * fz) * z);
    };
    return [direct](cplx z) -> cplx {
        require_interior(z, "schur_step_down");
        if (std::abs(z) > 1e-8) return direct(z);
        return value_at_zero(direct);
    };
}

// Inverse step: f = (a0 + z f_1) / (1 + conj(a0) z f_1).
inline Evaluator schur_step_up(const Evaluator& f1, cplx alpha0) {
    if (!(std::abs(alpha0) < 1.0)) throw InvalidAlpha("schur_step_up: |alpha0| must be < 1");
    return [f1, alpha0](cplx z) -> cplx {
        require_interior(z, "schur_step_up");
        const cplx zf1 = z * f1(z);
        return (alpha0 + zf1) / (1.0 + std::conj(alpha0) * zf1);
    };
}

// Finite Schur fraction with zero tail: fold the coefficients back through
// the inverse step. Rational in z, defined on the closed disk.
inline cplx schur_from_alphas_at(const VerblunskySeq& v, cplx z) {
    cplx f = 0.0;
    for (std::size_t j = v.size(); j-- > 0;) {
        const cplx a = v.alpha(j);
        const cplx zf = z * f;
        f = (a + zf) / (1.0 + std::conj(a) * zf);
    }
    return f;
}

inline Evaluator schur_from_alphas(VerblunskySeq v) {
    return [v = std::move(v)](cplx z) -> cplx { return schur_from_alphas_at(v, z); };
}

inline Evaluator caratheodory_from_alphas(VerblunskySeq v) {
    return caratheodory_from_schur(schur_from_alphas(std::move(v)));
}

// Finite fractions are rational with no poles on the closed disk, so their
// Carathéodory transform evaluates honestly on the circle itself. This is
// the exact route to the weight of a zero-tail coefficient sequence.
inline cplx caratheodory_from_alphas_on_circle(const VerblunskySeq& v, double theta) {
    const cplx z = std::polar(1.0, theta);
    const cplx zf = z * schur_from_alphas_at(v, z);
    return (1.0 + zf) / (1.0 - zf);
}

inline double weight_from_alphas(const VerblunskySeq& v, double theta) {
    return caratheodory_from_alphas_on_circle(v, theta).real();
}

// Materialize the measure of a zero-tail sequence by sampling its rational
// weight on the grid.
inline CircleMeasure measure_from_alphas(const VerblunskySeq& v,
                                         std::size_t grid = default_grid_size) {
    std::vector<double> w(grid);
    for (std::size_t j = 0; j < grid; ++j)
        w[j] = weight_from_alphas(v, two_pi * static_cast<double>(j) / static_cast<double>(grid));
    return CircleMeasure::from_samples(std::move(w)).normalized();
}

// The tower f = f_0, f_1, f_2, ... of Schur iterates, each level consuming
// one coefficient via f_k(0). Levels are built eagerly so the chain is
// immutable afterwards.
class SchurChain {
public:
    static SchurChain from_measure(const CircleMeasure& m, std::size_t depth) {
        return SchurChain(schur_from_caratheodory(caratheodory(m)), depth);
    }

    static SchurChain from_alphas(const VerblunskySeq& v, std::size_t depth) {
        SchurChain chain;
        for (std::size_t k = 0; k <= depth; ++k) {
            chain.levels_.push_back(schur_from_alphas(v.shifted(k)));
            if (k < depth) chain.alphas_.push_back(k < v.size() ? v.alpha(k) : cplx(0.0));
        }
        return chain;
    }

    SchurChain(Evaluator base, std::size_t depth) {
        levels_.push_back(std::move(base));
        for (std::size_t k = 0; k < depth; ++k) {
            const cplx a = value_at_zero(levels_.back(), 0.5, 64);
            if (!(std::abs(a) < 1.0))
                throw NumericalBreakdown("schur chain: |f_" + std::to_string(k) +
                                         "(0)| reached 1");
            alphas_.push_back(a);
            levels_.push_back(schur_step_down(levels_.back(), a));
        }
    }

    std::size_t depth() const { return alphas_.size(); }
    cplx alpha(std::size_t k) const { return alphas_.at(k); }
    const std::vector<cplx>& alphas() const { return alphas_; }
    const Evaluator& level(std::size_t k) const { return levels_.at(k); }
    cplx eval(std::size_t k, cplx z) const { return levels_.at(k)(z); }

private:
    SchurChain() = default;
    std::vector<Evaluator> levels_;
    std::vector<cplx> alphas_;
};

// Both sides of the coefficient-sum / log-integrability equivalence, reported
// for finite data only; no infinite-sequence verdict is ever claimed.
struct SzegoConditionReport {
    bool holds = false;          // prefix-based verdict
    double alpha_sq_sum = 0.0;   // sum of |alpha_j|^2 over the available prefix
    double log_integral = 0.0;   // entropy side; -inf sentinel when w hits zero
    bool log_divergent = false;
    std::vector<double> partial_sums;  // running coefficient-side sums
};

// Weight samples at or below this floor are treated as zeros of w: the log
// integral is reported as the -inf sentinel instead of a floored quadrature.
inline constexpr double log_weight_floor = 1e-300;

inline SzegoConditionReport szego_condition(const VerblunskySeq& v) {
    SzegoConditionReport rep;
    double sum = 0.0;
    double log_prod = 0.0;
    rep.partial_sums.reserve(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        sum += abs_sqr(v.alpha(j));
        log_prod += std::log(v.rho(j) * v.rho(j));
        rep.partial_sums.push_back(sum);
    }
    rep.alpha_sq_sum = sum;
    // finite data with zero tail: the truncated weight has entropy
    // sum_j log(rho_j^2) exactly
    rep.log_integral = log_prod;
    // heuristic trend flag: the last third of the prefix still contributes a
    // proportionate share, so the sum shows no sign of settling
    if (v.size() >= 9) {
        const double tail_start = rep.partial_sums[v.size() - v.size() / 3 - 1];
        rep.holds = (sum - tail_start) <= 0.2 * sum + 1e-15;
    } else {
        rep.holds = true;
    }
    return rep;
}

inline SzegoConditionReport szego_condition(const CircleMeasure& m, int n_alphas = 32) {
    SzegoConditionReport rep;
    const auto& w = m.weight_samples();
    double acc = 0.0;
    bool divergent = false;
    for (double s : w) {
        if (s <= log_weight_floor) {
            divergent = true;
            break;
        }
        acc += std::log(s);
    }
    rep.log_divergent = divergent;
    rep.log_integral = divergent ? -std::numeric_limits<double>::infinity()
                                 : acc / static_cast<double>(w.size());
    rep.holds = !divergent;
    const auto v = verblunsky_from_measure(m, n_alphas);
    double sum = 0.0;
    rep.partial_sums.reserve(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        sum += abs_sqr(v.alpha(j));
        rep.partial_sums.push_back(sum);
    }
    rep.alpha_sq_sum = sum;
    return rep;
}

// Szegő function D(z) = exp( integral K(theta, z) log w(theta) dtheta / 4pi ),
// evaluated through the Fourier series of log w: log D = l_0/2 + sum l_n z^n.
inline Evaluator szego_function(const CircleMeasure& m) {
    const auto& w = m.weight_samples();
    std::vector<double> logs(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] <= log_weight_floor)
            throw SzegoConditionFails("szego_function: weight vanishes on the grid");
        logs[j] = std::log(w[j]);
    }
    auto ell = fourier_coefficients(logs);
    ell.resize(w.size() / 4 + 1);
    return [ell = std::move(ell)](cplx z) -> cplx {
        require_interior(z, "szego_function");
        cplx acc = 0.0;
        for (std::size_t n = ell.size(); n-- > 1;) acc = (acc + ell[n]) * z;
        return std::exp(acc + 0.5 * ell[0]);
    };
}

// Radii 1 - 2^{-k}, k = k_min..k_max, increasing toward the boundary.
struct RadialLadder {
    int k_min = 4;
    int k_max = 14;

    std::vector<double> radii() const {
        if (k_min < 1 || k_max < k_min || k_max > 19)
            throw Error("radial ladder: need 1 <= k_min <= k_max <= 19");
        std::vector<double> r;
        r.reserve(static_cast<std::size_t>(k_max - k_min) + 1);
        for (int k = k_min; k <= k_max; ++k) r.push_back(1.0 - std::ldexp(1.0, -k));
        return r;
    }
};

struct Extrapolated {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

inline double richardson_value(const std::vector<double>& seq, double* err_out) {
    std::vector<double> t = seq;
    const std::size_t m = t.size() - 1;
    double best = t[m];
    double best_err = std::abs(t[m] - t[m - 1]);
    double prev_tail = t[m];
    for (std::size_t j = 1; j <= m; ++j) {
        const double factor = std::ldexp(1.0, static_cast<int>(j)) - 1.0;
        for (std::size_t i = m; i >= j; --i) t[i] = t[i] + (t[i] - t[i - 1]) / factor;
        if (!std::isfinite(t[m]))
            throw ExtrapolationUnstable("richardson_limit: non-finite tableau");
        const double corr = std::abs(t[m] - prev_tail);
        if (corr < best_err) {
            best_err = corr;
            best = t[m];
        }
        prev_tail = t[m];
    }
    if (err_out) *err_out = best_err;
    return best;
}

}  // namespace detail

// Richardson extrapolation for a sequence sampled at step sizes halving from
// entry to entry, assuming an expansion in integer powers of the step. A
// divergent input (a 1/h pole, say) can still produce a settled-looking
// tableau, so the limit is recomputed without the final rung: genuine limits
// are cut-independent, poles double.
inline Extrapolated richardson_limit(const std::vector<double>& seq) {
    if (seq.size() < 4) throw Error("richardson_limit: need at least four entries");
    double full_err = 0.0;
    const double full = detail::richardson_value(seq, &full_err);
    std::vector<double> shorter(seq.begin(), seq.end() - 1);
    const double partial = detail::richardson_value(shorter, nullptr);
    const double cut_diff = std::abs(full - partial);
    if (cut_diff > 0.05 * (1.0 + std::abs(full)) || full_err > 0.05 * (1.0 + std::abs(full)))
        throw ExtrapolationUnstable("richardson_limit: estimates do not settle");
    return {full, std::max(full_err, cut_diff)};
}

// Boundary weight w(theta) as the radial limit of Re F(r e^{i theta}).
inline double boundary_weight(const Evaluator& F, double theta, const RadialLadder& ladder = {}) {
    std::vector<double> vals;
    for (double r : ladder.radii()) vals.push_back(F(std::polar(r, theta)).real());
    return richardson_limit(vals).value;
}

inline double boundary_weight(const CircleMeasure& m, double theta, const RadialLadder& ladder = {}) {
    return boundary_weight(caratheodory(m), theta, ladder);
}

// Mass of a possible point at theta0: the radial limit of
// (1 - r) Re F(r e^{i theta0}) / (1 + r). The kernel of an atom at theta0
// contributes its mass exactly at every rung; everything else extrapolates
// away.
inline double pure_point_mass(const Evaluator& F, double theta0, const RadialLadder& ladder = {}) {
    std::vector<double> vals;
    for (double r : ladder.radii())
        vals.push_back((1.0 - r) * F(std::polar(r, theta0)).real() / (1.0 + r));
    return richardson_limit(vals).value;
}

inline double pure_point_mass(const CircleMeasure& m, double theta0,
                              const RadialLadder& ladder = {}) {
    return pure_point_mass(caratheodory(m), theta0, ladder);
}

}  // namespace opuc
