#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opuc/analytic.hpp"
#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/rng.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

struct Mat2 {
    cplx a, b, c, d;  // row-major [[a, b], [c, d]]

    cplx det() const { return a * d - b * c; }
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }
    double frobenius() const {
        return std::sqrt(abs_sqr(a) + abs_sqr(b) + abs_sqr(c) + abs_sqr(d));
    }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

struct Vec2 {
    cplx x, y;
    double norm() const { return std::sqrt(abs_sqr(x) + abs_sqr(y)); }
};

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

// One-step transfer matrix rho^{-1} [[z, -conj(alpha)], [-alpha z, 1]];
// determinant z.
inline Mat2 a_matrix(cplx alpha, cplx z) {
    const double a2 = abs_sqr(alpha);
    if (!(a2 < 1.0)) throw InvalidAlpha("a_matrix: |alpha| must be < 1");
    const double inv_rho = 1.0 / std::sqrt(1.0 - a2);
    return {inv_rho * z, -inv_rho * std::conj(alpha), -inv_rho * alpha * z, cplx(inv_rho)};
}

// Inverse step (adjugate over det z); used by the backward Weyl recursion.
inline Mat2 a_matrix_inverse(cplx alpha, cplx z) {
    const double a2 = abs_sqr(alpha);
    if (!(a2 < 1.0)) throw InvalidAlpha("a_matrix_inverse: |alpha| must be < 1");
    if (std::abs(z) < 1e-300) throw ZeroDenominator("a_matrix_inverse: z = 0 is singular");
    const cplx s = 1.0 / (std::sqrt(1.0 - a2) * z);
    return {s, s * std::conj(alpha), s * alpha * z, s * z};
}

// Ordered product A(alpha_{n-1}) ... A(alpha_0), periodically rescaled by the
// largest entry so runs of 10^4 factors stay inside double range; log_scale
// carries the discarded magnitude.
//
// The determinant is accumulated factor by factor from each step's own
// entries. The entrywise determinant of the multiplied-out product loses all
// precision once |z|^n falls below eps * ||T_n||^2 (the two O(1) products
// cancel); the factor accumulation keeps relative accuracy ~ n * eps at any
// scale.
struct TransferMatrix {
    Mat2 m{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
    double log_scale = 0.0;
    int steps = 0;
    double det_log_abs = 0.0;
    double det_arg = 0.0;

    double log_norm() const { return std::log(m.frobenius()) + log_scale; }

    // log|det| and (unwrapped) arg of the full-scale product
    std::pair<double, double> log_det() const { return {det_log_abs, det_arg}; }

    // entries at full scale; valid while exp(log_scale) is representable
    Mat2 value() const {
        const double s = std::exp(log_scale);
        return {m.a * s, m.b * s, m.c * s, m.d * s};
    }

    Vec2 apply(const Vec2& v) const {
        const double s = std::exp(log_scale);
        const Vec2 w = m * v;
        return {w.x * s, w.y * s};
    }

    void push_factor(const Mat2& a) {
        m = a * m;
        const cplx da = a.det();
        det_log_abs += std::log(std::abs(da));
        det_arg += std::arg(da);
        ++steps;
        if (steps % 32 == 0) rescale();
    }

    void rescale() {
        const double s = m.max_abs();
        if (s > 0.0) {
            const double inv = 1.0 / s;
            m = {m.a * inv, m.b * inv, m.c * inv, m.d * inv};
            log_scale += std::log(s);
        }
    }
};

inline TransferMatrix cocycle(const VerblunskySeq& v, cplx z, int n) {
    if (n < 0 || static_cast<std::size_t>(n) > v.size())
        throw Error("cocycle: step count exceeds coefficient count");
    TransferMatrix t;
    for (int k = 0; k < n; ++k) t.push_factor(a_matrix(v.alpha(static_cast<std::size_t>(k)), z));
    return t;
}

// Values (psi_n(z), psi_n^*(z)) of the second-kind family: the polynomials of
// the sign-flipped coefficients.
inline std::vector<std::pair<cplx, cplx>> second_kind_values(const VerblunskySeq& v, cplx z,
                                                             int upto) {
    return poly_values(aleksandrov(v, cplx(-1.0)), z, upto);
}

namespace detail {

inline VerblunskySeq padded_to(const VerblunskySeq& v, std::size_t len) {
    if (v.size() >= len) return v;
    std::vector<cplx> alphas = v.alphas();
    alphas.resize(len, cplx(0.0));
    return VerblunskySeq(std::move(alphas));
}

}  // namespace detail

struct ConvergenceRow {
    int n = 0;
    double abs_error = 0.0;
};

// Rows |psi_n^* / phi_n^* - F(z)| for n = 1..n_max. By default F is the
// transform of the zero-tail sequence itself; a reference value (say from a
// measure) can be supplied instead.
inline std::vector<ConvergenceRow> f_limit_table(const VerblunskySeq& v, cplx z, int n_max,
                                                 std::optional<cplx> F_ref = {}) {
    require_interior(z, "f_limit_table");
    const cplx F = F_ref ? *F_ref : caratheodory_from_alphas(v)(z);
    const auto padded = detail::padded_to(v, static_cast<std::size_t>(n_max));
    const auto phi = poly_values(padded, z, n_max);
    const auto psi = second_kind_values(padded, z, n_max);
    std::vector<ConvergenceRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const auto& [phi_n, phi_star] = phi[static_cast<std::size_t>(n)];
        const auto& [psi_n, psi_star] = psi[static_cast<std::size_t>(n)];
        (void)phi_n;
        (void)psi_n;
        rows.push_back({n, std::abs(psi_star / phi_star - F)});
    }
    return rows;
}

// Weyl solution u_k = psi_k + F phi_k, u_k^* = -psi_k^* + F phi_k^*, the
// unique decaying combination when beta = F(z).
struct WeylSolution {
    std::vector<cplx> u, u_star;
    cplx beta;
};

inline WeylSolution weyl_solution(const VerblunskySeq& v, cplx z, int K,
                                  std::optional<cplx> F_ref = {}) {
    require_interior(z, "weyl_solution");
    const cplx F = F_ref ? *F_ref : caratheodory_from_alphas(v)(z);
    const auto padded = detail::padded_to(v, static_cast<std::size_t>(K));
    const auto phi = poly_values(padded, z, K);
    const auto psi = second_kind_values(padded, z, K);
    WeylSolution sol;
    sol.beta = F;
    sol.u.reserve(static_cast<std::size_t>(K) + 1);
    sol.u_star.reserve(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        sol.u.push_back(psi[static_cast<std::size_t>(k)].first +
                        F * phi[static_cast<std::size_t>(k)].first);
        sol.u_star.push_back(-psi[static_cast<std::size_t>(k)].second +
                             F * phi[static_cast<std::size_t>(k)].second);
    }
    return sol;
}

struct WeylFit {
    cplx beta_hat;
    double denominator = 0.0;  // normal-equation denominator, running-normalized
};

// Closed-form complex least squares for the beta minimizing
//   sum_{n=K/2}^{K} |(psi_n, -psi_n^*) + beta (phi_n, phi_n^*)|^2.
// The window matches the tail-norm convention: the ell^2 characterization of
// beta lives in the tail, and the early terms would otherwise dominate the
// normal equation and cap convergence at O(1/K). Numerator and denominator
// are rescaled together whenever they grow large; the quotient is
// scale-invariant.
inline WeylFit weyl_beta(const VerblunskySeq& v, cplx z, int K) {
    require_interior(z, "weyl_beta");
    const auto padded = detail::padded_to(v, static_cast<std::size_t>(K));
    const auto phi = poly_values(padded, z, K);
    const auto psi = second_kind_values(padded, z, K);
    cplx num = 0.0;
    double den = 0.0;
    for (int n = K / 2; n <= K; ++n) {
        const auto& [phi_n, phi_star] = phi[static_cast<std::size_t>(n)];
        const auto& [psi_n, psi_star] = psi[static_cast<std::size_t>(n)];
        num += std::conj(phi_star) * psi_star - std::conj(phi_n) * psi_n;
        den += abs_sqr(phi_n) + abs_sqr(phi_star);
        if (den > 1e250) {
            num *= 1e-250;
            den *= 1e-250;
        }
    }
    if (!(den > 0.0) || !std::isfinite(den))
        throw IllConditioned("weyl_beta: degenerate normal equation");
    return {num / den, den};
}

// Residual sum over the window n = K/2 .. K for a given beta; summable along
// K exactly when beta is the Weyl value.
inline double weyl_tail_sum(const VerblunskySeq& v, cplx z, cplx beta, int K) {
    require_interior(z, "weyl_tail_sum");
    const auto padded = detail::padded_to(v, static_cast<std::size_t>(K));
    const auto phi = poly_values(padded, z, K);
    const auto psi = second_kind_values(padded, z, K);
    double acc = 0.0;
    for (int n = K / 2; n <= K; ++n) {
        const auto& [phi_n, phi_star] = phi[static_cast<std::size_t>(n)];
        const auto& [psi_n, psi_star] = psi[static_cast<std::size_t>(n)];
        acc += abs_sqr(psi_n + beta * phi_n) + abs_sqr(-psi_star + beta * phi_star);
    }
    return acc;
}

// m-tilde analog: u_0^* / u_0 = (-1 + F) / (1 + F), which also equals z f(z).
inline cplx m_tilde(cplx F) {
    if (std::abs(F + 1.0) < 1e-14) throw DegenerateF("m_tilde: F + 1 vanished");
    return (-1.0 + F) / (1.0 + F);
}

// First ratio of the Weyl solution in closed form.
inline cplx m_plus0(cplx alpha0, cplx f_at_z, cplx z) {
    const double a2 = abs_sqr(alpha0);
    if (!(a2 < 1.0)) throw InvalidAlpha("m_plus0: |alpha0| must be < 1");
    return z * (1.0 - std::conj(alpha0) * f_at_z) / std::sqrt(1.0 - a2);
}

// Ratios m_n^+ = u_{n+1} / u_n for n = 0..n_count-1 from the forward Weyl
// solution. Exceptional points where some u_n vanishes abort with the index;
// nothing is perturbed silently.
inline std::vector<cplx> m_plus_sequence(const VerblunskySeq& v, cplx z, int n_count,
                                         std::optional<cplx> F_ref = {}) {
    const auto sol = weyl_solution(v, z, n_count, F_ref);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n_count));
    for (int n = 0; n < n_count; ++n) {
        const cplx u_n = sol.u[static_cast<std::size_t>(n)];
        if (std::abs(u_n) < 1e-280)
            throw ZeroDenominator("m_plus_sequence: u_" + std::to_string(n) + " vanished");
        out.push_back(sol.u[static_cast<std::size_t>(n) + 1] / u_n);
    }
    return out;
}

struct LyapunovReport {
    cplx z;
    double gamma2 = 0.0;        // log rate of the decaying solution, nats/step
    double gamma = 0.0;         // log|z| - gamma2
    double gamma2_mplus = 0.0;  // average of log|m_j^+| over the trusted window
    double mc_stderr = 0.0;     // 0 for deterministic runs
    bool converged = true;
};

// Decay rate of the Weyl solution. The minimal solution of the recursion is
// computed by backward iteration from an arbitrary seed (forward iteration
// loses it to roundoff at an exponential rate); only indices at most K/2 are
// trusted, the upper half being the alignment transient.
inline LyapunovReport lyapunov_deterministic(const VerblunskySeq& v, cplx z) {
    require_interior(z, "lyapunov_deterministic");
    const int K = static_cast<int>(v.size());
    if (K < 16) throw Error("lyapunov_deterministic: need at least 16 coefficients");
    std::vector<double> log_norm(static_cast<std::size_t>(K) + 1);
    std::vector<cplx> first(static_cast<std::size_t>(K) + 1);
    std::vector<double> first_scale(static_cast<std::size_t>(K) + 1);

    Vec2 xi{cplx(1.0), cplx(0.0)};
    double scale = 0.0;
    log_norm[static_cast<std::size_t>(K)] = std::log(xi.norm());
    first[static_cast<std::size_t>(K)] = xi.x;
    first_scale[static_cast<std::size_t>(K)] = 0.0;
    for (int k = K - 1; k >= 0; --k) {
        xi = a_matrix_inverse(v.alpha(static_cast<std::size_t>(k)), z) * xi;
        const double n = xi.norm();
        if (n > 1e200 || n < 1e-200) {
            xi = {xi.x / n, xi.y / n};
            scale += std::log(n);
        }
        log_norm[static_cast<std::size_t>(k)] = std::log(xi.norm()) + scale;
        first[static_cast<std::size_t>(k)] = xi.x;
        first_scale[static_cast<std::size_t>(k)] = scale;
    }

    auto slope = [&](int lo, int hi) {
        return (log_norm[static_cast<std::size_t>(hi)] - log_norm[static_cast<std::size_t>(lo)]) /
               static_cast<double>(hi - lo);
    };

    LyapunovReport rep;
    rep.z = z;
    rep.gamma2 = slope(K / 4, K / 2);
    rep.gamma = std::log(std::abs(z)) - rep.gamma2;
    const double alt = slope(K / 8, K / 4);
    rep.converged = std::abs(alt - rep.gamma2) <= 1e-2;

    // the window average of log|m_j^+| telescopes to the slope of log|u|
    // over the same trusted indices
    const int half = K / 2;
    const int quarter = K / 4;
    const double log_u_half = std::log(std::abs(first[static_cast<std::size_t>(half)])) +
                              first_scale[static_cast<std::size_t>(half)];
    const double log_u_quarter = std::log(std::abs(first[static_cast<std::size_t>(quarter)])) +
                                 first_scale[static_cast<std::size_t>(quarter)];
    rep.gamma2_mplus = (log_u_half - log_u_quarter) / static_cast<double>(half - quarter);
    return rep;
}

// Parameters of the stochastic coefficient law: i.i.d. draws uniform on the
// disk of the given radius.
struct DiskLaw {
    double radius = 0.5;
};

struct StochasticLyapunovReport {
    cplx z;
    int n_steps = 0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    double gamma = 0.0;            // mean windowed growth rate of ||T_n||
    double gamma_stderr = 0.0;
    double mean_log_mplus = 0.0;   // mean of log|m_0^+| over fresh sequences
    double mplus_stderr = 0.0;
    double identity_residual = 0.0;   // |E log|m+| - (log|z| - gamma)|
    double identity_threshold = 0.0;  // 3 x combined standard error
    bool identity_ok = false;
};

// Monte Carlo check of the Kotani-type identity
//   E(log |m^+(z)|) = log|z| - gamma(z)
// with the two sides estimated from disjoint counter-based streams: even
// sample indices feed the cocycle-norm side, odd ones feed the m^+ side.
inline StochasticLyapunovReport lyapunov_stochastic(const DiskLaw& law, cplx z, int n_steps,
                                                    int n_samples, std::uint64_t seed) {
    require_interior(z, "lyapunov_stochastic");
    if (law.radius < 0.0 || law.radius >= 1.0)
        throw InvalidAlpha("lyapunov_stochastic: law radius must lie in [0, 1)");
    if (n_steps < 8 || n_samples < 2) throw Error("lyapunov_stochastic: run too short");

    StochasticLyapunovReport rep;
    rep.z = z;
    rep.n_steps = n_steps;
    rep.n_samples = n_samples;
    rep.seed = seed;

    std::vector<double> gamma_draws(static_cast<std::size_t>(n_samples));
    std::vector<double> mplus_draws(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        // cocycle stream: windowed growth rate of the matrix norm
        CounterRng cocycle_rng(seed, 2 * static_cast<std::uint64_t>(i));
        TransferMatrix t;
        double log_norm_half = 0.0;
        for (int k = 0; k < n_steps; ++k) {
            t.push_factor(a_matrix(cocycle_rng.next_uniform_disk(law.radius), z));
            if (k + 1 == n_steps / 2) log_norm_half = t.log_norm();
        }
        gamma_draws[static_cast<std::size_t>(i)] =
            (t.log_norm() - log_norm_half) / static_cast<double>(n_steps - n_steps / 2);

        // m^+ stream: fresh coefficients, Schur fraction, closed-form m_0^+
        CounterRng mplus_rng(seed, 2 * static_cast<std::uint64_t>(i) + 1);
        std::vector<cplx> alphas(static_cast<std::size_t>(n_steps));
        for (auto& a : alphas) a = mplus_rng.next_uniform_disk(law.radius);
        const VerblunskySeq sample_v(std::move(alphas));
        const cplx f = schur_from_alphas_at(sample_v, z);
        mplus_draws[static_cast<std::size_t>(i)] =
            std::log(std::abs(m_plus0(sample_v.alpha(0), f, z)));
    }

    // two-pass moments: identical draws must give exactly zero spread
    auto mean_of = [n_samples](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(n_samples);
    };
    auto stderr_of = [n_samples](const std::vector<double>& xs, double mean) {
        double s = 0.0;
        for (double x : xs) s += (x - mean) * (x - mean);
        return std::sqrt(s / static_cast<double>(n_samples - 1) /
                         static_cast<double>(n_samples));
    };
    rep.gamma = mean_of(gamma_draws);
    rep.mean_log_mplus = mean_of(mplus_draws);
    rep.gamma_stderr = stderr_of(gamma_draws, rep.gamma);
    rep.mplus_stderr = stderr_of(mplus_draws, rep.mean_log_mplus);
    rep.identity_residual = std::abs(rep.mean_log_mplus - (std::log(std::abs(z)) - rep.gamma));
    rep.identity_threshold =
        3.0 * std::sqrt(rep.gamma_stderr * rep.gamma_stderr + rep.mplus_stderr * rep.mplus_stderr);
    rep.identity_ok = rep.identity_residual <= rep.identity_threshold;
    return rep;
}

// Diagonal Green's function value of the two-sided coefficient system,
// parameterized by the two Schur functions.
inline cplx cmv_green(const Evaluator& f_plus, const Evaluator& f_minus, cplx z) {
    require_interior(z, "cmv_green");
    const cplx fp = f_plus(z);
    const cplx fm = f_minus(z);
    const cplx den = 1.0 - z * fp * fm;
    if (std::abs(den) < 1e-14)
        throw DegenerateDenominator("cmv_green: 1 - z f+ f- vanished (inputs not Schur-class?)");
    return fp * fm / den;
}

// Left Schur function of a two-sided system: the sequence (alpha_{-1},
// alpha_{-2}, ...) enters through the reflection alpha -> -conj(alpha).
inline Evaluator reflected_schur(const std::vector<cplx>& alphas_negative) {
    std::vector<cplx> reflected;
    reflected.reserve(alphas_negative.size());
    for (const cplx& a : alphas_negative) reflected.push_back(-std::conj(a));
    return schur_from_alphas(VerblunskySeq(std::move(reflected)));
}

}  // namespace opuc
