// Test-side reference computations. Everything here is deliberately naive --
// direct summation, brute-force Gram-Schmidt, closed forms -- and stays
// independent of the library code paths it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// Plain trapezoid moment of a weight function: (1/N) sum_j w(theta_j) e^{-i n theta_j}.
// Each phase is built fresh with std::polar; no FFT, no shared tables.
inline cplx weight_moment(const std::function<double(double)>& w, int n, int N) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * kPi * j / N;
        acc += w(theta) * std::polar(1.0, -n * theta);
    }
    return acc / static_cast<double>(N);
}

inline cplx poly_eval(const std::vector<cplx>& coefs, cplx z) {
    cplx acc = 0.0;
    for (std::size_t k = coefs.size(); k-- > 0;) acc = acc * z + coefs[k];
    return acc;
}

// Quadrature inner product <p, q> = integral conj(p) q w dtheta/2pi + atom terms,
// conjugate-linear in the first slot.
inline cplx inner_product(const std::function<double(double)>& w,
                          const std::vector<std::pair<double, double>>& atoms,
                          const std::vector<cplx>& p, const std::vector<cplx>& q, int N) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * kPi * j / N;
        const cplx z = std::polar(1.0, theta);
        acc += std::conj(poly_eval(p, z)) * poly_eval(q, z) * w(theta);
    }
    acc /= static_cast<double>(N);
    for (const auto& [theta, mass] : atoms) {
        const cplx z = std::polar(1.0, theta);
        acc += mass * std::conj(poly_eval(p, z)) * poly_eval(q, z);
    }
    return acc;
}

// Brute-force monic Gram-Schmidt on {1, z, ..., z^n} under the quadrature
// inner product; returns alpha_k = -conj(Phi_{k+1}(0)) for k = 0..n-1.
inline std::vector<cplx> gram_schmidt_alphas(const std::function<double(double)>& w,
                                             const std::vector<std::pair<double, double>>& atoms,
                                             int n, int N) {
    std::vector<std::vector<cplx>> monic;  // Phi_0..Phi_n
    for (int k = 0; k <= n; ++k) {
        std::vector<cplx> pk(static_cast<std::size_t>(k) + 1, cplx(0.0));
        pk.back() = 1.0;  // z^k
        for (int j = 0; j < k; ++j) {
            const cplx coef = inner_product(w, atoms, monic[j], pk, N) /
                              inner_product(w, atoms, monic[j], monic[j], N);
            for (std::size_t t = 0; t < monic[j].size(); ++t) pk[t] -= coef * monic[j][t];
        }
        monic.push_back(pk);
    }
    std::vector<cplx> alphas;
    for (int k = 1; k <= n; ++k) alphas.push_back(-std::conj(monic[k][0]));
    return alphas;
}

// Eigenvalues of a complex 2x2 matrix [[a, b], [c, d]].
inline std::pair<cplx, cplx> eigenvalues_2x2(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// Schur function of the constant sequence (a, a, a, ...): the shift fixes the
// sequence, so f solves conj(a) z f^2 + (1 - z) f - a = 0; the root inside the
// closed unit disk is the Schur-class one.
inline cplx constant_alpha_schur(cplx a, cplx z) {
    const cplx A = std::conj(a) * z;
    const cplx B = 1.0 - z;
    const cplx C = -a;
    if (std::abs(A) < 1e-15) return a;  // linear case (a = 0 or z = 0)
    const cplx disc = std::sqrt(B * B - 4.0 * A * C);
    const cplx r1 = (-B + disc) / (2.0 * A);
    const cplx r2 = (-B - disc) / (2.0 * A);
    return std::abs(r1) <= std::abs(r2) ? r1 : r2;
}

}  // namespace oracle
