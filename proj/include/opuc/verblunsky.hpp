#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/measure.hpp"
#include "opuc/poly.hpp"

namespace opuc {

// Finite prefix of recursion coefficients, all strictly inside the unit disk,
// together with the complementary radii rho_j = sqrt(1 - |alpha_j|^2).
class VerblunskySeq {
public:
    VerblunskySeq() = default;

    explicit VerblunskySeq(std::vector<cplx> alphas) : alphas_(std::move(alphas)) {
        rhos_.reserve(alphas_.size());
        for (std::size_t j = 0; j < alphas_.size(); ++j) {
            const double a2 = abs_sqr(alphas_[j]);
            if (!(a2 < 1.0))
                throw InvalidAlpha("verblunsky coefficient " + std::to_string(j) +
                                   " is not inside the unit disk");
            rhos_.push_back(std::sqrt(1.0 - a2));
        }
    }

    static VerblunskySeq zeros(std::size_t n) { return VerblunskySeq(std::vector<cplx>(n, cplx(0.0))); }

    std::size_t size() const { return alphas_.size(); }
    bool empty() const { return alphas_.empty(); }
    cplx alpha(std::size_t j) const { return alphas_.at(j); }
    double rho(std::size_t j) const { return rhos_.at(j); }
    const std::vector<cplx>& alphas() const { return alphas_; }
    const std::vector<double>& rhos() const { return rhos_; }

    // Coefficients of the k-times shifted sequence {alpha_{j+k}}.
    VerblunskySeq shifted(std::size_t k = 1) const {
        if (k >= alphas_.size()) return VerblunskySeq();
        return VerblunskySeq(std::vector<cplx>(alphas_.begin() + static_cast<std::ptrdiff_t>(k),
                                               alphas_.end()));
    }

    // First n coefficients, zero tail implied.
    VerblunskySeq truncated(std::size_t n) const {
        if (n >= alphas_.size()) return *this;
        return VerblunskySeq(std::vector<cplx>(alphas_.begin(),
                                               alphas_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

private:
    std::vector<cplx> alphas_;
    std::vector<double> rhos_;
};

// Rotate every coefficient by a fixed unimodular lambda. The radii are
// untouched, so the whole recursion geometry is preserved.
inline VerblunskySeq aleksandrov(const VerblunskySeq& v, cplx lambda) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw NotUnimodular("aleksandrov: |lambda| must equal 1");
    std::vector<cplx> rotated;
    rotated.reserve(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) rotated.push_back(lambda * v.alpha(j));
    return VerblunskySeq(std::move(rotated));
}

// One degree of the polynomial family: phi and its reversed-conjugate
// partner, either monic or orthonormal.
struct PolyPair {
    int n = 0;
    Coeffs phi;
    Coeffs phi_star;
    bool monic = false;
};

// Orthonormal family phi_0..phi_upto generated by the coefficient recursion
//   phi_{n+1}   = (z phi_n - conj(alpha_n) phi_n^*) / rho_n
//   phi_{n+1}^* = (phi_n^* - alpha_n z phi_n) / rho_n
inline std::vector<PolyPair> polys_from_verblunsky(const VerblunskySeq& v, int upto) {
    if (upto < 0 || static_cast<std::size_t>(upto) > v.size())
        throw Error("polys_from_verblunsky: requested degree exceeds coefficient count");
    std::vector<PolyPair> out;
    out.reserve(static_cast<std::size_t>(upto) + 1);
    Coeffs phi{cplx(1.0)};
    Coeffs phi_star{cplx(1.0)};
    out.push_back(PolyPair{0, phi, phi_star, false});
    for (int n = 0; n < upto; ++n) {
        const cplx a = v.alpha(static_cast<std::size_t>(n));
        const double inv_rho = 1.0 / v.rho(static_cast<std::size_t>(n));
        const Coeffs z_phi = shift_up(phi);
        Coeffs next = lin_comb(inv_rho, z_phi, -std::conj(a) * inv_rho, phi_star);
        Coeffs next_star = lin_comb(inv_rho, phi_star, -a * inv_rho, z_phi);
        next_star.resize(next.size(), cplx(0.0));
        phi = std::move(next);
        phi_star = std::move(next_star);
        out.push_back(PolyPair{n + 1, phi, phi_star, false});
    }
    return out;
}

// Pointwise form of the same recursion: the values (phi_n(z), phi_n^*(z)) for
// n = 0..upto without building coefficient vectors.
inline std::vector<std::pair<cplx, cplx>> poly_values(const VerblunskySeq& v, cplx z, int upto) {
    if (upto < 0 || static_cast<std::size_t>(upto) > v.size())
        throw Error("poly_values: requested degree exceeds coefficient count");
    std::vector<std::pair<cplx, cplx>> out;
    out.reserve(static_cast<std::size_t>(upto) + 1);
    cplx phi = 1.0, phi_star = 1.0;
    out.emplace_back(phi, phi_star);
    for (int n = 0; n < upto; ++n) {
        const cplx a = v.alpha(static_cast<std::size_t>(n));
        const double inv_rho = 1.0 / v.rho(static_cast<std::size_t>(n));
        const cplx next = inv_rho * (z * phi - std::conj(a) * phi_star);
        const cplx next_star = inv_rho * (phi_star - a * z * phi);
        phi = next;
        phi_star = next_star;
        out.emplace_back(phi, phi_star);
    }
    return out;
}

// ||Phi_n|| = rho_0 ... rho_{n-1} for the monic family.
inline double monic_norm(const VerblunskySeq& v, std::size_t n) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) p *= v.rho(j);
    return p;
}

// (rho_0 ... rho_{n-1})^2, accumulated factor by factor. Both sum-rule sides
// share this exact accumulation so their common factors agree bit for bit.
inline double product_rho_sq(const VerblunskySeq& v, std::size_t n) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) p *= v.rho(j) * v.rho(j);
    return p;
}

struct ExtractionDiagnostics {
    double max_alpha_disagreement = 0.0;  // between the two extraction routes
    double min_monic_norm_sq = 1.0;
};

// Recover alpha_0..alpha_{n-1} from a measure by running the monic recursion
//   Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k^*
// with conj(alpha_k) = <Phi_k^*, z Phi_k> / ||Phi_k||^2, the value forced by
// Phi_{k+1} being orthogonal to Phi_k^*. Every step is cross-checked against
// the equivalent route alpha_k = -conj(Phi_{k+1}(0)).
inline VerblunskySeq verblunsky_from_measure(const CircleMeasure& m, int n,
                                             ExtractionDiagnostics* diag = nullptr) {
    if (n < 0) throw Error("verblunsky_from_measure: order must be nonnegative");
    if (!m.nontrivial_for(n))
        throw TrivialMeasure("verblunsky_from_measure: measure is supported on too few points");
    if (static_cast<std::size_t>(8 * (n + 1)) > m.grid_size())
        throw ResolutionExceeded("verblunsky_from_measure: grid must satisfy N >= 8*(n+1)");

    std::vector<cplx> alphas;
    alphas.reserve(static_cast<std::size_t>(n));
    Coeffs Phi{cplx(1.0)};
    Coeffs Phi_star{cplx(1.0)};
    ExtractionDiagnostics d;
    for (int k = 0; k < n; ++k) {
        const double norm_sq = m.inner_product(Phi, Phi).real();
        d.min_monic_norm_sq = std::min(d.min_monic_norm_sq, norm_sq);
        if (norm_sq < 1e-13)
            throw TrivialMeasure("verblunsky_from_measure: monic norm collapsed at degree " +
                                 std::to_string(k));
        const Coeffs z_Phi = shift_up(Phi);
        const cplx alpha_bar = m.inner_product(Phi_star, z_Phi) / norm_sq;
        const cplx alpha = std::conj(alpha_bar);
        if (std::abs(alpha) >= 1.0 - 1e-13)
            throw NumericalBreakdown("verblunsky_from_measure: |alpha_" + std::to_string(k) +
                                     "| reached 1");
        Coeffs next = lin_comb(cplx(1.0), z_Phi, -alpha_bar, Phi_star);
        Coeffs next_star = lin_comb(cplx(1.0), Phi_star, -alpha, z_Phi);
        next_star.resize(next.size(), cplx(0.0));
        // consistency certificate: alpha_k = -conj(Phi_{k+1}(0))
        const cplx alpha_check = -std::conj(next.front());
        d.max_alpha_disagreement =
            std::max(d.max_alpha_disagreement, std::abs(alpha - alpha_check));
        if (d.max_alpha_disagreement > 1e-8)
            throw NumericalBreakdown(
                "verblunsky_from_measure: extraction routes disagree at degree " +
                std::to_string(k));
        Phi = std::move(next);
        Phi_star = std::move(next_star);
        alphas.push_back(alpha);
    }
    if (diag) *diag = d;
    return VerblunskySeq(std::move(alphas));
}

}  // namespace opuc
