#pragma once

#include <cstddef>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/errors.hpp"

namespace opuc {

// Dense coefficient vector in ascending powers; coefs[k] multiplies z^k.
using Coeffs = std::vector<cplx>;

inline cplx horner(const Coeffs& p, cplx z) {
    cplx acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
    return acc;
}

inline int poly_degree(const Coeffs& p) { return static_cast<int>(p.size()) - 1; }

// Reversed-conjugate map at degree n: coefficient k of the result is the
// conjugate of coefficient n-k of q. Applying it twice at the same n gives
// q back.
inline Coeffs star(const Coeffs& q, int n) {
    if (n < 0 || poly_degree(q) > n)
        throw DegreeMismatch("star: polynomial degree exceeds the star index");
    Coeffs out(static_cast<std::size_t>(n) + 1, cplx(0.0));
    for (std::size_t k = 0; k < q.size(); ++k)
        out[static_cast<std::size_t>(n) - k] = std::conj(q[k]);
    return out;
}

// p(z) -> z * p(z)
inline Coeffs shift_up(const Coeffs& p) {
    Coeffs out(p.size() + 1, cplx(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) out[k + 1] = p[k];
    return out;
}

// a*p + b*q, padded to the longer length
inline Coeffs lin_comb(cplx a, const Coeffs& p, cplx b, const Coeffs& q) {
    Coeffs out(std::max(p.size(), q.size()), cplx(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) out[k] += a * p[k];
    for (std::size_t k = 0; k < q.size(); ++k) out[k] += b * q[k];
    return out;
}

}  // namespace opuc
