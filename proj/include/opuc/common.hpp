#pragma once

#include <complex>
#include <numbers>

namespace opuc {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Interior evaluators reject points this close to the unit circle.
inline constexpr double interior_margin = 1e-9;

inline bool is_interior(cplx z) { return std::abs(z) < 1.0 - interior_margin; }

inline double sqr(double x) { return x * x; }
inline double abs_sqr(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace opuc
