#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/fft.hpp"
#include "opuc/poly.hpp"

namespace opuc {

inline constexpr std::size_t default_grid_size = 4096;

struct Atom {
    double theta;  // radians in [0, 2*pi)
    double mass;   // > 0
};

// Symbolic weight descriptions. Presets are sampled lazily at whatever grid
// size the measure carries, so grid-refinement studies never re-enter user
// data.
struct LebesgueWeight {};

struct BernsteinSzegoWeight {
    double alpha;  // real, |alpha| < 1
};

struct FourierWeight {
    double a0 = 1.0;
    std::vector<double> cos_coefs;  // coefficient of cos(k theta), k = 1..
    std::vector<double> sin_coefs;  // coefficient of sin(k theta), k = 1..
};

struct SampledWeight {
    std::vector<double> values;  // w(theta_j) on the uniform grid
};

using WeightSpec = std::variant<LebesgueWeight, BernsteinSzegoWeight, FourierWeight, SampledWeight>;

namespace detail {

inline double eval_weight(const WeightSpec& w, double theta, std::size_t grid_index,
                          std::size_t grid_size) {
    if (const auto* leb = std::get_if<LebesgueWeight>(&w)) {
        (void)leb;
        return 1.0;
    }
    if (const auto* bs = std::get_if<BernsteinSzegoWeight>(&w)) {
        const double a = bs->alpha;
        // rho^2 / |1 - a e^{i theta}|^2 with real a
        return (1.0 - a * a) / (1.0 + a * a - 2.0 * a * std::cos(theta));
    }
    if (const auto* fw = std::get_if<FourierWeight>(&w)) {
        double v = fw->a0;
        for (std::size_t k = 0; k < fw->cos_coefs.size(); ++k)
            v += fw->cos_coefs[k] * std::cos(static_cast<double>(k + 1) * theta);
        for (std::size_t k = 0; k < fw->sin_coefs.size(); ++k)
            v += fw->sin_coefs[k] * std::sin(static_cast<double>(k + 1) * theta);
        return v;
    }
    const auto& s = std::get<SampledWeight>(w);
    if (s.values.size() != grid_size)
        throw Error("sampled weight cannot be evaluated on a different grid");
    return s.values[grid_index];
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace detail

// Trigonometric moments c_n = integral of e^{-i n theta} d mu, n = 0..n_max.
// Negative indices resolve through conjugation.
struct MomentSeq {
    std::vector<cplx> c;

    int max_order() const { return static_cast<int>(c.size()) - 1; }

    cplx at(int n) const {
        const int a = n < 0 ? -n : n;
        if (a > max_order()) throw ResolutionExceeded("moment order exceeds stored range");
        return n < 0 ? std::conj(c[static_cast<std::size_t>(a)]) : c[static_cast<std::size_t>(a)];
    }
};

// Cholesky-based positive-definiteness certificate for the Hermitian Toeplitz
// matrix [c_{i-j}], i,j = 0..k. Success means every leading minor is positive,
// which is the finite-order nontriviality certificate for the measure. Pivots
// at roundoff level count as singular (the same 1e-13 threshold the recursion
// uses for collapsed norms).
inline bool toeplitz_positive_definite(const MomentSeq& m, int k, double* min_pivot = nullptr) {
    const std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<cplx> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = m.at(static_cast<int>(i) - static_cast<int>(j));

    const double pivot_floor = 1e-13 * std::max(1.0, a[0].real());
    double smallest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j].real();
        for (std::size_t p = 0; p < j; ++p) d -= abs_sqr(a[j * n + p]);
        if (!(d > pivot_floor)) {
            if (min_pivot) *min_pivot = d;
            return false;
        }
        smallest = (j == 0) ? d : std::min(smallest, d);
        const double root = std::sqrt(d);
        a[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx v = a[i * n + j];
            for (std::size_t p = 0; p < j; ++p) v -= a[i * n + p] * std::conj(a[j * n + p]);
            a[i * n + j] = v / root;
        }
    }
    if (min_pivot) *min_pivot = smallest;
    return true;
}

// Probability measure on the unit circle: an absolutely continuous part given
// by weight samples w(theta_j) >= 0 on the uniform grid theta_j = 2 pi j / N,
// plus finitely many point masses. The a.c. part integrates by the periodic
// trapezoid rule (1/N) sum_j w(theta_j), which is exact for trigonometric
// polynomials of degree < N and spectrally accurate for smooth weights.
class CircleMeasure {
public:
    CircleMeasure(WeightSpec weight, std::vector<Atom> atoms = {},
                  std::size_t grid_size = default_grid_size, double weight_scale = 1.0)
        : weight_(std::move(weight)),
          atoms_(std::move(atoms)),
          grid_(grid_size),
          scale_(weight_scale) {
        if (!detail::is_power_of_two(grid_))
            throw Error("grid size must be a power of two");
        validate_atoms();
        sample_weight();
        compute_weight_moments();
    }

    static CircleMeasure lebesgue(std::size_t grid = default_grid_size) {
        return CircleMeasure(LebesgueWeight{}, {}, grid);
    }

    static CircleMeasure bernstein_szego(double alpha, std::size_t grid = default_grid_size) {
        if (std::abs(alpha) >= 1.0)
            throw InvalidAlpha("bernstein_szego: |alpha| must be < 1");
        return CircleMeasure(BernsteinSzegoWeight{alpha}, {}, grid);
    }

    static CircleMeasure fourier(FourierWeight fw, std::size_t grid = default_grid_size) {
        return CircleMeasure(WeightSpec(std::move(fw)), {}, grid);
    }

    static CircleMeasure from_samples(std::vector<double> values, std::vector<Atom> atoms = {}) {
        const std::size_t n = values.size();
        return CircleMeasure(SampledWeight{std::move(values)}, std::move(atoms), n);
    }

    std::size_t grid_size() const { return grid_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<double>& weight_samples() const { return samples_; }
    const WeightSpec& weight_spec() const { return weight_; }
    double weight_scale() const { return scale_; }

    double grid_angle(std::size_t j) const { return two_pi * static_cast<double>(j) / static_cast<double>(grid_); }

    // Symbolic evaluation at an arbitrary angle; sampled weights only support
    // their own grid points.
    double weight_at(double theta) const {
        if (std::holds_alternative<SampledWeight>(weight_)) {
            const double step = two_pi / static_cast<double>(grid_);
            const double pos = theta / step;
            const auto j = static_cast<std::size_t>(std::llround(pos));
            if (std::abs(pos - static_cast<double>(j)) > 1e-9)
                throw Error("sampled weight is only defined at grid angles");
            return samples_[j % grid_];
        }
        return scale_ * detail::eval_weight(weight_, theta, 0, grid_);
    }

    double weight_mass() const { return weight_mass_; }
    double atom_mass() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.mass;
        return s;
    }
    double total_mass() const { return weight_mass_ + atom_mass(); }

    // Same symbolic data, finer or coarser grid. Raw-sample measures carry no
    // symbolic form to resample from.
    CircleMeasure with_grid(std::size_t grid) const {
        if (std::holds_alternative<SampledWeight>(weight_))
            throw Error("sampled weight cannot be resampled at a different grid");
        return CircleMeasure(weight_, atoms_, grid, scale_);
    }

    CircleMeasure normalized() const {
        const double total = total_mass();
        if (!(total > 0.0)) throw ZeroMass("normalize: total mass must be positive");
        std::vector<Atom> atoms = atoms_;
        for (auto& a : atoms) a.mass /= total;
        if (const auto* s = std::get_if<SampledWeight>(&weight_)) {
            SampledWeight scaled = *s;
            for (auto& v : scaled.values) v = v * scale_ / total;
            return CircleMeasure(WeightSpec(std::move(scaled)), std::move(atoms), grid_, 1.0);
        }
        return CircleMeasure(weight_, std::move(atoms), grid_, scale_ / total);
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(total_mass() - 1.0) <= tol; }

    // c_n = (1/N) sum_j w(theta_j) e^{-i n theta_j} + sum_a mass_a e^{-i n theta_a}.
    // The resolution guard n <= N/4 keeps aliasing of the sampled weight out
    // of the returned orders.
    cplx moment(int n) const {
        if (n < 0) return std::conj(moment(-n));
        if (static_cast<std::size_t>(n) > grid_ / 4)
            throw ResolutionExceeded("moment: order exceeds N/4 for grid size N");
        cplx c = weight_moments_[static_cast<std::size_t>(n)];
        for (const auto& a : atoms_) c += a.mass * std::polar(1.0, -n * a.theta);
        return c;
    }

    // Weight-only moment (no atom terms); used by evaluators that treat atoms
    // exactly.
    cplx weight_moment(int n) const {
        if (n < 0) return std::conj(weight_moment(-n));
        if (static_cast<std::size_t>(n) > grid_ / 4)
            throw ResolutionExceeded("moment: order exceeds N/4 for grid size N");
        return weight_moments_[static_cast<std::size_t>(n)];
    }

    int max_moment_order() const { return static_cast<int>(grid_ / 4); }

    MomentSeq moments(int n_max) const {
        if (n_max < 0) throw Error("moments: n_max must be nonnegative");
        MomentSeq m;
        m.c.reserve(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) m.c.push_back(moment(n));
        return m;
    }

    // L2(d mu) pairing, conjugate-linear in the first slot:
    // <z^a, z^b> = c_{a-b}.
    cplx inner_product(const Coeffs& p, const Coeffs& q) const {
        const int dp = poly_degree(p);
        const int dq = poly_degree(q);
        if (std::max(dp, dq) > max_moment_order())
            throw ResolutionExceeded("inner_product: polynomial degree exceeds moment resolution");
        cplx acc = 0.0;
        for (int a = 0; a <= dp; ++a) {
            const cplx pa = std::conj(p[static_cast<std::size_t>(a)]);
            if (pa == cplx(0.0)) continue;
            for (int b = 0; b <= dq; ++b)
                acc += pa * q[static_cast<std::size_t>(b)] * moment(a - b);
        }
        return acc;
    }

    double norm(const Coeffs& p) const {
        const double v = inner_product(p, p).real();
        return v <= 0.0 ? 0.0 : std::sqrt(v);
    }

    // A measure supported on <= n points cannot orthogonalize degree n; the
    // a.c. part or enough atoms must be present.
    bool nontrivial_for(int n_max) const {
        if (weight_mass_ > 1e-13) return true;
        return atoms_.size() > static_cast<std::size_t>(n_max);
    }

private:
    void validate_atoms() {
        for (auto& a : atoms_) {
            if (!(a.mass > 0.0)) throw ZeroMass("atom mass must be positive");
            a.theta = std::fmod(a.theta, two_pi);
            if (a.theta < 0.0) a.theta += two_pi;
        }
        std::vector<double> angles;
        angles.reserve(atoms_.size());
        for (const auto& a : atoms_) angles.push_back(a.theta);
        std::sort(angles.begin(), angles.end());
        for (std::size_t i = 1; i < angles.size(); ++i)
            if (angles[i] - angles[i - 1] < 1e-12)
                throw Error("atom angles must be pairwise distinct");
    }

    void sample_weight() {
        samples_.resize(grid_);
        for (std::size_t j = 0; j < grid_; ++j) {
            const double v = scale_ * detail::eval_weight(weight_, grid_angle(j), j, grid_);
            if (v < 0.0) throw ZeroMass("weight sample is negative");
            samples_[j] = v;
        }
        weight_mass_ = 0.0;
        for (double v : samples_) weight_mass_ += v;
        weight_mass_ /= static_cast<double>(grid_);
    }

    void compute_weight_moments() {
        weight_moments_ = fourier_coefficients(samples_);
        weight_moments_.resize(grid_ / 4 + 1);
    }

    WeightSpec weight_;
    std::vector<Atom> atoms_;
    std::size_t grid_;
    double scale_;
    std::vector<double> samples_;
    std::vector<cplx> weight_moments_;
    double weight_mass_ = 0.0;
};

inline CircleMeasure normalize(const CircleMeasure& m) { return m.normalized(); }

}  // namespace opuc
