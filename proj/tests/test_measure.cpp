#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gallery.hpp"
#include "opuc/fft.hpp"
#include "opuc/measure.hpp"
#include "oracles.hpp"

using opuc::CircleMeasure;
using opuc::cplx;

namespace {
const auto one_minus_cos = [](double t) { return 1.0 - std::cos(t); };
}

TEST_CASE("fft matches the direct transform", "[measure]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> samples(64);
    for (auto& s : samples) s = dist(rng);

    const auto coefs = opuc::fourier_coefficients(samples);
    for (int n : {0, 1, 5, 17, 31}) {
        const cplx direct = oracle::weight_moment(
            [&](double theta) {
                const auto j = static_cast<std::size_t>(std::llround(theta * 64 / (2 * oracle::kPi)));
                return samples[j % 64];
            },
            n, 64);
        REQUIRE(std::abs(coefs[static_cast<std::size_t>(n)] - direct) < 1e-13);
    }
}

TEST_CASE("normalize leaves unit-mass presets alone and rescales the rest", "[measure]") {
    const auto leb = CircleMeasure::lebesgue(256);
    REQUIRE(leb.is_normalized());
    const auto renorm = leb.normalized();
    REQUIRE(std::abs(renorm.total_mass() - 1.0) < 1e-12);

    const auto twice = CircleMeasure::from_samples(std::vector<double>(256, 2.0));
    REQUIRE(std::abs(twice.total_mass() - 2.0) < 1e-12);
    const auto unit = twice.normalized();
    REQUIRE(std::abs(unit.total_mass() - 1.0) < 1e-12);
    REQUIRE(std::abs(unit.weight_samples()[17] - 1.0) < 1e-12);

    const auto mixed =
        CircleMeasure::from_samples(std::vector<double>(256, 1.0), {{0.0, 1.0}}).normalized();
    REQUIRE(std::abs(mixed.weight_mass() - 0.5) < 1e-12);
    REQUIRE(std::abs(mixed.atoms()[0].mass - 0.5) < 1e-12);
}

TEST_CASE("normalize rejects empty and negative weights", "[measure]") {
    REQUIRE_THROWS_AS(CircleMeasure::from_samples(std::vector<double>(64, 0.0)).normalized(),
                      opuc::ZeroMass);
    REQUIRE_THROWS_AS(CircleMeasure::from_samples(std::vector<double>(64, -1.0)), opuc::ZeroMass);
    REQUIRE_THROWS_AS(CircleMeasure::from_samples(std::vector<double>(100, 1.0)), opuc::Error);
}

TEST_CASE("moments of the flat and tilted weights", "[measure]") {
    const auto leb = CircleMeasure::lebesgue();
    REQUIRE(std::abs(leb.moment(0) - 1.0) < 1e-14);
    REQUIRE(std::abs(leb.moment(1)) < 1e-14);

    // c_1 of w = 1 - cos(theta): oracle quadrature pins the exact value -1/2.
    const cplx expected = oracle::weight_moment(one_minus_cos, 1, 1024);
    REQUIRE(std::abs(expected - cplx(-0.5)) < 1e-13);

    const auto m = CircleMeasure::fourier({1.0, {-1.0}, {}});
    REQUIRE(std::abs(m.moment(1) - cplx(-0.5)) < 1e-13);
    REQUIRE(std::abs(m.moment(0) - 1.0) < 1e-14);
}

TEST_CASE("moment order guard", "[measure]") {
    const auto m = CircleMeasure::lebesgue(256);
    REQUIRE_NOTHROW(m.moment(64));
    REQUIRE_THROWS_AS(m.moment(65), opuc::ResolutionExceeded);

    opuc::Coeffs too_long(66, cplx(0.0));
    too_long.back() = 1.0;
    REQUIRE_THROWS_AS(m.inner_product(too_long, too_long), opuc::ResolutionExceeded);
}

TEST_CASE("inner products reduce to moments", "[measure]") {
    const auto leb = CircleMeasure::lebesgue();
    const opuc::Coeffs one{cplx(1.0)};
    const opuc::Coeffs z{cplx(0.0), cplx(1.0)};
    REQUIRE(std::abs(leb.inner_product(z, z) - cplx(1.0)) < 1e-14);
    REQUIRE(std::abs(leb.inner_product(one, z)) < 1e-14);

    const auto m = CircleMeasure::fourier({1.0, {-1.0}, {}});
    const cplx via_oracle = oracle::inner_product(one_minus_cos, {}, one, z, 1024);
    REQUIRE(std::abs(via_oracle - cplx(-0.5)) < 1e-13);
    REQUIRE(std::abs(m.inner_product(one, z) - via_oracle) < 1e-12);
}

TEST_CASE("inner product is conjugate-linear in the first slot", "[measure]") {
    const auto m = CircleMeasure::bernstein_szego(0.5);
    const opuc::Coeffs p{cplx(0.3, -0.2), cplx(1.0, 0.5)};
    const opuc::Coeffs q{cplx(-0.1, 0.4), cplx(0.0), cplx(0.7, -0.3)};
    const cplx lambda(0.6, -1.1);
    const opuc::Coeffs lp{lambda * p[0], lambda * p[1]};
    REQUIRE(std::abs(m.inner_product(lp, q) - std::conj(lambda) * m.inner_product(p, q)) < 1e-13);
}

TEST_CASE("atoms contribute exact phases to moments", "[measure]") {
    const auto m =
        CircleMeasure::from_samples(std::vector<double>(1024, 1.0), {{1.2345, 1.0}}).normalized();
    for (int n : {0, 1, 2, 7}) {
        const cplx expected = (n == 0 ? cplx(0.5) : cplx(0.0)) + 0.5 * std::polar(1.0, -n * 1.2345);
        REQUIRE(std::abs(m.moment(n) - expected) < 1e-13);
    }
}

TEST_CASE("moment(m, 0) is 1 for every normalized preset", "[measure]") {
    for (const auto& entry : gallery::presets()) {
        const auto m = entry.measure.normalized();
        REQUIRE(std::abs(m.moment(0) - 1.0) < 1e-12);
    }
}

TEST_CASE("grid refinement leaves smooth-preset moments fixed", "[measure]") {
    for (const auto& entry : gallery::presets(512)) {
        const auto fine = entry.measure.with_grid(1024);
        for (int n = 0; n <= 512 / 8; ++n)
            REQUIRE(std::abs(entry.measure.moment(n) - fine.moment(n)) < 1e-12);
    }
}

TEST_CASE("moment Toeplitz matrices are positive definite", "[measure]") {
    for (const auto& entry : gallery::presets()) {
        const auto moments = entry.measure.moments(20);
        REQUIRE(std::abs(moments.at(0) - 1.0) < 1e-12);
        for (int n = 1; n <= 20; ++n) REQUIRE(std::abs(moments.at(n)) <= 1.0 + 1e-12);
        double min_pivot = 0.0;
        REQUIRE(opuc::toeplitz_positive_definite(moments, 20, &min_pivot));
        REQUIRE(min_pivot > 0.0);
    }

    // the certificate discriminates: two atoms support at most order 1
    CircleMeasure atoms_only(opuc::SampledWeight{std::vector<double>(256, 0.0)},
                             {{0.5, 0.5}, {2.5, 0.5}}, 256);
    const auto moments = atoms_only.moments(4);
    REQUIRE(opuc::toeplitz_positive_definite(moments, 1));
    REQUIRE_FALSE(opuc::toeplitz_positive_definite(moments, 3));
}

TEST_CASE("squared norms are nonnegative and vanish only at zero", "[measure]") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const auto& entry : gallery::presets()) {
        for (int trial = 0; trial < 10; ++trial) {
            opuc::Coeffs p(8);
            for (auto& c : p) c = cplx(dist(rng), dist(rng));
            const cplx pp = entry.measure.inner_product(p, p);
            REQUIRE(pp.real() > 0.0);
            REQUIRE(std::abs(pp.imag()) < 1e-12 * (1.0 + pp.real()));
        }
        const opuc::Coeffs zero{cplx(0.0), cplx(0.0)};
        REQUIRE(std::abs(entry.measure.inner_product(zero, zero)) == 0.0);
    }
}

TEST_CASE("sampled weights cannot be resampled", "[measure]") {
    const auto m = CircleMeasure::from_samples(std::vector<double>(128, 1.0));
    REQUIRE_THROWS_AS(m.with_grid(256), opuc::Error);
    REQUIRE_NOTHROW(CircleMeasure::bernstein_szego(0.5, 128).with_grid(256));
}

TEST_CASE("nontriviality demands support beyond the requested degree", "[measure]") {
    const auto ac = CircleMeasure::lebesgue(256);
    REQUIRE(ac.nontrivial_for(30));

    CircleMeasure atoms_only(opuc::SampledWeight{std::vector<double>(256, 0.0)},
                             {{0.1, 0.25}, {1.0, 0.25}, {2.0, 0.25}, {3.0, 0.25}}, 256);
    REQUIRE(atoms_only.nontrivial_for(3));
    REQUIRE_FALSE(atoms_only.nontrivial_for(4));
}
