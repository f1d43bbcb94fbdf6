#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <spectra/rng.hpp>
#include <spectra/special_functions.hpp>

#include "test_helpers.hpp"

namespace {

// Closed-form Student t CDFs for small degrees of freedom, coded separately
// from the incomplete-beta path.
double t_cdf_1(double x) { return 0.5 + std::atan(x) / std::acos(-1.0); }
double t_cdf_2(double x) { return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)); }
double t_cdf_3(double x) {
    const double pi = std::acos(-1.0);
    const double u = x / std::sqrt(3.0);
    return 0.5 + (u / (1.0 + u * u) + std::atan(u)) / pi;
}

} // namespace

TEST_CASE("normal cdf hits its anchor values", "[special]") {
    CHECK(spectra::normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(spectra::normal_cdf(-1.0) == Catch::Approx(0.15865525393145705).margin(1e-10));
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        CHECK(spectra::normal_cdf(x) + spectra::normal_cdf(-x) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("normal and student cdfs are monotone on a grid", "[special]") {
    double prev_n = -1.0, prev_t = -1.0;
    for (double x = -8.0; x <= 8.0; x += 0.05) {
        const double pn = spectra::normal_cdf(x);
        const double pt = spectra::student_t_cdf(5, x);
        CHECK(pn >= prev_n);
        CHECK(pt >= prev_t);
        prev_n = pn;
        prev_t = pt;
    }
}

TEST_CASE("student t cdf is one half at zero for every ell", "[special]") {
    for (int ell = 1; ell <= 12; ++ell) {
        CHECK(spectra::student_t_cdf(ell, 0.0) == Catch::Approx(0.5).margin(1e-12));
    }
    REQUIRE_THROWS_AS(spectra::student_t_cdf(0, 0.3), std::invalid_argument);
}

TEST_CASE("student t cdf matches closed forms at low degrees", "[special]") {
    CHECK(spectra::student_t_cdf(1, -1.0) == Catch::Approx(0.25).margin(1e-10));
    for (double x = -5.0; x <= 5.0; x += 0.375) {
        CHECK(spectra::student_t_cdf(1, x) == Catch::Approx(t_cdf_1(x)).margin(1e-10));
        CHECK(spectra::student_t_cdf(2, x) == Catch::Approx(t_cdf_2(x)).margin(1e-10));
        CHECK(spectra::student_t_cdf(3, x) == Catch::Approx(t_cdf_3(x)).margin(1e-10));
    }
}

TEST_CASE("student t cdf at minus one decreases to the normal value", "[special]") {
    const double target = spectra::normal_cdf(-1.0);
    double prev = spectra::student_t_cdf(1, -1.0);
    CHECK(prev == Catch::Approx(0.25).margin(1e-10));
    for (int ell = 2; ell <= 200; ++ell) {
        const double cur = spectra::student_t_cdf(ell, -1.0);
        CHECK(cur <= prev + 1e-12);
        CHECK(cur > target);
        prev = cur;
    }
    CHECK(std::abs(spectra::student_t_cdf(200, -1.0) - target) < 2e-3);
}

TEST_CASE("chi square sqrt mean anchors and bound", "[special]") {
    CHECK(spectra::chi2_sqrt_mean(2) == Catch::Approx(std::sqrt(2.0 / std::acos(-1.0))).margin(1e-10));
    REQUIRE_THROWS_AS(spectra::chi2_sqrt_mean(1), std::invalid_argument);

    // Gamma(ell/2) / (sqrt(ell) Gamma((ell-1)/2)) <= 1, written through the
    // implemented quantity: chi2_sqrt_mean(ell) <= sqrt(2 ell).
    for (int ell = 2; ell <= 50; ++ell) {
        CHECK(spectra::chi2_sqrt_mean(ell) <= std::sqrt(2.0 * ell));
    }
}

TEST_CASE("chi square sqrt mean matches monte carlo at ell ten", "[special]") {
    const std::size_t draws = 1000000;
    std::vector<double> sq(draws);
    spectra::RngEngine rng(spectra::RngStream{31ULL, 8ULL});
    for (auto& x : sq) x = std::sqrt(spectra::chi2_sample(9, rng));
    const auto mv = test_helpers::mean_var(sq);
    CHECK(std::abs(mv.mean - spectra::chi2_sqrt_mean(10)) <= 3.0 * mv.se());
}
