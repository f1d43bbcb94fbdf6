#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <spectra/eigen_sym.hpp>
#include <spectra/goe.hpp>
#include <spectra/rng.hpp>
#include <spectra/sym_matrix.hpp>

#include "test_helpers.hpp"

using spectra::SymMatrix;

TEST_CASE("eigensolver handles trivial matrices", "[eigen]") {
    const auto id = spectra::eigh_sym(SymMatrix::identity(3));
    for (double v : id.values) CHECK(v == Catch::Approx(1.0).margin(1e-14));

    const auto d = spectra::eigh_sym(SymMatrix::diagonal({3.0, 1.0, 2.0}));
    REQUIRE(d.values.size() == 3);
    CHECK(d.values[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(d.values[1] == Catch::Approx(2.0).margin(1e-14));
    CHECK(d.values[2] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("eigensolver meets residual and orthogonality bounds", "[eigen]") {
    spectra::RngEngine rng(spectra::RngStream{555ULL, 0ULL});
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 40);
        const SymMatrix m = spectra::goe_sample(n, rng);
        const auto es = spectra::eigh_sym(m);
        const double scale = std::max(1.0, m.frobenius_norm());

        double trace_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i > 0) CHECK(es.values[static_cast<std::size_t>(i)] >= es.values[static_cast<std::size_t>(i - 1)]);
            trace_sum += es.values[static_cast<std::size_t>(i)];

            std::vector<double> u(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k)] = es.vector(k, i);
            auto mu = test_helpers::dense_matvec(m, u);
            for (int k = 0; k < n; ++k) mu[static_cast<std::size_t>(k)] -= es.values[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(k)];
            CHECK(test_helpers::norm(mu) <= 1e-10 * scale);

            for (int j = 0; j <= i; ++j) {
                std::vector<double> w(static_cast<std::size_t>(n));
                for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = es.vector(k, j);
                const double g = test_helpers::dot(u, w);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-10);
            }
        }
        CHECK(std::abs(trace_sum - m.trace()) <= 1e-10 * scale);
    }
}

TEST_CASE("eigensolver rejects non finite input", "[eigen]") {
    SymMatrix m(2);
    m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    REQUIRE_THROWS_AS(spectra::eigh_sym(m), std::invalid_argument);
}

TEST_CASE("scaled smallest eigenvalue anchors", "[eigen]") {
    CHECK(spectra::lambda_min_scaled(SymMatrix(5)) == 0.0);

    SymMatrix m = SymMatrix::identity(4);
    m *= -std::sqrt(8.0);
    CHECK(spectra::lambda_min_scaled(m) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("scaled smallest eigenvalue concentrates near minus one", "[eigen]") {
    std::vector<double> vals(500);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const SymMatrix q = spectra::goe_sample(64, spectra::RngStream{808ULL, 0ULL}.child(i));
        vals[i] = spectra::lambda_min_scaled(q);
    }
    const auto mv = test_helpers::mean_var(vals);
    CHECK(std::abs(mv.mean + 1.0) < 0.1);
}

TEST_CASE("corank counts small eigenvalues", "[eigen]") {
    CHECK(spectra::corank(spectra::eigenvalues_sym(SymMatrix::identity(3))) == 0);
    CHECK(spectra::corank(spectra::eigenvalues_sym(SymMatrix::diagonal({0.0, 0.0, 1.0}))) == 2);

    // Monotone in the tolerance.
    const auto vals = spectra::eigenvalues_sym(SymMatrix::diagonal({1e-9, 1e-6, 1e-3, 1.0}));
    int prev = 0;
    for (double tol : {1e-10, 1e-8, 1e-5, 1e-2, 1e+1}) {
        const int c = spectra::corank(vals, tol);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(prev == 4);
}

TEST_CASE("spectral gaps on anchors and under negation", "[eigen]") {
    const auto g1 = spectra::spectral_gaps(spectra::eigenvalues_sym(SymMatrix::identity(3)));
    REQUIRE(g1.size() == 2);
    CHECK(g1[0] == Catch::Approx(0.0).margin(1e-14));
    CHECK(g1[1] == Catch::Approx(0.0).margin(1e-14));

    const auto g2 = spectra::spectral_gaps(spectra::eigenvalues_sym(SymMatrix::diagonal({1.0, 2.0, 4.0})));
    REQUIRE(g2.size() == 2);
    CHECK(g2[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(g2[1] == Catch::Approx(2.0).margin(1e-14));

    spectra::RngEngine rng(spectra::RngStream{909ULL, 0ULL});
    for (int trial = 0; trial < 10; ++trial) {
        const SymMatrix m = spectra::goe_sample(6, rng);
        SymMatrix neg = m;
        neg *= -1.0;
        auto gm = spectra::spectral_gaps(spectra::eigenvalues_sym(m));
        auto gn = spectra::spectral_gaps(spectra::eigenvalues_sym(neg));
        REQUIRE(gm.size() == gn.size());
        for (std::size_t i = 0; i < gm.size(); ++i) {
            CHECK(gn[i] == Catch::Approx(gm[gm.size() - 1 - i]).margin(1e-10));
        }
    }
}

TEST_CASE("eigenvalues move at most by the perturbation norm", "[eigen]") {
    spectra::RngEngine rng(spectra::RngStream{910ULL, 0ULL});
    for (int trial = 0; trial < 20; ++trial) {
        const SymMatrix m = spectra::goe_sample(8, rng);
        SymMatrix e = spectra::goe_sample(8, rng);
        e *= 1e-3 / std::max(1e-30, e.frobenius_norm());
        SymMatrix perturbed = m;
        perturbed += e;
        const auto a = spectra::eigenvalues_sym(m);
        const auto b = spectra::eigenvalues_sym(perturbed);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i] - b[i]) <= e.frobenius_norm() + 1e-12);
        }
    }
}

TEST_CASE("power of two scaling is exactly equivariant", "[eigen]") {
    spectra::RngEngine rng(spectra::RngStream{911ULL, 0ULL});
    for (int trial = 0; trial < 10; ++trial) {
        const SymMatrix m = spectra::goe_sample(7, rng);
        SymMatrix doubled = m;
        doubled *= 2.0;
        const auto a = spectra::eigenvalues_sym(m);
        const auto b = spectra::eigenvalues_sym(doubled);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(b[i] == 2.0 * a[i]);
        }
    }
}
