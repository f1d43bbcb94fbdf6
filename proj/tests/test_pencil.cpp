#include <catch2/catch_amalgamated.hpp>

#include <spectra/pencil.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using spectra::Pencil;
using spectra::RngEngine;
using spectra::RngStream;
using spectra::SpherePoint;
using spectra::SymMatrix;

TEST_CASE("sphere points validate and normalize", "[pencil]") {
    CHECK_THROWS_AS(SpherePoint({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SpherePoint::normalized({0.0, 0.0, 0.0}), std::invalid_argument);

    const auto p = SpherePoint::normalized({3.0, 4.0});
    CHECK(p[0] == Catch::Approx(0.6).margin(1e-15));
    CHECK(p[1] == Catch::Approx(0.8).margin(1e-15));

    const auto q = p.antipode();
    CHECK(q[0] == -p[0]);
    CHECK(q[1] == -p[1]);
    CHECK(q.dim_ambient() == p.dim_ambient());
}

TEST_CASE("pencil constructor enforces shape", "[pencil]") {
    std::vector<SymMatrix> two(2, SymMatrix(3));
    CHECK_THROWS_AS(Pencil(3, 3, two), std::invalid_argument);

    std::vector<SymMatrix> wrong_dim(3, SymMatrix(2));
    CHECK_THROWS_AS(Pencil(3, 3, wrong_dim), std::invalid_argument);

    std::vector<SymMatrix> ok(3, SymMatrix(3));
    CHECK_THROWS_AS(Pencil(0, 3, ok), std::invalid_argument);
    CHECK_NOTHROW(Pencil(3, 3, ok));
}

TEST_CASE("pencil scale is the psd threshold normalization", "[pencil]") {
    const auto p = spectra::zero_pencil(4, 3);
    CHECK(p.scale() == Catch::Approx(1.0 / std::sqrt(24.0)).margin(1e-15));
}

TEST_CASE("sampled pencils are reproducible and carry provenance", "[pencil]") {
    const RngStream stream{7, 0};
    const auto a = spectra::sample_pencil(4, 3, stream);
    const auto b = spectra::sample_pencil(4, 3, stream);

    REQUIRE(a.n == 4);
    REQUIRE(a.ell == 3);
    REQUIRE(a.Q.size() == 3);
    REQUIRE(a.seed_provenance.has_value());
    CHECK(*a.seed_provenance == stream);

    for (int k = 0; k < 3; ++k) {
        const auto& ta = a.Q[static_cast<std::size_t>(k)].triangle();
        const auto& tb = b.Q[static_cast<std::size_t>(k)].triangle();
        REQUIRE(ta.size() == tb.size());
        for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
    }
}

TEST_CASE("pencil matrices have the gaussian orthogonal entry profile", "[pencil][statistical]") {
    const int pencils = 10000;
    std::vector<double> d00, d11, off, other00;
    d00.reserve(pencils);
    d11.reserve(pencils);
    off.reserve(pencils);
    other00.reserve(pencils);
    const RngStream root{2024, 5};
    for (int i = 0; i < pencils; ++i) {
        const auto p = spectra::sample_pencil(2, 2, root.child(static_cast<std::uint64_t>(i)));
        d00.push_back(p.Q[0](0, 0));
        d11.push_back(p.Q[0](1, 1));
        off.push_back(p.Q[0](0, 1));
        other00.push_back(p.Q[1](0, 0));
    }
    CHECK(std::abs(test_helpers::mean_var(d00).var - 1.0) < 0.05);
    CHECK(std::abs(test_helpers::mean_var(d11).var - 1.0) < 0.05);
    CHECK(std::abs(test_helpers::mean_var(off).var - 0.5) < 0.03);

    // Distinct matrices of one pencil come from decorrelated substreams.
    CHECK(std::abs(test_helpers::correlation(d00, other00)) < 0.04);
}

TEST_CASE("pencil evaluation matches a plain dense computation", "[pencil]") {
    const auto p = spectra::sample_pencil(3, 4, RngStream{11, 2});
    RngEngine rng(RngStream{11, 3});
    const auto x = spectra::sample_sphere(4, rng);

    const SymMatrix a = spectra::eval_A(p, x);
    const double s = p.scale();
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            double want = (i == j) ? x[0] : 0.0;
            for (int k = 0; k < 4; ++k)
                want += s * x[static_cast<std::size_t>(k) + 1] * p.Q[static_cast<std::size_t>(k)](i, j);
            CHECK(a(i, j) == Catch::Approx(want).margin(1e-14));
        }
    }
}

TEST_CASE("pencil evaluation anchors", "[pencil]") {
    const auto p = spectra::sample_pencil(3, 3, RngStream{21, 0});

    // The north pole sees only the identity part.
    const SpherePoint north({1.0, 0.0, 0.0, 0.0});
    const SymMatrix a = spectra::eval_A(p, north);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            CHECK(a(i, j) == ((i == j) ? 1.0 : 0.0));

    // A zero pencil sees only x_0 everywhere.
    const auto z = spectra::zero_pencil(3, 3);
    RngEngine rng(RngStream{21, 1});
    const auto x = spectra::sample_sphere(3, rng);
    const SymMatrix az = spectra::eval_A(z, x);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            CHECK(az(i, j) == ((i == j) ? x[0] : 0.0));

    CHECK_THROWS_AS(spectra::eval_A(p, SpherePoint({1.0, 0.0})), std::invalid_argument);
}

TEST_CASE("pencil evaluation is exactly odd in the point", "[pencil]") {
    const auto p = spectra::sample_pencil(4, 3, RngStream{33, 0});
    RngEngine rng(RngStream{33, 1});
    for (int rep = 0; rep < 10; ++rep) {
        const auto x = spectra::sample_sphere(3, rng);
        const SymMatrix a1 = spectra::eval_A(p, x);
        const SymMatrix a2 = spectra::eval_A(p, x.antipode());
        const auto& t1 = a1.triangle();
        const auto& t2 = a2.triangle();
        REQUIRE(t1.size() == t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i] == -t2[i]);
    }
}

TEST_CASE("membership on the hemisphere pencil follows the sign of x0", "[pencil]") {
    const auto z = spectra::zero_pencil(3, 3);
    CHECK(spectra::membership(z, SpherePoint::normalized({0.01, 1.0, 0.0, 0.0})));
    CHECK_FALSE(spectra::membership(z, SpherePoint::normalized({-0.01, 1.0, 0.0, 0.0})));
    // The equator is on the boundary and counts as inside.
    CHECK(spectra::membership(z, SpherePoint({0.0, 1.0, 0.0, 0.0})));
}

TEST_CASE("direction combination matches hand-computed anchors", "[pencil]") {
    const auto toy = test_helpers::toy_pencil();

    const SymMatrix q3 = spectra::direction_Q(toy, SpherePoint({0.0, 0.0, 1.0}));
    CHECK(q3(0, 0) == 1.0);
    CHECK(q3(0, 1) == 0.0);
    CHECK(q3(1, 1) == 1.0);

    const SymMatrix q1 = spectra::direction_Q(toy, SpherePoint({1.0, 0.0, 0.0}));
    CHECK(q1(0, 0) == 1.0);
    CHECK(q1(0, 1) == 0.0);
    CHECK(q1(1, 1) == -1.0);

    // Odd in the direction, exactly.
    const auto d = SpherePoint::normalized({0.3, -0.4, 0.86});
    const SymMatrix m1 = spectra::direction_Q(toy, d);
    const SymMatrix m2 = spectra::direction_Q(toy, d.antipode());
    const auto& t1 = m1.triangle();
    const auto& t2 = m2.triangle();
    for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i] == -t2[i]);

    CHECK_THROWS_AS(spectra::direction_Q(toy, SpherePoint({1.0, 0.0, 0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("sphere sampling is uniform in the first coordinate", "[pencil][statistical]") {
    RngEngine rng(RngStream{99, 0});
    CHECK_THROWS_AS(spectra::sample_sphere(0, rng), std::invalid_argument);

    const int draws = 1000000;
    spectra::KahanSum sum_x0, sum_x0sq;
    double max_norm_err = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto x = spectra::sample_sphere(3, rng);
        max_norm_err = std::max(max_norm_err, std::abs(x.norm() - 1.0));
        sum_x0.add(x[0]);
        sum_x0sq.add(x[0] * x[0]);
    }
    CHECK(max_norm_err <= 1e-12);

    // E x0 = 0 with Var x0 = 1/4; E x0^2 = 1/(dim+1) with Var = 1/16.
    const double mean_x0 = sum_x0.value() / draws;
    const double mean_x0sq = sum_x0sq.value() / draws;
    CHECK(std::abs(mean_x0) < 3.0 * 0.5 / 1000.0);
    CHECK(std::abs(mean_x0sq - 0.25) < 3.0 * 0.25 / 1000.0);
}
