#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/pencil.hpp"

using namespace qbl;

namespace {

constexpr double kPi = std::numbers::pi;

Pencil random_pencil(std::size_t n, SeedSpec s) {
    Rng rng(s);
    SymMatrix a = sample_goe(n, rng);
    SymMatrix b = sample_goe(n, rng);
    return Pencil(std::move(a), std::move(b));
}

ScanParams with(ScanMethod m) {
    ScanParams p;
    p.method = m;
    return p;
}

}  // namespace

TEST_SUITE("pencil") {

TEST_CASE("constructor rejects proportional pairs") {
    const SymMatrix q = parse_matrix_literal("1,2;2,3");
    CHECK_THROWS_AS(Pencil(q, -2.0 * q), InvalidArgument);
    CHECK_THROWS_AS(Pencil(q, SymMatrix::identity(3)), InvalidArgument);
    CHECK_THROWS_AS(Pencil(q, SymMatrix(2)), InvalidArgument);
}

TEST_CASE("x^2 - y^2 and x^2 + y^2: crossings at pi/4 and 3 pi/4, empty intersection") {
    const Pencil p(parse_matrix_literal("1,0;0,-1"), SymMatrix::identity(2));
    for (ScanMethod m : {ScanMethod::grid, ScanMethod::spectral}) {
        const PencilScan s = scan_index_function(p, with(m));
        REQUIRE_FALSE(s.discarded);
        REQUIRE(s.crossings.size() == 2);
        CHECK(s.crossings[0] == doctest::Approx(kPi / 4).epsilon(1e-9));
        CHECK(s.crossings[1] == doctest::Approx(3 * kPi / 4).epsilon(1e-9));
        CHECK(s.arc_index == std::vector<std::size_t>{1, 2, 1, 0});
        CHECK(s.sigma_count == 4);
        CHECK(s.mu == 2);
        CHECK(s.min_index == 0);
        const TwoQuadricBetti b = betti_two_quadrics(s);
        CHECK(b.total_betti == 0);
        CHECK(b.ledger_betti == 0);
        CHECK(b.rank_e3 == 0);
        CHECK(b.c_plus_d == 1);
    }
}

TEST_CASE("x^2 - y^2 and 2xy: constant index, empty intersection") {
    const Pencil p(parse_matrix_literal("1,0;0,-1"), parse_matrix_literal("0,1;1,0"));
    const PencilScan s = scan_index_function(p, with(ScanMethod::grid));
    REQUIRE_FALSE(s.discarded);
    CHECK(s.index_constant);
    CHECK(s.sigma_count == 0);
    CHECK(s.arc_index == std::vector<std::size_t>{1});
    CHECK(c_plus_d(s) == 0);
    CHECK(rank_d2(s) == 1);
    const TwoQuadricBetti b = betti_two_quadrics(s);
    CHECK(b.rank_e3 == 0);
    // The closed form is off by one on constant-index pencils.
    CHECK(b.closed_form_raw == 1);
}

TEST_CASE("constant-index pencil in four variables: two disjoint circles") {
    // Re and Im of z1^2 + z2^2 with z1 = x0 + i x1, z2 = x2 + i x3.
    const Pencil p(SymMatrix::diagonal(std::vector<double>{1, -1, 1, -1}),
                   parse_matrix_literal("0,1,0,0;1,0,0,0;0,0,0,1;0,0,1,0"));
    for (ScanMethod m : {ScanMethod::grid, ScanMethod::spectral}) {
        const PencilScan s = scan_index_function(p, with(m));
        REQUIRE_FALSE(s.discarded);
        CHECK(s.index_constant);
        CHECK(s.mu == 2);
        CHECK(c_plus_d(s) == 2);
        CHECK(rank_d2(s) == 0);
        CHECK(betti_two_quadrics(s).rank_e3 == 4);
    }
}

TEST_CASE("grid and spectral scans agree") {
    for (std::uint64_t t = 0; t < 60; ++t) {
        const std::size_t n = 2 + t % 8;
        const Pencil p = random_pencil(n, SeedSpec{41, t});
        const PencilScan g = scan_index_function(p, with(ScanMethod::grid));
        const PencilScan s = scan_index_function(p, with(ScanMethod::spectral));
        if (g.discarded || s.discarded) continue;
        CHECK(g.arc_index == s.arc_index);
        REQUIRE(g.crossings.size() == s.crossings.size());
        for (std::size_t i = 0; i < g.crossings.size(); ++i) {
            CHECK(std::abs(g.crossings[i] - s.crossings[i]) < 1e-8);
        }
    }
}

TEST_CASE("scan invariants on random pencils") {
    for (std::uint64_t t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 12;
        const Pencil p = random_pencil(n, SeedSpec{42, t});
        const PencilScan s = scan_index_function(p, with(ScanMethod::spectral));
        if (s.discarded) continue;
        CHECK(s.antipodal_violations == 0);
        CHECK(s.jump_rule_holds());
        CHECK(mu_sandwich_check(p, s));
        CHECK(2 * s.alexander_sum() == s.sigma_count);
        CHECK(s.mu + s.min_index == n);  // i+(-Q) = n - i+(Q)
        CHECK(s.sigma_count == spectral_variety_count(p));
        const TwoQuadricBetti b = betti_two_quadrics(s);
        if (!s.index_constant) {
            CHECK(b.ledger_betti == b.closed_form_raw);
            CHECK(static_cast<long>(b.rank_e3) == b.ledger_betti);
        }
    }
}

TEST_CASE("b(Sigma_W) is invariant under change of basis") {
    for (std::uint64_t t = 0; t < 20; ++t) {
        const Pencil p = random_pencil(7, SeedSpec{43, t});
        const PencilScan a = scan_index_function(p, with(ScanMethod::spectral));
        const PencilScan b = scan_index_function(p.rotated(0.9), with(ScanMethod::spectral));
        if (a.discarded || b.discarded) continue;
        CHECK(a.sigma_count == b.sigma_count);
        CHECK(a.mu == b.mu);
    }
}

TEST_CASE("multiprecision Sturm oracle agrees with the scans") {
    std::size_t agree = 0, total = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        const std::size_t n = 2 + t % 15;
        const Pencil p = random_pencil(n, SeedSpec{44, t});
        const PencilScan s = scan_index_function(p, with(ScanMethod::spectral));
        if (s.discarded) continue;
        ++total;
        agree += spectral_variety_count_oracle(p) == s.sigma_count;
    }
    CHECK(total > 95);
    CHECK(agree == total);
}

TEST_CASE("n = 3: Betti number equals the number of common zeros") {
    std::size_t checked = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Pencil p = random_pencil(3, SeedSpec{45, t});
        const auto points = testing::conic_intersection_count(p.q1(), p.q2());
        const PencilScan s = scan_index_function(p, with(ScanMethod::spectral));
        if (!points || s.discarded) continue;
        ++checked;
        const TwoQuadricBetti b = betti_two_quadrics(s);
        CHECK(b.total_betti == *points);
        CHECK(b.rank_e3 == *points);
    }
    CHECK(checked > 190);
}

TEST_CASE("unknown scan method") {
    CHECK(scan_method_from_string("grid") == ScanMethod::grid);
    CHECK_THROWS_AS(scan_method_from_string("fast"), InvalidArgument);
}

}
