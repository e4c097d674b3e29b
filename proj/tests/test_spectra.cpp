#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/spectra.hpp"

using namespace qbl;

TEST_SUITE("spectra") {

TEST_CASE("second-difference matrix has the cosine spectrum") {
    const std::size_t n = 12;
    SymMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.set(i, i, 2.0);
        if (i + 1 < n) q.set(i, i + 1, -1.0);
    }
    const Spectrum s = eigenvalues(q);
    for (std::size_t k = 1; k <= n; ++k) {
        const double expected = 2.0 - 2.0 * std::cos(double(k) * std::numbers::pi / double(n + 1));
        CHECK(s.eigenvalues[k - 1] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("QL agrees with Jacobi on GOE samples") {
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const SymMatrix q = sample_goe(n, SeedSpec{21, s});
            const Spectrum a = eigenvalues(q);
            const JacobiResult b = jacobi_eigen(q);
            REQUIRE(a.eigenvalues.size() == n);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 1e-11 * (1.0 + q.frobenius_norm()));
            }
            CHECK(std::is_sorted(a.eigenvalues.begin(), a.eigenvalues.end()));
        }
    }
}

TEST_CASE("Jacobi eigenvectors diagonalize") {
    const SymMatrix q = sample_goe(8, SeedSpec{22, 0});
    const JacobiResult r = jacobi_eigen(q, true);
    const Eigen::MatrixXd v = r.eigenvectors;
    CHECK((v * r.eigenvalues.asDiagonal() * v.transpose() - q.dense()).norm() < 1e-12 * q.frobenius_norm());
}

TEST_CASE("trace and Frobenius norm are preserved") {
    const SymMatrix q = sample_goe(30, SeedSpec{23, 0});
    const Spectrum s = eigenvalues(q);
    double tr = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < 30; ++i) tr += q(i, i);
    for (double l : s.eigenvalues) sq += l * l;
    double sum = 0.0;
    for (double l : s.eigenvalues) sum += l;
    CHECK(sum == doctest::Approx(tr).epsilon(1e-12));
    CHECK(std::sqrt(sq) == doctest::Approx(q.frobenius_norm()).epsilon(1e-12));
}

TEST_CASE("Sturm counts match the spectrum") {
    const SymMatrix q = sample_goe(25, SeedSpec{24, 0});
    const Spectrum s = eigenvalues(q);
    const Tridiagonal t = tridiagonalize(q);
    for (double x : {-10.0, -3.0, -0.5, 0.0, 0.7, 2.0, 10.0}) {
        const auto expected = static_cast<std::size_t>(
            std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [x](double l) { return l < x; }));
        CHECK(sturm_count_below(t, x) == expected);
        CHECK(count_below(q, x) == expected);
    }
}

TEST_CASE("inertia examples") {
    const Inertia a = inertia(parse_matrix_literal("1,0,0;0,1,0;0,0,-1"));
    CHECK(a.pos == 2);
    CHECK(a.neg == 1);
    CHECK(a.null == 0);
    CHECK(a.mu() == 2);
    const Inertia b = inertia(parse_matrix_literal("1,1;1,1"));
    CHECK(b.pos == 1);
    CHECK(b.null == 1);
    const Inertia c = inertia_sturm(parse_matrix_literal("1,1;1,1"));
    CHECK(c == b);
}

TEST_CASE("Sturm inertia equals eigensolver inertia on GOE(32)") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const SymMatrix q = sample_goe(32, SeedSpec{25, s});
        CHECK(inertia_sturm(q) == inertia(q));
    }
}

TEST_CASE("default zero tolerance scales with the matrix") {
    const SymMatrix q = sample_goe(10, SeedSpec{26, 0});
    CHECK(default_zero_tol(2.0 * q) == doctest::Approx(2.0 * default_zero_tol(q)));
    CHECK(default_zero_tol(q) > 0.0);
    CHECK(min_abs_eig(parse_matrix_literal("3,0;0,-0.5")) == doctest::Approx(0.5));
}

}
