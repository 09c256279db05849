#include <doctest.h>

#include <bitset>
#include <cmath>

#include "../support/oracles.hpp"
#include "schlesinger/error.hpp"
#include "schlesinger/linalg.hpp"

using namespace schlesinger;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidInput;
}

ComplexMatrix pattern(std::size_t n, unsigned bits) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n * n; ++k) m(k / n, k % n) = (bits >> k) & 1u ? 1.0 : 0.0;
    return m;
}

}  // namespace

TEST_CASE("matrix arithmetic basics") {
    const ComplexMatrix a{{1.0, 2.0}, {3.0, Complex(0, 1)}};
    CHECK((a * ComplexMatrix::identity(2)) == a);
    CHECK(a.trace() == Complex(1, 1));
    CHECK(a.adjoint()(1, 1) == Complex(0, -1));
    CHECK(commutator(a, a).max_abs() == 0.0);
    CHECK(code_of([&] { (void)(a * ComplexMatrix(3, 1)); }) == ErrorCode::InvalidInput);
    CHECK(ComplexMatrix{{3.0, 4.0}}.frobenius_norm() == doctest::Approx(5.0));
}

TEST_CASE("lu_solve") {
    Rng rng(11);
    const ComplexMatrix m = oracle::random_matrix(rng, 3, 2);
    CHECK(lu_solve(ComplexMatrix::identity(3), m) == m);

    const ComplexMatrix x = lu_solve(ComplexMatrix{{2.0, 0.0}, {0.0, 4.0}}, ComplexMatrix{{2.0}, {8.0}});
    CHECK(x(0, 0) == Complex(1.0));
    CHECK(x(1, 0) == Complex(2.0));

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = ComplexMatrix::identity(2) + 0.5 * oracle::random_matrix(rng, 2, 2);
        const ComplexMatrix x0 = oracle::random_matrix(rng, 2, 3);
        CHECK((lu_solve(a, a * x0) - x0).max_abs() <= 1e-12);
    }
    CHECK(code_of([] { (void)lu_solve(ComplexMatrix{{1.0, 2.0}, {2.0, 4.0}}, ComplexMatrix{{1.0}, {1.0}}); }) ==
          ErrorCode::SingularMatrix);
}

TEST_CASE("det against the permutation expansion") {
    CHECK(det(ComplexMatrix::identity(4)) == Complex(1.0));
    CHECK(std::abs(det(ComplexMatrix{{2.0, 0.0}, {0.0, Complex(0, 3)}}) - Complex(0, 6)) <= 1e-15);
    CHECK(det(ComplexMatrix::zeros(3, 3)) == Complex(0.0));

    Rng rng(12);
    for (std::size_t n = 1; n <= 6; ++n) {
        const ComplexMatrix a = oracle::random_matrix(rng, n, n);
        CHECK(oracle::rel_diff(det(a), oracle::permutation_det(a)) <= 1e-10);
    }
}

TEST_CASE("cond_estimate") {
    for (std::size_t n = 1; n <= 4; ++n) CHECK(cond_estimate(ComplexMatrix::identity(n)) <= 2.0);
    CHECK(cond_estimate(ComplexMatrix{{1.0, 0.0}, {0.0, 1e-8}}) >= 1e7);
    Rng rng(13);
    const ComplexMatrix u = oracle::householder_product(rng, 3, 3);
    CHECK((u * u.adjoint() - ComplexMatrix::identity(3)).max_abs() <= 1e-14);
    CHECK(cond_estimate(u) <= 3.0 + 1e-12);
    CHECK(std::isinf(cond_estimate(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}})));
}

TEST_CASE("solve_lyapunov_diag") {
    const ComplexMatrix x = solve_lyapunov_diag({0.0}, {1.0}, ComplexMatrix{{1.0}});
    CHECK(x(0, 0) == Complex(-1.0));

    Rng rng(14);
    const DiagSpectrum a{Complex(0, 0), Complex(1, 1), Complex(-1, 0.5)};
    const DiagSpectrum b{Complex(3, 0), Complex(3, 2), Complex(2.5, -1)};
    CHECK(solve_lyapunov_diag(a, b, ComplexMatrix::zeros(3, 3)).max_abs() == 0.0);

    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> av, bv;
        for (int k = 0; k < 3; ++k) {
            av.push_back(rng.box(1.0));
            bv.push_back(Complex(4.0, 0.0) + rng.box(1.0));
        }
        const DiagSpectrum da(av), db(bv);
        const ComplexMatrix y = oracle::random_matrix(rng, 3, 3);
        const ComplexMatrix s = solve_lyapunov_diag(da, db, y);
        const ComplexMatrix residual = scale_rows(da, s) - scale_cols(s, db) - y;
        CHECK(residual.frobenius_norm() <= 1e-12 * y.frobenius_norm());
        CHECK(oracle::rel_diff(s, contour_lyapunov_oracle(da, db, y)) <= 1e-8);
    }
    CHECK(code_of([] { (void)solve_lyapunov_diag({0.0, 1.0}, {1.0, 2.0}, ComplexMatrix::identity(2)); }) ==
          ErrorCode::SpectraCollide);
}

TEST_CASE("contour oracle") {
    const ComplexMatrix x = contour_lyapunov_oracle({0.0}, {2.0}, ComplexMatrix{{1.0}}, 64);
    CHECK(std::abs(x(0, 0) + 0.5) <= 1e-10);
    CHECK(contour_lyapunov_oracle({0.0}, {2.0}, ComplexMatrix{{0.0}}, 64).max_abs() == 0.0);

    Rng rng(15);
    SUBCASE("random n = 2") {
        const DiagSpectrum a{rng.box(1.0), Complex(0.0, 3.0)};
        const DiagSpectrum b{Complex(3.0, 0.0), Complex(-3.0, -1.0)};
        const ComplexMatrix y = oracle::random_matrix(rng, 2, 2);
        CHECK(oracle::rel_diff(contour_lyapunov_oracle(a, b, y), solve_lyapunov_diag(a, b, y)) <= 1e-8);
    }
    SUBCASE("interleaved spectra, separation at least 0.5") {
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto t = random_loci(rng, n, {.box = 2.0, .min_separation = 0.5});
            const DiagSpectrum a(std::vector<Complex>(t.begin(), t.begin() + static_cast<long>(n)));
            const DiagSpectrum b(std::vector<Complex>(t.begin() + static_cast<long>(n), t.end()));
            const ComplexMatrix y = oracle::random_matrix(rng, n, n);
            CHECK(oracle::rel_diff(contour_lyapunov_oracle(a, b, y), solve_lyapunov_diag(a, b, y)) <= 1e-8);
        }
    }
    CHECK(code_of([] { (void)contour_lyapunov_oracle({1.0}, {1.0}, ComplexMatrix{{1.0}}); }) ==
          ErrorCode::NoSeparatingContour);
}

TEST_CASE("Frobenius singularity: directed examples") {
    CHECK(is_frobenius_singular(ComplexMatrix::zeros(2, 2)));
    for (std::size_t n = 1; n <= 5; ++n) CHECK_FALSE(is_frobenius_singular(ComplexMatrix::identity(n)));
    CHECK(is_frobenius_singular(ComplexMatrix{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}));
    CHECK_FALSE(frobenius_brute(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(frobenius_brute(ComplexMatrix{{0.0, 1.0}, {0.0, 1.0}}));
    CHECK(code_of([] { (void)frobenius_brute(ComplexMatrix::identity(9)); }) == ErrorCode::TooLarge);
    // Entries at or below zero_eps count as structural zeros.
    CHECK(is_frobenius_singular(ComplexMatrix{{1e-20, 1.0}, {1.0, 0.0}}, 0.0) == false);
    CHECK(is_frobenius_singular(ComplexMatrix{{1.0, 1e-20}, {1e-20, 0.0}}, 1e-13));
}

TEST_CASE("Frobenius singularity: every l x (n-l+1) zero block") {
    Rng rng(16);
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::size_t l = 1; l <= n; ++l) {
            ComplexMatrix m = oracle::random_matrix(rng, n, n);
            for (std::size_t i = 0; i < l; ++i)
                for (std::size_t j = 0; j < n - l + 1; ++j) m(n - 1 - i, j) = 0.0;
            CHECK(is_frobenius_singular(m));
            CHECK(frobenius_brute(m));
        }
}

TEST_CASE("Frobenius singularity: matching equals brute force") {
    int disagreements = 0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
            const ComplexMatrix m = pattern(n, bits);
            disagreements += is_frobenius_singular(m) != frobenius_brute(m);
        }
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6);
        ComplexMatrix m(n, n);
        const double density = rng.uniform(0.2, 0.8);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform() < density ? 1.0 : 0.0;
        disagreements += is_frobenius_singular(m) != frobenius_brute(m);
    }
    CHECK(disagreements == 0);
}

TEST_CASE("rank_one_factor") {
    const ComplexMatrix m{{1.0, 2.0}, {2.0, 4.0}};
    const auto [f, g] = rank_one_factor(m);
    CHECK((f * g - m).max_abs() <= 1e-12);
    CHECK(f(1, 0).imag() == 0.0);
    CHECK(f(1, 0).real() > 0.0);

    ComplexMatrix e(3, 3);
    e(0, 2) = 3.0;
    const auto fe = rank_one_factor(e);
    CHECK((fe.f * fe.g) == e);

    Rng rng(18);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix u = oracle::random_matrix(rng, 5, 1);
        const ComplexMatrix v = oracle::random_matrix(rng, 1, 5);
        const ComplexMatrix outer = u * v;
        const auto fg = rank_one_factor(outer);
        CHECK((fg.f * fg.g - outer).frobenius_norm() <= 1e-12 * outer.frobenius_norm());
        CHECK(rank_one_defect(outer) <= 1e-12);
        CHECK(numerical_rank(outer) == 1);
    }
    CHECK(code_of([] { (void)rank_one_factor(ComplexMatrix::identity(2)); }) == ErrorCode::NotRankOne);
    CHECK(code_of([] { (void)rank_one_factor(ComplexMatrix::zeros(2, 2)); }) == ErrorCode::NotRankOne);
    CHECK(numerical_rank(ComplexMatrix::identity(3)) == 3);
    CHECK(numerical_rank(ComplexMatrix::zeros(3, 3)) == 0);
}

TEST_CASE("Cauchy determinant") {
    CHECK(cauchy_determinant({0.0}, {1.0}) == Complex(-1.0));
    CHECK(std::abs(cauchy_determinant({0.0, 1.0}, {2.0, 3.0}) - Complex(-1.0 / 12.0)) <= 1e-15);

    Rng rng(19);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto t = random_loci(rng, n);
        const DiagSpectrum z(std::vector<Complex>(t.begin(), t.begin() + static_cast<long>(n)));
        const DiagSpectrum s(std::vector<Complex>(t.begin() + static_cast<long>(n), t.end()));
        const ComplexMatrix c = cauchy_matrix(z, s);
        CHECK(oracle::rel_diff(cauchy_determinant(z, s), det(c)) <= 1e-10);
        CHECK(oracle::rel_diff(det(c), oracle::permutation_det(c)) <= 1e-10);
    }
    CHECK(code_of([] { (void)cauchy_determinant({0.0, 1.0}, {1.0, 2.0}); }) == ErrorCode::SpectraCollide);
}
