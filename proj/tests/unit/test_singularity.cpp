#include <doctest.h>

#include <array>
#include <cmath>

#include "../support/oracles.hpp"
#include "schlesinger/error.hpp"
#include "schlesinger/singularity.hpp"

using namespace schlesinger;

namespace {

GenericRatFn scalar() {
    return build(PoleZeroLoci({0.0, 1.0}), SemiresidualPair(ComplexMatrix{{1.0}}, ComplexMatrix{{1.0}}), Variant::PZ);
}

GenericRatFn random_fn(std::size_t m, std::size_t n, std::uint64_t seed) {
    const ProblemFile p = generate_problem(m, n, seed);
    return build(p.loci(), SemiresidualPair(p.F, p.G), Variant::PZ);
}

}  // namespace

TEST_CASE("laurent_coeffs") {
    const Complex t(0.5, -0.25);
    const ComplexMatrix a{{1.0, 2.0}, {Complex(0, 1), -1.0}};
    const ComplexMatrix b{{0.5, 0.0}, {3.0, 1.0}};
    const ComplexMatrix c{{-2.0, 1.0}, {0.0, Complex(1, 1)}};

    const std::array<int, 1> minus_one{-1};
    CHECK((laurent_coeffs([&](Complex z) { return (1.0 / (z - t)) * a; }, t, 0.1, minus_one)[0] - a).max_abs() <=
          1e-10);

    const std::array<int, 2> low{-1, 0};
    const auto k = laurent_coeffs([&](Complex) { return b; }, t, 0.1, low);
    CHECK(k[0].max_abs() <= 1e-15);
    CHECK((k[1] - b).max_abs() <= 1e-15);

    const std::array<int, 3> three{-1, 0, 1};
    const auto abc =
        laurent_coeffs([&](Complex z) { return (1.0 / (z - t)) * a + b + (z - t) * c; }, t, 0.1, three, 256);
    CHECK((abc[0] - a).max_abs() <= 1e-9);
    CHECK((abc[1] - b).max_abs() <= 1e-9);
    CHECK((abc[2] - c).max_abs() <= 1e-9);
}

TEST_CASE("classify_point") {
    const GenericRatFn r = random_fn(2, 2, 3);
    CHECK(classify_point(r, r.loci()[0]) == SingularityKind::Pole);
    CHECK(classify_point(r, r.loci()[2]) == SingularityKind::Zero);
    CHECK(classify_point(r, Complex(50.0, 50.0)) == SingularityKind::Regular);
}

TEST_CASE("local data of (z-1)/z") {
    const GenericRatFn r = scalar();
    const LocalData p = local_data(r, 0.0);
    CHECK(p.kind == SingularityKind::Pole);
    CHECK(std::abs(p.residue_R(0, 0) + 1.0) <= 1e-12);
    CHECK(std::abs(p.Q_t(0, 0) + 1.0) <= 1e-12);
    // 1/(z(z-1)) = -1/z - 1 - z - ... near 0
    CHECK(std::abs(p.C_t(0, 0) + 1.0) <= 1e-12);
    CHECK(p.relation_residual <= 1e-12);

    const LocalData z = local_data(r, 1.0);
    CHECK(z.kind == SingularityKind::Zero);
    CHECK(std::abs(z.residue_R(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(z.Q_t(0, 0) - 1.0) <= 1e-12);
    // 1/(z(z-1)) = 1/(z-1) - 1 + (z-1) - ... near 1
    CHECK(std::abs(z.C_t(0, 0) + 1.0) <= 1e-12);

    try {
        (void)local_data(r, 5.0);
        FAIL("expected an Error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidInput);
    }
}

TEST_CASE("local relations on random functions") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const GenericRatFn r = random_fn(2 + seed % 3, 2 + seed % 2, seed);
        for (const Complex t : r.loci().values()) {
            const LocalData d = local_data(r, t);
            const ComplexMatrix& q = d.Q_t;
            const ComplexMatrix& c = d.C_t;
            const bool pole = d.kind == SingularityKind::Pole;
            const double qn = std::max(1.0, q.frobenius_norm());
            const double cn = std::max(1.0, c.frobenius_norm());
            // Independent recomputation of the relation residuals from the returned data.
            const ComplexMatrix sq = pole ? q * q + q : q * q - q;
            const ComplexMatrix qcq = pole ? q * c * q + c * q : q * c * q - q * c;
            CHECK(sq.frobenius_norm() / (qn * qn) <= 1e-8);
            CHECK(qcq.frobenius_norm() / (qn * qn * cn) <= 1e-8);
            CHECK(numerical_rank(d.residue_R) == numerical_rank(q));
        }
    }
}

TEST_CASE("semiresidues") {
    const ComplexMatrix m{{1.0, 2.0}, {2.0, 4.0}};
    const auto fg = semiresidues(m);
    CHECK((fg.f * fg.g - m).max_abs() <= 1e-12);
    CHECK(std::abs(fg.f(1, 0) - 2.0 * fg.f(0, 0)) <= 1e-12);
    CHECK_THROWS_AS((void)semiresidues(ComplexMatrix::identity(2)), Error);
}

TEST_CASE("principal factors from semiresidues") {
    SUBCASE("zero, f = e1") {
        const PrincipalFactor e = principal_factor_from_semiresidue(SingularityKind::Zero, ComplexMatrix{{1.0}, {0.0}});
        CHECK(e.L() == ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
        const Complex zeta(0.3, 0.8);
        CHECK((e.value(zeta) - ComplexMatrix{{zeta, 0.0}, {0.0, 1.0}}).max_abs() <= 1e-15);
    }
    SUBCASE("pole, g = e2") {
        const PrincipalFactor e = principal_factor_from_semiresidue(SingularityKind::Pole, ComplexMatrix{{0.0, 1.0}});
        CHECK(e.L() == ComplexMatrix{{0.0, 0.0}, {0.0, -1.0}});
        const Complex zeta(-1.2, 0.4);
        CHECK((e.value(zeta) - ComplexMatrix{{1.0, 0.0}, {0.0, 1.0 / zeta}}).max_abs() <= 1e-15);
    }
    SUBCASE("scaling the semiresidue") {
        Rng rng(5);
        const ComplexMatrix f = oracle::random_matrix(rng, 3, 1);
        for (const SingularityKind kind : {SingularityKind::Pole, SingularityKind::Zero}) {
            const PrincipalFactor a = principal_factor_from_semiresidue(kind, f);
            const PrincipalFactor b = principal_factor_from_semiresidue(kind, 2.0 * f);
            CHECK((a.L() - b.L()).max_abs() <= 1e-15);
            CHECK(a.idempotency_residual() <= 1e-14);
            for (int j = 0; j < 5; ++j) {
                const Complex zeta = std::polar(0.5 + 0.3 * j, 1.1 * j);
                CHECK((a.value(zeta) * a.inverse(zeta) - ComplexMatrix::identity(3)).max_abs() <= 1e-13);
            }
        }
    }
    CHECK_THROWS_AS((void)principal_factor_from_semiresidue(SingularityKind::Zero, ComplexMatrix::zeros(2, 1)), Error);
    CHECK_THROWS_AS((void)principal_factor_from_semiresidue(SingularityKind::Regular, ComplexMatrix{{1.0}}), Error);
    const PrincipalFactor e = principal_factor_from_semiresidue(SingularityKind::Pole, ComplexMatrix{{1.0}});
    CHECK_THROWS_AS((void)e.value(0.0), Error);
}

TEST_CASE("regular factor after removing the principal part") {
    const GenericRatFn s = scalar();
    const VerificationReport scalar_rep = verify_regular_factor(s, principal_factor_at(s, 0.0), 0.0);
    CHECK(scalar_rep.passed());

    for (std::uint64_t seed = 120; seed < 126; ++seed) {
        const GenericRatFn r = random_fn(2 + seed % 2, 2, seed);
        for (const Complex t : r.loci().values()) {
            const PrincipalFactor e = principal_factor_at(r, t);
            CHECK(verify_regular_factor(r, e, t).passed());
            // Independent check: H = R·E⁻¹ has no pole at t, by contour quadrature.
            const double rho = 0.2 * r.loci().isolation(static_cast<std::size_t>(
                                          std::find(r.loci().values().begin(), r.loci().values().end(), t) -
                                          r.loci().values().begin()));
            const ComplexMatrix h_res = oracle::contour_coefficient(
                [&](Complex z) { return r.eval(z) * e.inverse(z - t); }, t, rho, -1);
            CHECK(h_res.max_abs() <= 1e-8 * std::max(1.0, r.eval(t + rho).max_abs()));
        }
    }
}

TEST_CASE("a wrong principal factor is rejected") {
    const GenericRatFn r = random_fn(2, 2, 130);
    const Complex t = r.loci()[0];
    const PrincipalFactor at_pole = principal_factor_at(r, t);
    const PrincipalFactor other = principal_factor_at(r, r.loci()[1]);
    CHECK(verify_regular_factor(r, at_pole, t).passed());
    CHECK_FALSE(verify_regular_factor(r, other, t).passed());
}
