#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "schlesinger/linalg.hpp"
#include "schlesinger/matrix.hpp"
#include "schlesinger/ratfun.hpp"
#include "schlesinger/report.hpp"

namespace schlesinger {

enum class SingularityKind { Pole, Zero, Regular };

using MatrixFunction = std::function<ComplexMatrix(Complex)>;

inline constexpr std::size_t kLaurentNodes = 256;
inline constexpr double kLocalTol = 1e-8;

/// Coefficients of (z − t)^k, k in `orders`, by the trapezoidal rule on the
/// circle |z − t| = radius. f must be holomorphic on the punctured disk.
[[nodiscard]] std::vector<ComplexMatrix> laurent_coeffs(const MatrixFunction& f, Complex t, double radius,
                                                        std::span<const int> orders,
                                                        std::size_t quad_points = kLaurentNodes);

/// Pure bookkeeping against the loci of r (within dist_eps).
[[nodiscard]] SingularityKind classify_point(const GenericRatFn& r, Complex t);

struct LocalData {
    Complex point;
    SingularityKind kind = SingularityKind::Regular;
    ComplexMatrix residue_R;  // of R at a pole, of R⁻¹ at a zero
    ComplexMatrix Q_t;        // residue of R'R⁻¹
    ComplexMatrix C_t;        // constant Laurent term of R'R⁻¹
    double relation_residual = 0.0;
    double alignment_residual = 0.0;
};

/// Contour-extracted local data at a pole or zero of r, on the circle of
/// radius 0.25·(distance to the nearest other locus).
///
/// Throws InvalidInput at a regular point and RelationViolation when the
/// local residue relations fail by more than tol_local.
[[nodiscard]] LocalData local_data(const GenericRatFn& r, Complex t, double tol_local = kLocalTol);

/// Left and right semiresidues of a rank-one residue, in the rank_one_factor gauge.
[[nodiscard]] RankOneFactors semiresidues(const ComplexMatrix& residue, double rank_eps = 1e-8);

/// E(ζ) = I + L − ζ⁻¹L at a pole, I − L + ζL at a zero.
class PrincipalFactor {
public:
    PrincipalFactor(SingularityKind kind, ComplexMatrix l);

    [[nodiscard]] SingularityKind kind() const noexcept { return kind_; }
    [[nodiscard]] const ComplexMatrix& L() const noexcept { return l_; }
    [[nodiscard]] ComplexMatrix value(Complex zeta) const;
    /// Closed form: I + L − ζL at a pole, I − L + ζ⁻¹L at a zero.
    [[nodiscard]] ComplexMatrix inverse(Complex zeta) const;
    /// ‖L² + L‖ at a pole, ‖L² − L‖ at a zero.
    [[nodiscard]] double idempotency_residual() const;

private:
    SingularityKind kind_;
    ComplexMatrix l_;
};

/// Pole: v is the right semiresidue g and L = −g*(gg*)⁻¹g.
/// Zero: v is the left semiresidue f and L = f(f*f)⁻¹f*.
/// Row or column shape of v is irrelevant. Throws ZeroVector for v = 0.
[[nodiscard]] PrincipalFactor principal_factor_from_semiresidue(SingularityKind kind, const ComplexMatrix& v);

/// The canonical principal factor of r at one of its loci.
[[nodiscard]] PrincipalFactor principal_factor_at(const GenericRatFn& r, Complex t);

/// H(z) = R(z)·E(z − t)⁻¹ must be holomorphic and invertible at t: checks the
/// residues of H and H⁻¹ and |det H(t)| ≥ 1e-10·scale^m.
[[nodiscard]] VerificationReport verify_regular_factor(const GenericRatFn& r, const PrincipalFactor& e, Complex t,
                                                       double tol_local = kLocalTol);

}  // namespace schlesinger
