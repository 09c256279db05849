#pragma once

#include <cstddef>
#include <vector>

#include "schlesinger/matrix.hpp"

namespace schlesinger {

/// Relative pivot threshold used by LuFactor::solve and lu_solve.
inline constexpr double kPivotEps = 1e-13;

/// LU factorization with partial pivoting, PA = LU.
///
/// Factoring never throws; a pivot below kPivotEps times the largest entry of
/// the input marks the factor as singular and solve()/inverse() then raise
/// SingularMatrix. det() is always available and is exactly zero only when an
/// exactly-zero column was met.
class LuFactor {
public:
    explicit LuFactor(const ComplexMatrix& a);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool singular() const noexcept { return singular_; }
    [[nodiscard]] Complex det() const;
    [[nodiscard]] ComplexMatrix solve(const ComplexMatrix& b) const;
    /// Solves X·A = B, i.e. X = B·A⁻¹.
    [[nodiscard]] ComplexMatrix solve_right(const ComplexMatrix& b) const;
    [[nodiscard]] ComplexMatrix inverse() const;

private:
    std::size_t n_ = 0;
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    int parity_ = 1;
    bool singular_ = false;
};

[[nodiscard]] ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b);
[[nodiscard]] Complex det(const ComplexMatrix& a);
[[nodiscard]] ComplexMatrix inverse(const ComplexMatrix& a);

/// ‖A‖₁·‖A⁻¹‖₁, or +inf when A is numerically singular.
[[nodiscard]] double cond_estimate(const ComplexMatrix& a);

/// Solves diag(a)·X − X·diag(b) = Y entrywise: X_ij = Y_ij / (a_i − b_j).
///
/// `dist_eps` < 0 selects the default separation 1e-12·(1 + max|a|, |b|).
/// Throws SpectraCollide when some |a_i − b_j| falls below it.
[[nodiscard]] ComplexMatrix solve_lyapunov_diag(const DiagSpectrum& a, const DiagSpectrum& b,
                                                const ComplexMatrix& y, double dist_eps = -1.0);

/// Independent route to the same Lyapunov solution: trapezoidal quadrature of
/// (1/2πi)∮ (zI−U)⁻¹ Y (zI−V)⁻¹ dz with U = diag(a), V = diag(b).
///
/// A single circle about mean(a) is used when one separates the spectra.
/// Otherwise the contour is a union of small disjoint circles, one around each
/// distinct a_i, which is again a cycle winding once around every a_i and not
/// around any b_j.
[[nodiscard]] ComplexMatrix contour_lyapunov_oracle(const DiagSpectrum& a, const DiagSpectrum& b,
                                                    const ComplexMatrix& y,
                                                    std::size_t quad_points = 128);

/// Default structural-zero threshold for floating-point input: 1e-13·max|m_ij|.
[[nodiscard]] double numerical_zero_eps(const ComplexMatrix& m);

/// True iff the pattern {|m_ij| > zero_eps} admits no perfect matching, i.e.
/// every term of the permutation expansion of det M vanishes.
[[nodiscard]] bool is_frobenius_singular(const ComplexMatrix& m, double zero_eps = 0.0);

/// Enumerates all n! permutation products. Throws TooLarge for n > 8.
[[nodiscard]] bool frobenius_brute(const ComplexMatrix& m, double zero_eps = 0.0);

/// Size of a maximum matching in the bipartite graph rows × cols with an edge
/// wherever |m_ij| > zero_eps (Kuhn's augmenting paths).
[[nodiscard]] std::size_t structural_rank(const ComplexMatrix& m, double zero_eps = 0.0);

struct RankOneFactors {
    ComplexMatrix f;  // m×1
    ComplexMatrix g;  // 1×m
};

/// Factors a numerically rank-one matrix as M = f·g.
///
/// Gauge: f is the largest-norm column of M rotated so that its largest
/// modulus entry is real positive; g is the least-squares row for that f.
/// Throws NotRankOne if ‖M − f·g‖_F > rank_eps·‖M‖_F or M = 0.
[[nodiscard]] RankOneFactors rank_one_factor(const ComplexMatrix& m, double rank_eps = 1e-8);

/// Relative rank-one defect ‖M − f·g‖_F / ‖M‖_F of the gauge-fixed factors
/// (+inf for the zero matrix). Used as a numerical rank proxy.
[[nodiscard]] double rank_one_defect(const ComplexMatrix& m);

/// Number of pivots above rel_eps·(largest pivot) in a column-pivoted
/// Gram–Schmidt QR; 0 for the zero matrix.
[[nodiscard]] std::size_t numerical_rank(const ComplexMatrix& m, double rel_eps = 1e-8);

/// det(1/(z_l − t_k)) in closed product form.
[[nodiscard]] Complex cauchy_determinant(const DiagSpectrum& z, const DiagSpectrum& t);

/// The matrix (1/(z_l − t_k)) itself, for cross-checks.
[[nodiscard]] ComplexMatrix cauchy_matrix(const DiagSpectrum& z, const DiagSpectrum& t);

}  // namespace schlesinger
