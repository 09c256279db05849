#pragma once

#include <cstddef>
#include <vector>

#include "schlesinger/linalg.hpp"
#include "schlesinger/matrix.hpp"
#include "schlesinger/ratfun.hpp"

namespace schlesinger {

/// Stricter conditioning bound used at the nodes of integration paths.
inline constexpr double kPathCondMax = 1e8;

/// A constant semiresidual pair (F, G) defining R(z, t) for every loci t off
/// the singular set. Admissible iff G·F is not Frobenius-singular; an
/// inadmissible handle refuses every point constructor with NotAdmissible.
class FamilyHandle {
public:
    explicit FamilyHandle(SemiresidualPair pair);

    [[nodiscard]] const SemiresidualPair& pair() const noexcept { return pair_; }
    [[nodiscard]] const ComplexMatrix& F() const noexcept { return pair_.F(); }
    [[nodiscard]] const ComplexMatrix& G() const noexcept { return pair_.G(); }
    [[nodiscard]] const ComplexMatrix& GF() const noexcept { return gf_; }
    [[nodiscard]] std::size_t m() const noexcept { return pair_.m(); }
    [[nodiscard]] std::size_t n() const noexcept { return pair_.n(); }
    [[nodiscard]] bool admissible() const noexcept { return admissible_; }

private:
    SemiresidualPair pair_;
    ComplexMatrix gf_;
    bool admissible_ = false;
};

[[nodiscard]] FamilyHandle make_family(ComplexMatrix f, ComplexMatrix g);

/// Entrywise Cauchy form: S_PZ(t)_ij = (GF)_ij/(t_i − t_{n+j}),
/// S_ZP(t)_ij = (GF)_ij/(t_{n+i} − t_j).
[[nodiscard]] ComplexMatrix coupling_at(const FamilyHandle& h, const PoleZeroLoci& t, Variant which);

struct SchlesingerState {
    std::vector<ComplexMatrix> Q;
    ComplexMatrix V;
    Complex tau;
};

/// The family at one t: R(z, t) = I + F·S_PZ(t)⁻¹(zI − A_P(t))⁻¹G.
/// Throws NotAdmissible for an inadmissible handle and NearSingularSet when
/// cond(S_PZ(t)) ≥ cond_max.
class FamilyPoint {
public:
    FamilyPoint(const FamilyHandle& h, PoleZeroLoci t, double cond_max = kCondMax);

    [[nodiscard]] const PoleZeroLoci& loci() const noexcept { return t_; }
    [[nodiscard]] const ComplexMatrix& coupling() const noexcept { return s_; }
    [[nodiscard]] const ComplexMatrix& coupling_inverse() const noexcept { return s_inv_; }
    [[nodiscard]] double cond() const noexcept { return cond_; }
    [[nodiscard]] Complex tau() const noexcept { return tau_; }

    [[nodiscard]] ComplexMatrix eval(Complex z) const;
    /// R⁻¹(w, t) = I − F(wI − A_Z(t))⁻¹S_PZ(t)⁻¹G.
    [[nodiscard]] ComplexMatrix eval_inverse(Complex w) const;
    [[nodiscard]] SchlesingerState state() const;

private:
    SemiresidualPair pair_;
    PoleZeroLoci t_;
    ComplexMatrix s_;
    ComplexMatrix s_inv_;
    double cond_ = 0.0;
    Complex tau_;
};

[[nodiscard]] ComplexMatrix family_eval(const FamilyHandle& h, const PoleZeroLoci& t, Complex z);
[[nodiscard]] SchlesingerState schlesinger_state(const FamilyHandle& h, const PoleZeroLoci& t);

/// Default finite-difference step 1e-5·(1 + max|t_k|).
[[nodiscard]] double default_fd_step(const PoleZeroLoci& t);

/// Max residual of the Schlesinger equations (off-diagonal and diagonal) with
/// central differences along Re t_ℓ, and the largest disagreement between the
/// Re- and Im-direction derivatives. pde and cauchy_riemann are divided by
/// scale = max(1, max_k ‖Q_k‖)², the size of the commutator terms.
struct SchlesingerResidual {
    double pde = 0.0;
    double cauchy_riemann = 0.0;
    double pde_abs = 0.0;
    double scale = 1.0;
};
[[nodiscard]] SchlesingerResidual schlesinger_residual(const FamilyHandle& h, const PoleZeroLoci& t, double step);

/// gradient: max_k ‖∂V/∂t_k − Q_k‖ / max(1, max_k ‖Q_k‖).
/// asymptotic: ‖V + lim z(R(z) − I)‖/max(1, ‖V‖) with the limit
/// Richardson-extrapolated from |z| = 1e4 and 1e6.
struct PotentialResidual {
    double gradient = 0.0;
    double asymptotic = 0.0;
    double gradient_abs = 0.0;
};
[[nodiscard]] PotentialResidual potential_check(const FamilyHandle& h, const PoleZeroLoci& t, double step);

/// Each against Σ_{j≠i} tr(Q_iQ_j)/(t_i − t_j), max over i and relative to
/// max(1, |rhs|): the Jacobi formula tr(S⁻¹∂S/∂t_i) with closed-form ∂S, and
/// a central difference of log det S. dS_closed_vs_fd compares ∂S itself.
struct TauResidual {
    double jacobi_vs_rhs = 0.0;
    double fd_vs_rhs = 0.0;
    double dS_closed_vs_fd = 0.0;
};
[[nodiscard]] TauResidual tau_logderiv_check(const FamilyHandle& h, const PoleZeroLoci& t, double step);

/// ∂S_PZ/∂t_i in closed form.
[[nodiscard]] ComplexMatrix coupling_derivative(const FamilyHandle& h, const PoleZeroLoci& t, std::size_t i);

struct TauPathNode {
    double s = 0.0;
    Complex tau;  // det S_PZ at the node
    double cond = 0.0;
};

struct TauPathResult {
    std::vector<TauPathNode> nodes;  // including any bisection nodes, in order of s
    Complex tau_start;
    Complex tau_integral;  // τ(t0)·exp(∫ d log τ)
    Complex tau_direct;    // det S_PZ(t1)
    double rel_error = 0.0;
};

/// Integrates d log τ = Σ_i Σ_{j≠i} tr(Q_iQ_j)/(t_i − t_j) dt_i along the
/// straight segment t0 → t1 by the composite trapezoid rule. An interval is
/// bisected when its increment turns the phase by more than π/2 or disagrees
/// with the phase change of det S_PZ by more than π/2. Throws
/// PathHitsSingularSet when cond(S_PZ) ≥ kPathCondMax at some node or the
/// bisection depth runs out.
[[nodiscard]] TauPathResult tau_path_integral(const FamilyHandle& h, const PoleZeroLoci& t0, const PoleZeroLoci& t1,
                                              std::size_t steps);

/// Doubles the trapezoid step count from initial_steps until the estimated
/// error |τ_N − τ_{N/2}|/(3|τ_N|) falls below est_tol or max_steps is reached.
struct RefinedTauPath {
    TauPathResult result;
    std::size_t steps = 0;
    double estimated_error = 0.0;
};
[[nodiscard]] RefinedTauPath tau_path_integral_refined(const FamilyHandle& h, const PoleZeroLoci& t0,
                                                       const PoleZeroLoci& t1, std::size_t initial_steps,
                                                       double est_tol, std::size_t max_steps);

/// Max over loci of the distance between canonical principal-factor projectors
/// built from contour-extracted semiresidues of R(·, t_a) and R(·, t_b).
[[nodiscard]] double isoprincipal_check(const FamilyHandle& h, const PoleZeroLoci& t_a, const PoleZeroLoci& t_b);

}  // namespace schlesinger
