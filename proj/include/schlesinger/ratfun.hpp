#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "schlesinger/linalg.hpp"
#include "schlesinger/matrix.hpp"
#include "schlesinger/report.hpp"

namespace schlesinger {

/// Refuse coupling matrices whose 1-norm condition number reaches this.
inline constexpr double kCondMax = 1e12;

/// Ordered loci t_1..t_2n: the first n are poles, the last n are zeros.
class PoleZeroLoci {
public:
    /// Throws InvalidInput for an odd/empty list or non-finite entries and
    /// SpectraCollide when two loci are closer than dist_eps().
    explicit PoleZeroLoci(std::vector<Complex> t);

    [[nodiscard]] std::size_t n() const noexcept { return t_.size() / 2; }
    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }
    [[nodiscard]] Complex operator[](std::size_t k) const { return t_[k]; }
    [[nodiscard]] Complex pole(std::size_t k) const { return t_[k]; }
    [[nodiscard]] Complex zero(std::size_t k) const { return t_[n() + k]; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return t_; }
    [[nodiscard]] DiagSpectrum poles() const;
    [[nodiscard]] DiagSpectrum zeros() const;

    /// 1e-8·(1 + max|t_k|).
    [[nodiscard]] double dist_eps() const noexcept;
    [[nodiscard]] double min_separation() const noexcept;
    /// Distance from t_k to the nearest other locus.
    [[nodiscard]] double isolation(std::size_t k) const;
    [[nodiscard]] double max_abs() const noexcept;

    /// Exchanges t_k and t_{n+k} for every k.
    [[nodiscard]] PoleZeroLoci swapped() const;

    friend bool operator==(const PoleZeroLoci&, const PoleZeroLoci&) = default;

private:
    std::vector<Complex> t_;
};

/// F (m×n) and G (n×m): semiresidual data. F has no zero column and G no zero row.
class SemiresidualPair {
public:
    SemiresidualPair(ComplexMatrix f, ComplexMatrix g);

    [[nodiscard]] const ComplexMatrix& F() const noexcept { return f_; }
    [[nodiscard]] const ComplexMatrix& G() const noexcept { return g_; }
    [[nodiscard]] std::size_t m() const noexcept { return f_.rows(); }
    [[nodiscard]] std::size_t n() const noexcept { return f_.cols(); }

private:
    ComplexMatrix f_;
    ComplexMatrix g_;
};

/// Which pairing of semiresidual matrices the data prescribes:
///   ZP: F is the left pole and G the right zero semiresidual matrix;
///   PZ: F is the left zero and G the right pole semiresidual matrix.
enum class Variant { ZP, PZ };

/// R_k: residues of R at poles (k < n) and of R⁻¹ at zeros (k ≥ n).
/// Q_k: residues of the logarithmic derivative R'R⁻¹ at every locus.
struct ResidueSet {
    std::vector<ComplexMatrix> R;
    std::vector<ComplexMatrix> Q;
};

/// A normalized (R(∞) = I) generic rational matrix function realized from
/// pole/zero loci, one admissible semiresidual pair and its coupling matrix.
class GenericRatFn {
public:
    /// Solves the variant's Lyapunov equation for the coupling matrix S and
    /// realizes R. Throws NotAdmissible when cond(S) ≥ cond_max.
    static GenericRatFn build(PoleZeroLoci loci, SemiresidualPair pair, Variant variant, double cond_max = kCondMax);

    /// Takes S as given without checking the Lyapunov equation. Meant for
    /// negative controls and for reloading stored certificates; S must still be
    /// invertible (SingularMatrix otherwise).
    static GenericRatFn assemble_unchecked(PoleZeroLoci loci, SemiresidualPair pair, Variant variant,
                                           ComplexMatrix coupling);

    [[nodiscard]] const PoleZeroLoci& loci() const noexcept { return loci_; }
    [[nodiscard]] const SemiresidualPair& pair() const noexcept { return pair_; }
    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] const ComplexMatrix& coupling() const noexcept { return s_; }
    [[nodiscard]] const ComplexMatrix& coupling_inverse() const noexcept { return s_inv_; }
    [[nodiscard]] double cond_coupling() const noexcept { return cond_s_; }
    [[nodiscard]] std::size_t m() const noexcept { return pair_.m(); }
    [[nodiscard]] std::size_t n() const noexcept { return pair_.n(); }

    /// R(z). Throws AtPole within dist_eps of a pole locus.
    [[nodiscard]] ComplexMatrix eval(Complex z) const;
    /// R⁻¹(w) by the closed separate representation. Throws AtZero near a zero locus.
    [[nodiscard]] ComplexMatrix eval_inverse(Complex w) const;
    /// R(z)·R⁻¹(w) = I + (z−w)·F_P(zI−A_P)⁻¹S_ZP⁻¹(wI−A_Z)⁻¹G_Z.
    [[nodiscard]] ComplexMatrix joint_eval(Complex z, Complex w) const;
    /// R'(z)R⁻¹(z). Throws AtSingularity near any locus.
    [[nodiscard]] ComplexMatrix log_derivative(Complex z) const;
    /// Closed-form residues of R, R⁻¹ and R'R⁻¹.
    [[nodiscard]] ResidueSet residues() const;

    /// The equivalent data in ZP coordinates: F_P, S_ZP, G_Z.
    struct ZpData {
        ComplexMatrix F_P;
        ComplexMatrix S_ZP;
        ComplexMatrix G_Z;
    };
    [[nodiscard]] ZpData zp_data() const;

    /// Relative residual of the variant's Lyapunov equation for the stored S.
    [[nodiscard]] double lyapunov_residual() const;

private:
    GenericRatFn(PoleZeroLoci loci, SemiresidualPair pair, Variant variant, ComplexMatrix s);

    void require_off_poles(Complex z) const;
    void require_off_zeros(Complex z) const;

    PoleZeroLoci loci_;
    SemiresidualPair pair_;
    Variant variant_;
    ComplexMatrix s_;
    ComplexMatrix s_inv_;
    ComplexMatrix f_s_inv_;  // F·S⁻¹
    ComplexMatrix s_inv_g_;  // S⁻¹·G
    double cond_s_ = 0.0;
};

[[nodiscard]] inline GenericRatFn build(PoleZeroLoci loci, SemiresidualPair pair, Variant variant,
                                        double cond_max = kCondMax) {
    return GenericRatFn::build(std::move(loci), std::move(pair), variant, cond_max);
}

/// Global relations among the residues and coupling data of R. Every check
/// is a relative residual compared against `tol` except the rank count.
[[nodiscard]] VerificationReport structural_checks(const GenericRatFn& r, double tol = 1e-9);

/// Integrates Y' = Q_R(z)·Y once around the circle |z − t_k| = ρ with
/// ρ = 0.25·isolation(k), starting from R(z₀), by classical RK4; returns the
/// relative deviation ‖Y(end) − R(z₀)‖/‖R(z₀)‖.
[[nodiscard]] double monodromy_loop(const GenericRatFn& r, std::size_t k, std::size_t steps);

/// Same loop around an arbitrary circle (which must avoid every locus).
[[nodiscard]] double monodromy_loop_about(const GenericRatFn& r, Complex center, double radius, std::size_t steps);

}  // namespace schlesinger
