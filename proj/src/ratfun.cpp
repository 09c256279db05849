#include "schlesinger/ratfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "schlesinger/error.hpp"

namespace schlesinger {

// ---------------------------------------------------------------------------
// PoleZeroLoci

PoleZeroLoci::PoleZeroLoci(std::vector<Complex> t) : t_(std::move(t)) {
    if (t_.empty() || t_.size() % 2 != 0) {
        throw Error(ErrorCode::InvalidInput, "loci must hold 2n points, n >= 1");
    }
    for (const auto& v : t_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorCode::InvalidInput, "non-finite locus");
        }
    }
    const double eps = dist_eps();
    for (std::size_t i = 0; i < t_.size(); ++i)
        for (std::size_t j = i + 1; j < t_.size(); ++j)
            if (std::abs(t_[i] - t_[j]) < eps) {
                throw Error(ErrorCode::SpectraCollide,
                            "loci t_" + std::to_string(i + 1) + " and t_" + std::to_string(j + 1) + " coincide");
            }
}

DiagSpectrum PoleZeroLoci::poles() const { return DiagSpectrum({t_.begin(), t_.begin() + static_cast<long>(n())}); }

DiagSpectrum PoleZeroLoci::zeros() const { return DiagSpectrum({t_.begin() + static_cast<long>(n()), t_.end()}); }

double PoleZeroLoci::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : t_) m = std::max(m, std::abs(v));
    return m;
}

double PoleZeroLoci::dist_eps() const noexcept { return 1e-8 * (1.0 + max_abs()); }

double PoleZeroLoci::min_separation() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_.size(); ++i)
        for (std::size_t j = i + 1; j < t_.size(); ++j) best = std::min(best, std::abs(t_[i] - t_[j]));
    return best;
}

double PoleZeroLoci::isolation(std::size_t k) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < t_.size(); ++j)
        if (j != k) best = std::min(best, std::abs(t_[k] - t_[j]));
    return best;
}

PoleZeroLoci PoleZeroLoci::swapped() const {
    std::vector<Complex> s(t_.size());
    for (std::size_t k = 0; k < n(); ++k) {
        s[k] = t_[n() + k];
        s[n() + k] = t_[k];
    }
    return PoleZeroLoci(std::move(s));
}

// ---------------------------------------------------------------------------
// SemiresidualPair

SemiresidualPair::SemiresidualPair(ComplexMatrix f, ComplexMatrix g) : f_(std::move(f)), g_(std::move(g)) {
    if (f_.rows() == 0 || f_.cols() == 0 || g_.rows() != f_.cols() || g_.cols() != f_.rows()) {
        throw Error(ErrorCode::InvalidInput, "F must be m×n and G n×m");
    }
    if (!f_.all_finite() || !g_.all_finite()) throw Error(ErrorCode::InvalidInput, "non-finite semiresidual data");
    const double col_eps = 1e-13 * std::max({1.0, f_.max_abs(), g_.max_abs()});
    for (std::size_t j = 0; j < f_.cols(); ++j)
        if (f_.column(j).frobenius_norm() < col_eps) {
            throw Error(ErrorCode::InvalidInput, "F has a zero column " + std::to_string(j + 1));
        }
    for (std::size_t i = 0; i < g_.rows(); ++i)
        if (g_.row(i).frobenius_norm() < col_eps) {
            throw Error(ErrorCode::InvalidInput, "G has a zero row " + std::to_string(i + 1));
        }
}

// ---------------------------------------------------------------------------
// GenericRatFn

namespace {

// I + sign·Σ_k left[:,k]·right[k,:] / (z − nodes_k)
ComplexMatrix identity_plus_resolvent(const ComplexMatrix& left, const ComplexMatrix& right, double sign,
                                      const DiagSpectrum& nodes, Complex z) {
    ComplexMatrix out = ComplexMatrix::identity(left.rows());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Complex w = sign / (z - nodes[k]);
        for (std::size_t i = 0; i < left.rows(); ++i) {
            const Complex a = left(i, k) * w;
            for (std::size_t j = 0; j < right.cols(); ++j) out(i, j) += a * right(k, j);
        }
    }
    return out;
}

DiagSpectrum reciprocal_shift(Complex z, const DiagSpectrum& nodes) {
    std::vector<Complex> out(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = 1.0 / (z - nodes[k]);
    return DiagSpectrum(std::move(out));
}

ComplexMatrix outer(const ComplexMatrix& col, const ComplexMatrix& row) { return col * row; }

}  // namespace

GenericRatFn::GenericRatFn(PoleZeroLoci loci, SemiresidualPair pair, Variant variant, ComplexMatrix s)
    : loci_(std::move(loci)), pair_(std::move(pair)), variant_(variant), s_(std::move(s)) {
    if (loci_.n() != pair_.n()) throw Error(ErrorCode::InvalidInput, "loci count does not match F, G");
    if (s_.rows() != pair_.n() || s_.cols() != pair_.n()) throw Error(ErrorCode::InvalidInput, "coupling shape");
    const LuFactor lu(s_);
    s_inv_ = lu.inverse();
    cond_s_ = s_.norm1() * s_inv_.norm1();
    f_s_inv_ = pair_.F() * s_inv_;
    s_inv_g_ = s_inv_ * pair_.G();
}

GenericRatFn GenericRatFn::build(PoleZeroLoci loci, SemiresidualPair pair, Variant variant, double cond_max) {
    if (loci.n() != pair.n()) throw Error(ErrorCode::InvalidInput, "loci count does not match F, G");
    const ComplexMatrix gf = pair.G() * pair.F();
    const ComplexMatrix s = variant == Variant::ZP ? solve_lyapunov_diag(loci.zeros(), loci.poles(), gf)
                                                   : solve_lyapunov_diag(loci.poles(), loci.zeros(), gf);
    const double cond = cond_estimate(s);
    if (!(cond < cond_max)) {
        throw Error(ErrorCode::NotAdmissible, "coupling matrix is not invertible (cond " + std::to_string(cond) + ")");
    }
    GenericRatFn r(std::move(loci), std::move(pair), variant, s);

    // The closed inverse must agree with a direct inversion away from the loci.
    const Complex probe = std::polar(1.0 + 2.0 * r.loci_.max_abs(), 0.7);
    const ComplexMatrix direct = inverse(r.eval(probe));
    const double mismatch = (direct - r.eval_inverse(probe)).frobenius_norm() / direct.frobenius_norm();
    if (!(mismatch <= std::max(1e-8, 1e-14 * cond))) {
        throw Error(ErrorCode::RelationViolation, "closed-form inverse disagrees with LU inversion");
    }
    return r;
}

GenericRatFn GenericRatFn::assemble_unchecked(PoleZeroLoci loci, SemiresidualPair pair, Variant variant,
                                              ComplexMatrix coupling) {
    return {std::move(loci), std::move(pair), variant, std::move(coupling)};
}

void GenericRatFn::require_off_poles(Complex z) const {
    for (std::size_t k = 0; k < n(); ++k)
        if (std::abs(z - loci_.pole(k)) < loci_.dist_eps()) {
            throw Error(ErrorCode::AtPole, "z is at pole t_" + std::to_string(k + 1));
        }
}

void GenericRatFn::require_off_zeros(Complex z) const {
    for (std::size_t k = 0; k < n(); ++k)
        if (std::abs(z - loci_.zero(k)) < loci_.dist_eps()) {
            throw Error(ErrorCode::AtZero, "w is at zero t_" + std::to_string(n() + k + 1));
        }
}

ComplexMatrix GenericRatFn::eval(Complex z) const {
    require_off_poles(z);
    // ZP: I − F(zI−A_P)⁻¹S⁻¹G        PZ: I + F·S⁻¹(zI−A_P)⁻¹G
    return variant_ == Variant::ZP ? identity_plus_resolvent(pair_.F(), s_inv_g_, -1.0, loci_.poles(), z)
                                   : identity_plus_resolvent(f_s_inv_, pair_.G(), +1.0, loci_.poles(), z);
}

ComplexMatrix GenericRatFn::eval_inverse(Complex w) const {
    require_off_zeros(w);
    // ZP: I + F·S⁻¹(wI−A_Z)⁻¹G       PZ: I − F(wI−A_Z)⁻¹S⁻¹G
    return variant_ == Variant::ZP ? identity_plus_resolvent(f_s_inv_, pair_.G(), +1.0, loci_.zeros(), w)
                                   : identity_plus_resolvent(pair_.F(), s_inv_g_, -1.0, loci_.zeros(), w);
}

GenericRatFn::ZpData GenericRatFn::zp_data() const {
    if (variant_ == Variant::ZP) return {pair_.F(), s_, pair_.G()};
    return {f_s_inv_, s_inv_, -s_inv_g_};
}

ComplexMatrix GenericRatFn::joint_eval(Complex z, Complex w) const {
    require_off_poles(z);
    require_off_zeros(w);
    // S_ZP⁻¹ is S⁻¹ for ZP data and S_PZ itself for PZ data.
    const ComplexMatrix& f_p = variant_ == Variant::ZP ? pair_.F() : f_s_inv_;
    const ComplexMatrix& s_zp_inv = variant_ == Variant::ZP ? s_inv_ : s_;
    const ComplexMatrix g_z = variant_ == Variant::ZP ? pair_.G() : -s_inv_g_;
    const ComplexMatrix middle =
        scale_cols(scale_rows(reciprocal_shift(z, loci_.poles()), s_zp_inv), reciprocal_shift(w, loci_.zeros()));
    return ComplexMatrix::identity(m()) + (z - w) * (f_p * middle * g_z);
}

ComplexMatrix GenericRatFn::log_derivative(Complex z) const {
    for (std::size_t k = 0; k < loci_.size(); ++k)
        if (std::abs(z - loci_[k]) < loci_.dist_eps()) {
            throw Error(ErrorCode::AtSingularity, "z is at locus t_" + std::to_string(k + 1));
        }
    const DiagSpectrum rp = reciprocal_shift(z, loci_.poles());
    const DiagSpectrum rz = reciprocal_shift(z, loci_.zeros());
    if (variant_ == Variant::ZP) {
        // F(zI−A_P)⁻¹S⁻¹(zI−A_Z)⁻¹G
        return pair_.F() * scale_cols(scale_rows(rp, s_inv_), rz) * pair_.G();
    }
    // −F·S⁻¹(zI−A_P)⁻¹S(zI−A_Z)⁻¹S⁻¹G
    return -(f_s_inv_ * scale_cols(scale_rows(rp, s_), rz) * s_inv_g_);
}

ResidueSet GenericRatFn::residues() const {
    const std::size_t nn = n();
    ResidueSet out;
    out.R.reserve(2 * nn);
    out.Q.reserve(2 * nn);

    // Resolvents of diagonal matrices have rank-one residues e_k·e_kᵀ, so each
    // residue is a column of the left factor times a row of the right one.
    const bool zp = variant_ == Variant::ZP;
    for (std::size_t k = 0; k < nn; ++k) {
        out.R.push_back(zp ? -outer(pair_.F().column(k), s_inv_g_.row(k))
                           : outer(f_s_inv_.column(k), pair_.G().row(k)));
    }
    for (std::size_t k = 0; k < nn; ++k) {
        out.R.push_back(zp ? outer(f_s_inv_.column(k), pair_.G().row(k))
                           : -outer(pair_.F().column(k), s_inv_g_.row(k)));
    }

    // Log-derivative as sign·L(zI−A_P)⁻¹M(zI−A_Z)⁻¹N.
    const ComplexMatrix& left = zp ? pair_.F() : f_s_inv_;
    const ComplexMatrix& middle = zp ? s_inv_ : s_;
    const ComplexMatrix& right = zp ? pair_.G() : s_inv_g_;
    const double sign = zp ? 1.0 : -1.0;
    for (std::size_t k = 0; k < nn; ++k) {
        const ComplexMatrix tail = scale_cols(middle, reciprocal_shift(loci_.pole(k), loci_.zeros())) * right;
        out.Q.push_back(sign * outer(left.column(k), tail.row(k)));
    }
    for (std::size_t k = 0; k < nn; ++k) {
        const ComplexMatrix head = left * scale_rows(reciprocal_shift(loci_.zero(k), loci_.poles()), middle);
        out.Q.push_back(sign * outer(head.column(k), right.row(k)));
    }
    return out;
}

double GenericRatFn::lyapunov_residual() const {
    const ComplexMatrix gf = pair_.G() * pair_.F();
    const DiagSpectrum left = variant_ == Variant::ZP ? loci_.zeros() : loci_.poles();
    const DiagSpectrum right = variant_ == Variant::ZP ? loci_.poles() : loci_.zeros();
    const ComplexMatrix res = scale_rows(left, s_) - scale_cols(s_, right) - gf;
    return res.frobenius_norm() / std::max(gf.frobenius_norm(), std::numeric_limits<double>::min());
}

// ---------------------------------------------------------------------------
// Structural checks

VerificationReport structural_checks(const GenericRatFn& r, double tol) {
    VerificationReport report;
    const std::size_t n = r.n();
    const auto& loci = r.loci();
    const ResidueSet res = r.residues();

    report.add("coupling_lyapunov", r.lyapunov_residual(), tol);

    double max_q = 1.0;
    ComplexMatrix sum = ComplexMatrix::zeros(r.m(), r.m());
    for (const auto& q : res.Q) {
        sum += q;
        max_q = std::max(max_q, q.frobenius_norm());
    }
    report.add("residue_sum", sum.frobenius_norm() / max_q, tol);

    double projector = 0.0;
    double constant_term = 0.0;
    for (std::size_t k = 0; k < 2 * n; ++k) {
        const bool pole = k < n;
        const ComplexMatrix& q = res.Q[k];
        const double qn = std::max(1.0, q.frobenius_norm());
        projector = std::max(projector, (q * q + (pole ? q : -q)).frobenius_norm() / (qn * qn));

        ComplexMatrix c = ComplexMatrix::zeros(r.m(), r.m());
        for (std::size_t j = 0; j < 2 * n; ++j)
            if (j != k) c += (1.0 / (loci[k] - loci[j])) * res.Q[j];
        const ComplexMatrix lhs = q * c * q;
        const ComplexMatrix rhs = pole ? -(c * q) : q * c;
        const double scale = qn * qn * std::max(1.0, c.frobenius_norm());
        constant_term = std::max(constant_term, (lhs - rhs).frobenius_norm() / scale);
    }
    report.add("residue_projector", projector, tol);
    report.add("residue_constant_term", constant_term, tol);

    // Semiresidues read back from the residues, in whatever gauge the
    // factorization picks; the relations below are gauge covariant.
    double rank_defect = 0.0;
    for (const auto& rk : res.R) rank_defect = std::max(rank_defect, rank_one_defect(rk));
    report.add("residue_rank_one", rank_defect, tol);

    std::size_t pole_rank = 0;
    std::size_t zero_rank = 0;
    for (std::size_t k = 0; k < 2 * n; ++k) (k < n ? pole_rank : zero_rank) += numerical_rank(res.R[k]);
    report.add_flag("rank_sum", pole_rank == zero_rank && pole_rank == n,
                    std::abs(static_cast<double>(pole_rank) - static_cast<double>(zero_rank)), 0.0);

    if (std::isfinite(rank_defect)) {
        const std::size_t m = r.m();
        ComplexMatrix f_p(m, n), g_p(n, m), f_z(m, n), g_z(n, m);
        for (std::size_t k = 0; k < 2 * n; ++k) {
            auto [f, g] = rank_one_factor(res.R[k], std::numeric_limits<double>::infinity());
            ComplexMatrix& fl = k < n ? f_p : f_z;
            ComplexMatrix& gr = k < n ? g_p : g_z;
            const std::size_t col = k % n;
            for (std::size_t i = 0; i < m; ++i) {
                fl(i, col) = f(i, 0);
                gr(col, i) = g(0, i);
            }
        }
        const ComplexMatrix s_zp = solve_lyapunov_diag(loci.zeros(), loci.poles(), g_z * f_p);
        const ComplexMatrix s_pz = solve_lyapunov_diag(loci.poles(), loci.zeros(), g_p * f_z);
        report.add("coupling_inverse", (s_zp * s_pz - ComplexMatrix::identity(n)).frobenius_norm(), tol);
        const double zpcr_g = (g_z + s_zp * g_p).frobenius_norm() / g_z.frobenius_norm();
        const double zpcr_f = (f_p - f_z * s_zp).frobenius_norm() / f_p.frobenius_norm();
        report.add("coupling_relations", std::max(zpcr_g, zpcr_f), tol);
    } else {
        report.add_flag("coupling_inverse", false, std::numeric_limits<double>::infinity(), tol);
        report.add_flag("coupling_relations", false, std::numeric_limits<double>::infinity(), tol);
    }

    // R(z)·R⁻¹(z) = I at a few points well away from the loci.
    double inverse_product = 0.0;
    const double radius = 1.0 + 2.0 * loci.max_abs();
    for (int j = 0; j < 4; ++j) {
        const Complex z = std::polar(radius, 0.3 + 1.5 * j);
        const ComplexMatrix p = r.eval(z) * r.eval_inverse(z);
        inverse_product = std::max(inverse_product, (p - ComplexMatrix::identity(r.m())).frobenius_norm());
    }
    report.add("inverse_product", inverse_product, tol);
    return report;
}

// ---------------------------------------------------------------------------
// Monodromy

double monodromy_loop_about(const GenericRatFn& r, Complex center, double radius, std::size_t steps) {
    if (steps == 0 || !(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "monodromy loop needs steps and radius");
    // Y(θ) along z = center + ρe^{iθ}: dY/dθ = Q(z)·Y·iρe^{iθ}.
    auto rhs = [&](double theta, const ComplexMatrix& y) {
        const Complex dz = Complex(0.0, radius) * std::polar(1.0, theta);
        return (r.log_derivative(center + std::polar(radius, theta)) * y) * dz;
    };
    const Complex z0 = center + radius;
    const ComplexMatrix start = r.eval(z0);
    ComplexMatrix y = start;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const double theta = h * static_cast<double>(s);
        const ComplexMatrix k1 = rhs(theta, y);
        const ComplexMatrix k2 = rhs(theta + 0.5 * h, y + (0.5 * h) * k1);
        const ComplexMatrix k3 = rhs(theta + 0.5 * h, y + (0.5 * h) * k2);
        const ComplexMatrix k4 = rhs(theta + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return (y - start).frobenius_norm() / start.frobenius_norm();
}

double monodromy_loop(const GenericRatFn& r, std::size_t k, std::size_t steps) {
    if (k >= r.loci().size()) throw Error(ErrorCode::InvalidInput, "singular index out of range");
    return monodromy_loop_about(r, r.loci()[k], 0.25 * r.loci().isolation(k), steps);
}

}  // namespace schlesinger
