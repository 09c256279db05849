#include "schlesinger/singularity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "schlesinger/error.hpp"

namespace schlesinger {

namespace {

std::optional<std::size_t> locus_index(const GenericRatFn& r, Complex t) {
    const auto& loci = r.loci();
    for (std::size_t k = 0; k < loci.size(); ++k)
        if (std::abs(t - loci[k]) < loci.dist_eps()) return k;
    return std::nullopt;
}

double local_radius(const GenericRatFn& r, std::size_t k) { return 0.25 * r.loci().isolation(k); }

double unit_floor(double x) { return std::max(1.0, x); }

}  // namespace

std::vector<ComplexMatrix> laurent_coeffs(const MatrixFunction& f, Complex t, double radius,
                                          std::span<const int> orders, std::size_t quad_points) {
    if (!(radius > 0.0) || quad_points == 0) throw Error(ErrorCode::InvalidInput, "laurent_coeffs needs radius > 0");
    std::vector<ComplexMatrix> out;
    const double n = static_cast<double>(quad_points);
    for (std::size_t j = 0; j < quad_points; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
        const Complex u = std::polar(radius, theta);
        const ComplexMatrix value = f(t + u);
        if (out.empty()) out.assign(orders.size(), ComplexMatrix::zeros(value.rows(), value.cols()));
        for (std::size_t o = 0; o < orders.size(); ++o) out[o] += (std::pow(u, -orders[o]) / n) * value;
    }
    return out;
}

SingularityKind classify_point(const GenericRatFn& r, Complex t) {
    const auto k = locus_index(r, t);
    if (!k) return SingularityKind::Regular;
    return *k < r.n() ? SingularityKind::Pole : SingularityKind::Zero;
}

LocalData local_data(const GenericRatFn& r, Complex t, double tol_local) {
    const auto k = locus_index(r, t);
    if (!k) throw Error(ErrorCode::InvalidInput, "local data requested at a regular point");
    LocalData d;
    d.point = r.loci()[*k];
    d.kind = *k < r.n() ? SingularityKind::Pole : SingularityKind::Zero;
    const bool pole = d.kind == SingularityKind::Pole;
    const double rho = local_radius(r, *k);

    const std::array<int, 1> residue_order{-1};
    const MatrixFunction rf = pole ? MatrixFunction([&](Complex z) { return r.eval(z); })
                                   : MatrixFunction([&](Complex z) { return r.eval_inverse(z); });
    d.residue_R = laurent_coeffs(rf, d.point, rho, residue_order).front();

    const std::array<int, 2> log_orders{-1, 0};
    const auto q = laurent_coeffs([&](Complex z) { return r.log_derivative(z); }, d.point, rho, log_orders);
    d.Q_t = q[0];
    d.C_t = q[1];

    const ComplexMatrix& Q = d.Q_t;
    const ComplexMatrix& C = d.C_t;
    const double qn = unit_floor(Q.frobenius_norm());
    const double cn = unit_floor(C.frobenius_norm());
    const double square = (Q * Q + (pole ? Q : -Q)).frobenius_norm() / (qn * qn);
    const double constant = (pole ? Q * C * Q + C * Q : Q * C * Q - Q * C).frobenius_norm() / (qn * qn * cn);
    d.relation_residual = std::max(square, constant);

    // Image of Q equals that of the pole residue; kernels agree at a zero.
    const ComplexMatrix& Rt = d.residue_R;
    const double rn = unit_floor(Rt.frobenius_norm());
    d.alignment_residual = (pole ? Q * Rt + Rt : Rt * Q - Rt).frobenius_norm() / (qn * rn);
    const bool ranks_agree = numerical_rank(Q) == numerical_rank(Rt);

    if (!(d.relation_residual <= tol_local) || !(d.alignment_residual <= tol_local) || !ranks_agree) {
        throw Error(ErrorCode::RelationViolation,
                    "local relations fail at t_" + std::to_string(*k + 1) + " (relation " +
                        std::to_string(d.relation_residual) + ", alignment " + std::to_string(d.alignment_residual) +
                        ")");
    }
    return d;
}

RankOneFactors semiresidues(const ComplexMatrix& residue, double rank_eps) { return rank_one_factor(residue, rank_eps); }

// ---------------------------------------------------------------------------

PrincipalFactor::PrincipalFactor(SingularityKind kind, ComplexMatrix l) : kind_(kind), l_(std::move(l)) {
    if (kind_ == SingularityKind::Regular) throw Error(ErrorCode::InvalidInput, "no principal factor at a regular point");
    if (!l_.is_square()) throw Error(ErrorCode::InvalidInput, "principal factor L must be square");
}

ComplexMatrix PrincipalFactor::value(Complex zeta) const {
    if (zeta == Complex{}) throw Error(ErrorCode::InvalidInput, "principal factor evaluated at 0");
    const ComplexMatrix id = ComplexMatrix::identity(l_.rows());
    return kind_ == SingularityKind::Pole ? id + l_ - (1.0 / zeta) * l_ : id - l_ + zeta * l_;
}

ComplexMatrix PrincipalFactor::inverse(Complex zeta) const {
    if (zeta == Complex{}) throw Error(ErrorCode::InvalidInput, "principal factor evaluated at 0");
    const ComplexMatrix id = ComplexMatrix::identity(l_.rows());
    return kind_ == SingularityKind::Pole ? id + l_ - zeta * l_ : id - l_ + (1.0 / zeta) * l_;
}

double PrincipalFactor::idempotency_residual() const {
    return (l_ * l_ + (kind_ == SingularityKind::Pole ? l_ : -l_)).frobenius_norm();
}

PrincipalFactor principal_factor_from_semiresidue(SingularityKind kind, const ComplexMatrix& v) {
    if (kind == SingularityKind::Regular) throw Error(ErrorCode::InvalidInput, "no principal factor at a regular point");
    if (v.rows() != 1 && v.cols() != 1) throw Error(ErrorCode::InvalidInput, "semiresidue must be a vector");
    if (v.max_abs() == 0.0) throw Error(ErrorCode::ZeroVector, "semiresidue vanishes");
    const ComplexMatrix col = v.cols() == 1 ? v : v.transpose();
    const double norm2 = std::pow(col.frobenius_norm(), 2);
    if (kind == SingularityKind::Pole) {
        const ComplexMatrix g = col.transpose();
        return {kind, (-1.0 / norm2) * (g.adjoint() * g)};
    }
    return {kind, (1.0 / norm2) * (col * col.adjoint())};
}

PrincipalFactor principal_factor_at(const GenericRatFn& r, Complex t) {
    const LocalData d = local_data(r, t);
    const RankOneFactors fg = semiresidues(d.residue_R);
    return d.kind == SingularityKind::Pole ? principal_factor_from_semiresidue(d.kind, fg.g)
                                           : principal_factor_from_semiresidue(d.kind, fg.f);
}

VerificationReport verify_regular_factor(const GenericRatFn& r, const PrincipalFactor& e, Complex t,
                                         double tol_local) {
    const auto k = locus_index(r, t);
    if (!k) throw Error(ErrorCode::InvalidInput, "regular factor requested at a regular point");
    const Complex point = r.loci()[*k];
    const double rho = local_radius(r, *k);
    const std::size_t m = r.m();

    const std::array<int, 2> orders{-1, 0};
    const auto h = laurent_coeffs([&](Complex z) { return r.eval(z) * e.inverse(z - point); }, point, rho, orders);
    const auto h_inv =
        laurent_coeffs([&](Complex z) { return e.value(z - point) * r.eval_inverse(z); }, point, rho, orders);

    const double scale = unit_floor(h[1].max_abs());
    const double scale_inv = unit_floor(h_inv[1].max_abs());
    VerificationReport report;
    report.add("regular_residue", h[0].frobenius_norm() / scale, tol_local);
    const double inv_eps = 1e-10 * std::pow(scale, static_cast<double>(m));
    const double det_h = std::abs(det(h[1]));
    report.add_flag("regular_invertible", det_h >= inv_eps, det_h, inv_eps);
    report.add("regular_inverse_residue", h_inv[0].frobenius_norm() / scale_inv, tol_local);
    return report;
}

}  // namespace schlesinger
