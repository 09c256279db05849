#include "schlesinger/family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "schlesinger/error.hpp"
#include "schlesinger/singularity.hpp"

namespace schlesinger {

namespace {

PoleZeroLoci shifted(const PoleZeroLoci& t, std::size_t i, Complex delta) {
    std::vector<Complex> v(t.values().begin(), t.values().end());
    v[i] += delta;
    return PoleZeroLoci(std::move(v));
}

DiagSpectrum reciprocal_shift(Complex z, const DiagSpectrum& nodes) {
    std::vector<Complex> out(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = 1.0 / (z - nodes[k]);
    return DiagSpectrum(std::move(out));
}

double unit_floor(double x) { return std::max(1.0, x); }

// Q_k(t ± step) differences in one direction.
std::vector<ComplexMatrix> central_q(const FamilyHandle& h, const PoleZeroLoci& t, std::size_t l, Complex step) {
    const auto plus = schlesinger_state(h, shifted(t, l, step)).Q;
    const auto minus = schlesinger_state(h, shifted(t, l, -step)).Q;
    std::vector<ComplexMatrix> d;
    d.reserve(plus.size());
    for (std::size_t k = 0; k < plus.size(); ++k) d.push_back((1.0 / (2.0 * step)) * (plus[k] - minus[k]));
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------

FamilyHandle::FamilyHandle(SemiresidualPair pair) : pair_(std::move(pair)), gf_(pair_.G() * pair_.F()) {
    admissible_ = !is_frobenius_singular(gf_, numerical_zero_eps(gf_));
}

FamilyHandle make_family(ComplexMatrix f, ComplexMatrix g) {
    return FamilyHandle(SemiresidualPair(std::move(f), std::move(g)));
}

ComplexMatrix coupling_at(const FamilyHandle& h, const PoleZeroLoci& t, Variant which) {
    const std::size_t n = h.n();
    if (t.n() != n) throw Error(ErrorCode::InvalidInput, "loci count does not match the family");
    ComplexMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex d = which == Variant::PZ ? t.pole(i) - t.zero(j) : t.zero(i) - t.pole(j);
            if (std::abs(d) < t.dist_eps()) throw Error(ErrorCode::SpectraCollide, "pole and zero loci coincide");
            s(i, j) = h.GF()(i, j) / d;
        }
    return s;
}

FamilyPoint::FamilyPoint(const FamilyHandle& h, PoleZeroLoci t, double cond_max)
    : pair_(h.pair()), t_(std::move(t)) {
    if (!h.admissible()) throw Error(ErrorCode::NotAdmissible, "G·F is Frobenius-singular");
    s_ = coupling_at(h, t_, Variant::PZ);
    const LuFactor lu(s_);
    if (lu.singular()) throw Error(ErrorCode::NearSingularSet, "S_PZ(t) is singular");
    s_inv_ = lu.inverse();
    cond_ = s_.norm1() * s_inv_.norm1();
    if (!(cond_ < cond_max)) {
        throw Error(ErrorCode::NearSingularSet, "cond S_PZ(t) = " + std::to_string(cond_));
    }
    tau_ = lu.det();
}

ComplexMatrix FamilyPoint::eval(Complex z) const {
    for (std::size_t k = 0; k < t_.n(); ++k)
        if (std::abs(z - t_.pole(k)) < t_.dist_eps()) {
            throw Error(ErrorCode::AtPole, "z is at pole t_" + std::to_string(k + 1));
        }
    return ComplexMatrix::identity(pair_.m()) + pair_.F() * s_inv_ * scale_rows(reciprocal_shift(z, t_.poles()), pair_.G());
}

ComplexMatrix FamilyPoint::eval_inverse(Complex w) const {
    for (std::size_t k = 0; k < t_.n(); ++k)
        if (std::abs(w - t_.zero(k)) < t_.dist_eps()) {
            throw Error(ErrorCode::AtZero, "w is at zero t_" + std::to_string(t_.n() + k + 1));
        }
    return ComplexMatrix::identity(pair_.m()) - pair_.F() * scale_rows(reciprocal_shift(w, t_.zeros()), s_inv_ * pair_.G());
}

SchlesingerState FamilyPoint::state() const {
    const std::size_t n = t_.n();
    const ComplexMatrix f_s_inv = pair_.F() * s_inv_;
    const ComplexMatrix s_inv_g = s_inv_ * pair_.G();
    SchlesingerState out;
    out.Q.reserve(2 * n);
    // Q_k = −F·S⁻¹·I_[k]·S·(t_k − A_Z)⁻¹·S⁻¹G at a pole,
    // Q_{n+k} = −F·S⁻¹(t_{n+k} − A_P)⁻¹·S·I_[k]·S⁻¹G at a zero.
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix row = scale_cols(s_.row(k), reciprocal_shift(t_.pole(k), t_.zeros())) * s_inv_g;
        out.Q.push_back(-(f_s_inv.column(k) * row));
    }
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix col = scale_cols(f_s_inv, reciprocal_shift(t_.zero(k), t_.poles())) * s_.column(k);
        out.Q.push_back(-(col * s_inv_g.row(k)));
    }
    out.V = -(f_s_inv * pair_.G());
    out.tau = tau_;
    return out;
}

ComplexMatrix family_eval(const FamilyHandle& h, const PoleZeroLoci& t, Complex z) { return FamilyPoint(h, t).eval(z); }

SchlesingerState schlesinger_state(const FamilyHandle& h, const PoleZeroLoci& t) { return FamilyPoint(h, t).state(); }

double default_fd_step(const PoleZeroLoci& t) { return 1e-5 * (1.0 + t.max_abs()); }

// ---------------------------------------------------------------------------

SchlesingerResidual schlesinger_residual(const FamilyHandle& h, const PoleZeroLoci& t, double step) {
    const auto q = schlesinger_state(h, t).Q;
    const std::size_t count = q.size();
    SchlesingerResidual out;
    for (std::size_t l = 0; l < count; ++l) {
        const auto d = central_q(h, t, l, step);
        const auto d_im = central_q(h, t, l, Complex(0.0, step));
        for (std::size_t k = 0; k < count; ++k) {
            ComplexMatrix expected = ComplexMatrix::zeros(h.m(), h.m());
            if (k != l) {
                expected = (1.0 / (t[l] - t[k])) * commutator(q[l], q[k]);
            } else {
                for (std::size_t j = 0; j < count; ++j)
                    if (j != k) expected += (1.0 / (t[k] - t[j])) * commutator(q[j], q[k]);
            }
            out.pde_abs = std::max(out.pde_abs, (d[k] - expected).frobenius_norm());
            out.cauchy_riemann = std::max(out.cauchy_riemann, (d[k] - d_im[k]).frobenius_norm());
        }
    }
    double q_max = 1.0;
    for (const auto& qk : q) q_max = std::max(q_max, qk.frobenius_norm());
    out.scale = q_max * q_max;
    out.pde = out.pde_abs / out.scale;
    out.cauchy_riemann /= out.scale;
    return out;
}

PotentialResidual potential_check(const FamilyHandle& h, const PoleZeroLoci& t, double step) {
    const FamilyPoint point(h, t);
    const SchlesingerState st = point.state();
    PotentialResidual out;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const ComplexMatrix plus = schlesinger_state(h, shifted(t, k, step)).V;
        const ComplexMatrix minus = schlesinger_state(h, shifted(t, k, -step)).V;
        const ComplexMatrix dv = (1.0 / (2.0 * step)) * (plus - minus);
        out.gradient_abs = std::max(out.gradient_abs, (dv - st.Q[k]).frobenius_norm());
    }
    double q_max = 1.0;
    for (const auto& qk : st.Q) q_max = std::max(q_max, qk.frobenius_norm());
    out.gradient = out.gradient_abs / q_max;

    // z(R(z) − I) = −V + c/z + O(z⁻²): two samples cancel the c/z term.
    const ComplexMatrix id = ComplexMatrix::identity(h.m());
    const Complex z1 = std::polar(1e4, 0.37);
    const Complex z2 = std::polar(1e6, 0.37);
    const ComplexMatrix c1 = z1 * (point.eval(z1) - id);
    const ComplexMatrix c2 = z2 * (point.eval(z2) - id);
    const ComplexMatrix limit = (1.0 / (z2 - z1)) * (z2 * c2 - z1 * c1);
    out.asymptotic = (st.V + limit).frobenius_norm() / unit_floor(st.V.frobenius_norm());
    return out;
}

ComplexMatrix coupling_derivative(const FamilyHandle& h, const PoleZeroLoci& t, std::size_t i) {
    const std::size_t n = h.n();
    if (i >= 2 * n) throw Error(ErrorCode::InvalidInput, "locus index out of range");
    ComplexMatrix d(n, n);
    if (i < n) {
        for (std::size_t j = 0; j < n; ++j) d(i, j) = -h.GF()(i, j) / std::pow(t.pole(i) - t.zero(j), 2);
    } else {
        const std::size_t b = i - n;
        for (std::size_t j = 0; j < n; ++j) d(j, b) = h.GF()(j, b) / std::pow(t.pole(j) - t.zero(b), 2);
    }
    return d;
}

namespace {

// Σ_{j≠i} tr(Q_iQ_j)/(t_i − t_j)
Complex tau_rhs(const std::vector<ComplexMatrix>& q, const PoleZeroLoci& t, std::size_t i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j)
        if (j != i) s += (q[i] * q[j]).trace() / (t[i] - t[j]);
    return s;
}

}  // namespace

TauResidual tau_logderiv_check(const FamilyHandle& h, const PoleZeroLoci& t, double step) {
    const FamilyPoint point(h, t);
    const auto q = point.state().Q;
    TauResidual out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Complex rhs = tau_rhs(q, t, i);
        const double scale = unit_floor(std::abs(rhs));
        const ComplexMatrix ds = coupling_derivative(h, t, i);
        const Complex jacobi = (point.coupling_inverse() * ds).trace();
        out.jacobi_vs_rhs = std::max(out.jacobi_vs_rhs, std::abs(jacobi - rhs) / scale);

        const FamilyPoint plus(h, shifted(t, i, step));
        const FamilyPoint minus(h, shifted(t, i, -step));
        const Complex fd = std::log(plus.tau() / minus.tau()) / (2.0 * step);
        out.fd_vs_rhs = std::max(out.fd_vs_rhs, std::abs(fd - rhs) / scale);

        const ComplexMatrix ds_fd = (1.0 / (2.0 * step)) * (plus.coupling() - minus.coupling());
        out.dS_closed_vs_fd =
            std::max(out.dS_closed_vs_fd, (ds - ds_fd).frobenius_norm() / unit_floor(ds.frobenius_norm()));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxBisections = 20;

struct PathIntegrand {
    const FamilyHandle& h;
    const PoleZeroLoci& t0;
    std::vector<Complex> dt;

    PoleZeroLoci at(double s) const {
        std::vector<Complex> v(t0.values().begin(), t0.values().end());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * dt[i];
        return PoleZeroLoci(std::move(v));
    }

    // d log τ/ds at s, together with the node record.
    std::pair<Complex, TauPathNode> operator()(double s) const {
        try {
            const PoleZeroLoci t = at(s);
            const FamilyPoint p(h, t, kPathCondMax);
            const auto q = p.state().Q;
            Complex sum = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i)
                if (dt[i] != Complex{}) sum += tau_rhs(q, t, i) * dt[i];
            return {sum, TauPathNode{s, p.tau(), p.cond()}};
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NearSingularSet || e.code() == ErrorCode::SpectraCollide) {
                throw Error(ErrorCode::PathHitsSingularSet, "at s = " + std::to_string(s) + ": " + e.what());
            }
            throw;
        }
    }
};

Complex integrate_interval(const PathIntegrand& f, double sa, double sb, Complex fa, Complex fb,
                           const TauPathNode& node_a, const TauPathNode& node_b, int depth,
                           std::vector<TauPathNode>& nodes) {
    const Complex inc = 0.5 * (sb - sa) * (fa + fb);
    // The increment must follow the phase of det S itself; a zero of τ between
    // the nodes shows up as a mismatch of about π.
    const double drift = std::abs(std::arg(node_b.tau / node_a.tau * std::exp(-inc)));
    if (std::abs(inc.imag()) > 0.5 * std::numbers::pi || drift > 0.5 * std::numbers::pi) {
        if (depth == 0) {
            throw Error(ErrorCode::PathHitsSingularSet, "phase of τ cannot be followed near s = " + std::to_string(sa));
        }
        const double sm = 0.5 * (sa + sb);
        const auto [fm, node_m] = f(sm);
        return integrate_interval(f, sa, sm, fa, fm, node_a, node_m, depth - 1, nodes) +
               integrate_interval(f, sm, sb, fm, fb, node_m, node_b, depth - 1, nodes);
    }
    nodes.push_back(node_b);
    return inc;
}

}  // namespace

TauPathResult tau_path_integral(const FamilyHandle& h, const PoleZeroLoci& t0, const PoleZeroLoci& t1,
                                std::size_t steps) {
    if (t0.n() != h.n() || t1.n() != h.n()) throw Error(ErrorCode::InvalidInput, "loci count does not match the family");
    if (steps == 0) throw Error(ErrorCode::InvalidInput, "tau path needs at least one step");
    PathIntegrand f{h, t0, {}};
    f.dt.resize(t0.size());
    for (std::size_t i = 0; i < t0.size(); ++i) f.dt[i] = t1[i] - t0[i];

    TauPathResult out;
    auto [fa, node_a] = f(0.0);
    out.nodes.push_back(node_a);
    out.tau_start = node_a.tau;

    Complex log_ratio = 0.0;
    if (t0 != t1) {
        for (std::size_t k = 0; k < steps; ++k) {
            const double sa = static_cast<double>(k) / static_cast<double>(steps);
            const double sb = static_cast<double>(k + 1) / static_cast<double>(steps);
            const auto [fb, node_b] = f(sb);
            log_ratio += integrate_interval(f, sa, sb, fa, fb, node_a, node_b, kMaxBisections, out.nodes);
            fa = fb;
            node_a = node_b;
        }
    }
    out.tau_integral = out.tau_start * std::exp(log_ratio);
    out.tau_direct = out.nodes.back().tau;
    out.rel_error = std::abs(out.tau_integral - out.tau_direct) / std::abs(out.tau_direct);
    return out;
}

RefinedTauPath tau_path_integral_refined(const FamilyHandle& h, const PoleZeroLoci& t0, const PoleZeroLoci& t1,
                                         std::size_t initial_steps, double est_tol, std::size_t max_steps) {
    RefinedTauPath out;
    out.steps = std::max<std::size_t>(initial_steps, 1);
    out.result = tau_path_integral(h, t0, t1, out.steps);
    if (t0 == t1) return out;
    do {
        TauPathResult finer = tau_path_integral(h, t0, t1, 2 * out.steps);
        out.estimated_error =
            std::abs(finer.tau_integral - out.result.tau_integral) / (3.0 * std::abs(finer.tau_integral));
        out.result = std::move(finer);
        out.steps *= 2;
    } while (out.estimated_error > est_tol && 2 * out.steps <= max_steps);
    return out;
}

// ---------------------------------------------------------------------------

double isoprincipal_check(const FamilyHandle& h, const PoleZeroLoci& t_a, const PoleZeroLoci& t_b) {
    const FamilyPoint a(h, t_a);
    const FamilyPoint b(h, t_b);
    const std::array<int, 1> order{-1};

    auto projector = [&](const FamilyPoint& p, std::size_t k) {
        const auto& t = p.loci();
        const bool pole = k < t.n();
        const MatrixFunction f = pole ? MatrixFunction([&](Complex z) { return p.eval(z); })
                                      : MatrixFunction([&](Complex z) { return p.eval_inverse(z); });
        const ComplexMatrix residue = laurent_coeffs(f, t[k], 0.25 * t.isolation(k), order).front();
        const RankOneFactors fg = semiresidues(residue);
        return pole ? principal_factor_from_semiresidue(SingularityKind::Pole, fg.g).L()
                    : principal_factor_from_semiresidue(SingularityKind::Zero, fg.f).L();
    };

    double mismatch = 0.0;
    for (std::size_t k = 0; k < t_a.size(); ++k)
        mismatch = std::max(mismatch, (projector(a, k) - projector(b, k)).frobenius_norm());
    return mismatch;
}

}  // namespace schlesinger
