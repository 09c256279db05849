#include "schlesinger/commands.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "schlesinger/error.hpp"
#include "schlesinger/family.hpp"
#include "schlesinger/singularity.hpp"

namespace schlesinger {

namespace {

using Json = nlohmann::ordered_json;

bool is_refusal(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput:
        case ErrorCode::SpectraCollide:
        case ErrorCode::NotAdmissible:
        case ErrorCode::NearSingularSet:
        case ErrorCode::PathHitsSingularSet:
            return true;
        default:
            return false;
    }
}

std::string shortest(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x + 0.0);
    return {buf.data(), res.ptr};
}

std::string locus_tag(std::size_t k) { return "t" + std::to_string(k + 1); }

double certificate_residual(const ProblemFile& p, const PoleZeroLoci& t, const ComplexMatrix& gf) {
    const ComplexMatrix& s = *p.S_PZ;
    const ComplexMatrix res = scale_rows(t.poles(), s) - scale_cols(s, t.zeros()) - gf;
    return res.frobenius_norm() / std::max(gf.frobenius_norm(), std::numeric_limits<double>::min());
}

// A nearby point for the path and isoprincipal checks; the offsets are fixed
// so that reports are reproducible.
struct Companion {
    PoleZeroLoci t;
    RefinedTauPath path;
};

std::optional<Companion> find_companion(const FamilyHandle& h, const PoleZeroLoci& t, const VerifyOptions& opts) {
    for (const double scale : {0.1, 0.05, 0.025}) {
        std::vector<Complex> v(t.values().begin(), t.values().end());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += std::polar(scale, 0.7 + 1.3 * static_cast<double>(k));
        try {
            PoleZeroLoci tb(std::move(v));
            RefinedTauPath path =
                tau_path_integral_refined(h, t, tb, opts.tau_steps, 0.1 * opts.tol, opts.max_tau_steps);
            return Companion{std::move(tb), std::move(path)};
        } catch (const Error& e) {
            if (!is_refusal(e.code())) throw;
        }
    }
    return std::nullopt;
}

void local_checks(const GenericRatFn& r, std::size_t k, const VerifyOptions& opts, VerificationReport& rep) {
    const std::string tag = "local." + locus_tag(k) + ".";
    const Complex t = r.loci()[k];
    try {
        const LocalData d = local_data(r, t, std::numeric_limits<double>::infinity());
        rep.add(tag + "relations", d.relation_residual, opts.tol);
        rep.add(tag + "alignment", d.alignment_residual, opts.tol);
        const RankOneFactors fg = semiresidues(d.residue_R);
        const PrincipalFactor e =
            principal_factor_from_semiresidue(d.kind, d.kind == SingularityKind::Pole ? fg.g : fg.f);
        rep.add(tag + "principal_idempotent", e.idempotency_residual(), opts.tol);
        rep.append(verify_regular_factor(r, e, t, opts.tol), tag);
    } catch (const Error& e) {
        rep.add_flag(tag + "relations", false, std::numeric_limits<double>::infinity(), opts.tol);
    }
    rep.add("monodromy." + locus_tag(k), monodromy_loop(r, k, opts.monodromy_steps), opts.tol);
}

}  // namespace

VerifyOutcome verify_problem(const ProblemFile& p, const VerifyOptions& opts) {
    VerifyOutcome out;
    VerificationReport& rep = out.report;
    try {
        const FamilyHandle h = p.family();
        const PoleZeroLoci t = p.loci();
        if (!h.admissible()) throw Error(ErrorCode::NotAdmissible, "G·F is Frobenius-singular");
        const FamilyPoint point(h, t);

        if (p.S_PZ) rep.add("certificate.lyapunov", certificate_residual(p, t, h.GF()), opts.tol);

        const GenericRatFn r = build(t, h.pair(), Variant::PZ);
        rep.append(structural_checks(r, opts.tol), "structural.");

        double agreement = 0.0;
        const double radius = 1.0 + 2.0 * t.max_abs();
        for (int j = 0; j < 4; ++j) {
            const Complex z = std::polar(radius, 0.2 + 1.6 * j);
            agreement = std::max(agreement, (point.eval(z) - r.eval(z)).frobenius_norm());
        }
        rep.add("family.matches_realization", agreement, opts.tol);

        for (std::size_t k = 0; k < t.size(); ++k) local_checks(r, k, opts, rep);

        const SchlesingerResidual sr = schlesinger_residual(h, t, opts.fd_step);
        rep.add("schlesinger.pde", sr.pde, opts.tol);
        rep.add("schlesinger.cauchy_riemann", sr.cauchy_riemann, 10.0 * opts.tol);

        const PotentialResidual pc = potential_check(h, t, opts.fd_step);
        rep.add("potential.gradient", pc.gradient, opts.tol);
        rep.add("potential.asymptotic", pc.asymptotic, opts.tol);

        const TauResidual tc = tau_logderiv_check(h, t, opts.fd_step);
        rep.add("tau.jacobi", tc.jacobi_vs_rhs, opts.tol);
        rep.add("tau.finite_difference", tc.fd_vs_rhs, opts.tol);
        rep.add("tau.coupling_derivative", tc.dS_closed_vs_fd, opts.tol);

        if (const auto comp = find_companion(h, t, opts)) {
            rep.add("tau.path_integral", comp->path.result.rel_error, opts.tol);
            rep.add("isoprincipal", isoprincipal_check(h, t, comp->t), opts.tol);
        } else {
            rep.add_flag("tau.path_integral", false, std::numeric_limits<double>::infinity(), opts.tol);
        }
        out.status = rep.passed() ? kExitPass : kExitFail;
    } catch (const Error& e) {
        out.error = e.what();
        out.status = is_refusal(e.code()) ? kExitRefused : kExitFail;
        if (out.status == kExitFail) rep.add_flag("suite_completed", false);
    }
    return out;
}

std::string report_json(const VerifyOutcome& outcome, const VerifyOptions& opts) {
    Json doc;
    doc["schema"] = "schlesinger-verification-report/1";
    doc["status"] = outcome.status == kExitPass ? "pass" : outcome.status == kExitFail ? "fail" : "refused";
    doc["exit_code"] = outcome.status;
    doc["passed"] = outcome.status == kExitPass;
    doc["error"] = outcome.error.empty() ? Json(nullptr) : Json(outcome.error);
    doc["settings"] = {
        {"tol", opts.tol},
        {"fd_step", opts.fd_step},
        {"cauchy_riemann_tol", 10.0 * opts.tol},
        {"monodromy_steps", opts.monodromy_steps},
        {"tau_steps", opts.tau_steps},
        {"max_tau_steps", opts.max_tau_steps},
        {"laurent_nodes", kLaurentNodes},
        {"cond_max", kCondMax},
        {"path_cond_max", kPathCondMax},
    };
    Json checks = Json::array();
    for (const auto& c : outcome.report.checks()) {
        checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    doc["checks"] = std::move(checks);
    doc["failures"] = outcome.report.failures();
    return doc.dump(2) + "\n";
}

int cmd_generate(std::size_t m, std::size_t n, std::uint64_t seed, const std::filesystem::path& out_path,
                 std::ostream& err) {
    try {
        save_problem(generate_problem(m, n, seed), out_path);
        return kExitPass;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::GiveUp ? kExitFail : kExitRefused;
    }
}

int cmd_verify(const std::filesystem::path& in_path, const VerifyOptions& opts,
               const std::filesystem::path& report_path, std::ostream& out, std::ostream& err) {
    VerifyOutcome outcome;
    try {
        outcome = verify_problem(load_problem(in_path), opts);
    } catch (const Error& e) {
        outcome.status = kExitRefused;
        outcome.error = e.what();
    }
    if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) {
            err << "cannot write " << report_path.string() << '\n';
            return kExitRefused;
        }
        f << report_json(outcome, opts);
    }
    if (!outcome.error.empty()) err << outcome.error << '\n';
    for (const auto& name : outcome.report.failures()) {
        const CheckResult* c = outcome.report.find(name);
        err << "FAILED " << name << ": residual " << c->residual << " > " << c->tolerance << '\n';
    }
    out << (outcome.status == kExitPass ? "pass" : outcome.status == kExitFail ? "fail" : "refused") << " ("
        << outcome.report.checks().size() << " checks)\n";
    return outcome.status;
}

int cmd_tau_scan(const std::filesystem::path& in_path, const std::string& target, const TauScanOptions& opts,
                 const std::filesystem::path& csv_path, std::ostream& out, std::ostream& err) {
    TauPathResult path;
    Complex tau_end;
    double rel_error = 0.0;
    try {
        const ProblemFile p = load_problem(in_path);
        const PoleZeroLoci t0 = p.loci();
        const PoleZeroLoci t1(parse_loci(target));
        const FamilyHandle h = p.family();
        if (!h.admissible()) throw Error(ErrorCode::NotAdmissible, "G·F is Frobenius-singular");
        path = tau_path_integral(h, t0, t1, opts.steps);
        tau_end = path.tau_integral;
        if (opts.steps >= 2) {
            // One Richardson step on the trapezoid logs: error O(h⁴) instead of O(h²).
            const TauPathResult coarse = tau_path_integral(h, t0, t1, opts.steps / 2);
            const Complex fine_log = std::log(path.tau_integral / path.tau_start);
            const Complex coarse_log = std::log(coarse.tau_integral / coarse.tau_start);
            const double ratio = static_cast<double>(opts.steps) / static_cast<double>(opts.steps / 2);
            tau_end = path.tau_start * std::exp(fine_log + (fine_log - coarse_log) / (ratio * ratio - 1.0));
        }
        rel_error = std::abs(tau_end - path.tau_direct) / std::abs(path.tau_direct);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return is_refusal(e.code()) ? kExitRefused : kExitFail;
    }

    std::ofstream f(csv_path, std::ios::binary);
    if (!f) {
        err << "cannot write " << csv_path.string() << '\n';
        return kExitRefused;
    }
    f << "s,tau_re,tau_im,abs_det,cond\n";
    for (const auto& node : path.nodes) {
        f << shortest(node.s) << ',' << shortest(node.tau.real()) << ',' << shortest(node.tau.imag()) << ','
          << shortest(std::abs(node.tau)) << ',' << shortest(node.cond) << '\n';
    }
    f << "integral," << shortest(tau_end.real()) << ',' << shortest(tau_end.imag()) << ','
      << shortest(std::abs(tau_end)) << ',' << shortest(path.nodes.back().cond) << '\n';

    out << "rel_error " << shortest(rel_error) << '\n';
    return rel_error <= opts.tol ? kExitPass : kExitFail;
}

}  // namespace schlesinger
