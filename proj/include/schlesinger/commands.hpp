#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "schlesinger/problem.hpp"
#include "schlesinger/report.hpp"

namespace schlesinger {

/// Process exit statuses shared by every command.
enum ExitStatus : int { kExitPass = 0, kExitFail = 1, kExitRefused = 2 };

struct VerifyOptions {
    double tol = 1e-6;
    double fd_step = 1e-5;
    std::size_t monodromy_steps = 1024;
    std::size_t tau_steps = 1024;
    std::size_t max_tau_steps = 65536;
};

struct VerifyOutcome {
    int status = kExitRefused;
    VerificationReport report;
    std::string error;  // refusal reason, empty otherwise
};

/// The full check suite on one problem. Input errors and singular-set
/// proximity give kExitRefused; any failing check gives kExitFail.
[[nodiscard]] VerifyOutcome verify_problem(const ProblemFile& p, const VerifyOptions& opts = {});

/// JSON document for an outcome, echoing the effective settings.
[[nodiscard]] std::string report_json(const VerifyOutcome& outcome, const VerifyOptions& opts);

/// Writes the generated problem to out_path; returns the exit status.
int cmd_generate(std::size_t m, std::size_t n, std::uint64_t seed, const std::filesystem::path& out_path,
                 std::ostream& err);

/// Loads in_path, runs verify_problem, writes the JSON report (if a path is
/// given) and returns the exit status.
int cmd_verify(const std::filesystem::path& in_path, const VerifyOptions& opts,
               const std::filesystem::path& report_path, std::ostream& out, std::ostream& err);

struct TauScanOptions {
    std::size_t steps = 1024;
    double tol = 1e-6;
};

/// CSV `s,tau_re,tau_im,abs_det,cond`: one row per path node with the direct
/// det S_PZ, then a row with s = "integral" carrying the integral-predicted
/// τ(t1), Richardson-extrapolated from `steps` and `steps/2` trapezoid panels.
/// Exit 0 iff the relative mismatch is within tol.
int cmd_tau_scan(const std::filesystem::path& in_path, const std::string& target, const TauScanOptions& opts,
                 const std::filesystem::path& csv_path, std::ostream& out, std::ostream& err);

}  // namespace schlesinger
