#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "schlesinger/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generic rational matrix functions, Schlesinger families and their checks"};
    app.require_subcommand(1);

    std::size_t m = 1, n = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    auto* gen = app.add_subcommand("generate", "draw random admissible data");
    gen->add_option("--m", m, "matrix size")->required()->check(CLI::PositiveNumber);
    gen->add_option("--n", n, "number of poles (and zeros)")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("-o,--output", out_path, "problem file to write")->required();

    schlesinger::VerifyOptions vopts;
    std::string in_path, report_path;
    auto* verify = app.add_subcommand("verify", "run every check on a problem file");
    verify->add_option("--input", in_path, "problem file")->required();
    verify->add_option("--tol", vopts.tol, "residual tolerance")->capture_default_str();
    verify->add_option("--fd-step", vopts.fd_step, "finite-difference step")->capture_default_str();
    verify->add_option("--report", report_path, "JSON report to write");

    schlesinger::TauScanOptions topts;
    std::string target, csv_path;
    auto* tau = app.add_subcommand("tau", "integrate the tau function along a segment");
    tau->add_option("--input", in_path, "problem file (start point)")->required();
    tau->add_option("--target", target, "end loci: JSON array of [re, im] pairs, inline or a file")->required();
    tau->add_option("--steps", topts.steps, "trapezoid steps")->capture_default_str()->check(CLI::PositiveNumber);
    tau->add_option("--tol", topts.tol, "relative mismatch tolerance")->capture_default_str();
    tau->add_option("-o,--output", csv_path, "CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : schlesinger::kExitRefused;
    }

    if (gen->parsed()) return schlesinger::cmd_generate(m, n, seed, out_path, std::cerr);
    if (verify->parsed()) return schlesinger::cmd_verify(in_path, vopts, report_path, std::cout, std::cerr);
    return schlesinger::cmd_tau_scan(in_path, target, topts, csv_path, std::cout, std::cerr);
}
