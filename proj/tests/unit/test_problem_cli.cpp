#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../support/oracles.hpp"
#include "schlesinger/commands.hpp"
#include "schlesinger/error.hpp"

using namespace schlesinger;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "schlesinger_unit";
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCode parse_code(const std::string& text) {
    try {
        (void)parse_problem(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::GiveUp;
}

}  // namespace

TEST_CASE("Rng is reproducible") {
    Rng a(9), b(9);
    for (int k = 0; k < 100; ++k) CHECK(a.uniform() == b.uniform());
    Rng c(9);
    for (int k = 0; k < 1000; ++k) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("generated problems") {
    const ProblemFile s = generate_problem(1, 1, 7);
    CHECK(s.family().admissible());
    CHECK(s.seed == 7u);

    const ProblemFile p = generate_problem(2, 3, 42);
    CHECK(p.family().admissible());
    CHECK(p.t.size() == 6);
    CHECK(p.loci().min_separation() >= 0.3);
    for (const Complex v : p.t) {
        CHECK(std::abs(v.real()) <= 2.0);
        CHECK(std::abs(v.imag()) <= 2.0);
    }
    CHECK(FamilyPoint(p.family(), p.loci()).cond() <= 1e6);
    CHECK(*p.S_PZ == FamilyPoint(p.family(), p.loci()).coupling());
    CHECK(serialize_problem(generate_problem(2, 3, 42)) == serialize_problem(p));
    CHECK(serialize_problem(generate_problem(2, 3, 43)) != serialize_problem(p));

    CHECK_THROWS_AS((void)generate_problem(0, 1, 1), Error);
    try {
        (void)generate_problem(2, 2, 1, {.cond_max = 0.5, .max_redraws = 5});
        FAIL("expected GiveUp");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GiveUp);
    }
}

TEST_CASE("round trip is bit-exact") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const ProblemFile p = generate_problem(1 + seed % 4, 1 + seed % 3, seed);
        const fs::path f = scratch_dir() / "roundtrip.json";
        save_problem(p, f);
        CHECK(load_problem(f) == p);
        CHECK(serialize_problem(load_problem(f)) == slurp(f));
    }
}

TEST_CASE("malformed problem files") {
    CHECK(parse_code("{") == ErrorCode::InvalidInput);
    CHECK(parse_code("[]") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":1,"n":1,"F":[[[1,0]]],"G":[[[1,0]]]})") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":1,"n":1,"F":[[[1,0]]],"G":[[[1,0]]],"t":[[0,0]]})") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":1,"n":1,"F":[[1]],"G":[[[1,0]]],"t":[[0,0],[1,0]]})") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":0,"n":1,"F":[],"G":[[]],"t":[[0,0],[1,0]]})") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":1,"n":1,"F":[[[1,0]]],"G":[[[0,0]]],"t":[[0,0],[1,0]]})") == ErrorCode::InvalidInput);
    CHECK(parse_code(R"({"m":1,"n":1,"F":[[[1,0]]],"G":[[[1,0]]],"t":[[0.5,0],[0.5,0]]})") ==
          ErrorCode::SpectraCollide);
    const ProblemFile ok = parse_problem(R"({"m":1,"n":1,"F":[[[1,0]]],"G":[[[1,0]]],"t":[[0,0],[1,0]]})");
    CHECK_FALSE(ok.seed.has_value());
    CHECK_FALSE(ok.S_PZ.has_value());
    CHECK(parse_loci("[[0,0],[2,0]]") == std::vector<Complex>{0.0, 2.0});
}

TEST_CASE("verify_problem on the scalar and a random problem") {
    VerifyOutcome s = verify_problem(generate_problem(1, 1, 7));
    CHECK(s.status == kExitPass);
    for (const auto& c : s.report.checks()) {
        CAPTURE(c.name);
        if (c.name.find("regular_invertible") == std::string::npos) CHECK(c.residual <= 1e-9);
    }

    const VerifyOutcome r = verify_problem(generate_problem(2, 2, 5));
    CHECK(r.status == kExitPass);
    CHECK(r.report.find("schlesinger.pde") != nullptr);
    CHECK(r.report.find("tau.path_integral") != nullptr);
    CHECK(r.report.find("isoprincipal") != nullptr);
    CHECK(r.report.find("local.t4.regular_residue") != nullptr);

    const nlohmann::json doc = nlohmann::json::parse(report_json(r, {}));
    CHECK(doc["passed"] == true);
    CHECK(doc["exit_code"] == 0);
    CHECK(doc["settings"]["tol"] == 1e-6);
    CHECK(doc["checks"].size() == r.report.checks().size());
    CHECK(report_json(r, {}) == report_json(verify_problem(generate_problem(2, 2, 5)), {}));
}

TEST_CASE("verify_problem negative controls") {
    SUBCASE("corrupted F breaks the stored certificate") {
        ProblemFile p = generate_problem(2, 2, 11);
        p.F(0, 1) += Complex(0.05, 0.0);
        const VerifyOutcome o = verify_problem(p);
        CHECK(o.status == kExitFail);
        const auto failures = o.report.failures();
        REQUIRE_FALSE(failures.empty());
        CHECK(failures.front() == "certificate.lyapunov");
    }
    SUBCASE("duplicated loci") {
        ProblemFile p = generate_problem(2, 2, 12);
        p.t[3] = p.t[0];
        const VerifyOutcome o = verify_problem(p);
        CHECK(o.status == kExitRefused);
        CHECK_FALSE(o.error.empty());
    }
    SUBCASE("Frobenius-singular GF") {
        ProblemFile p;
        p.m = 2;
        p.n = 2;
        p.F = ComplexMatrix{{0.0, 1.0}, {1.0, 1.0}};
        p.G = ComplexMatrix{{1.0, 0.0}, {1.0, 0.0}};
        p.t = {0.0, 1.0, 2.0, 3.0};
        const VerifyOutcome o = verify_problem(p);
        CHECK(o.status == kExitRefused);
        CHECK(o.error.find("NotAdmissible") != std::string::npos);
    }
}

TEST_CASE("tau scan writes the documented CSV") {
    const fs::path dir = scratch_dir();
    ProblemFile p;
    p.m = 1;
    p.n = 1;
    p.F = ComplexMatrix{{1.0}};
    p.G = ComplexMatrix{{1.0}};
    p.t = {0.0, 1.0};
    save_problem(p, dir / "scalar.json");

    std::ostringstream out, err;
    CHECK(cmd_tau_scan(dir / "scalar.json", "[[0,0],[2,0]]", {.steps = 1024, .tol = 1e-8}, dir / "scan.csv", out, err) ==
          kExitPass);
    std::istringstream csv(slurp(dir / "scan.csv"));
    std::string line, last;
    std::getline(csv, line);
    CHECK(line == "s,tau_re,tau_im,abs_det,cond");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows == 1024 + 2);
    CHECK(last.rfind("integral,", 0) == 0);
    CHECK(std::stod(last.substr(9)) == doctest::Approx(-0.5).epsilon(1e-8));

    std::ostringstream out0, err0;
    CHECK(cmd_tau_scan(dir / "scalar.json", "[[0,0],[1,0]]", {}, dir / "zero.csv", out0, err0) == kExitPass);
    CHECK(out0.str() == "rel_error 0\n");
    CHECK(slurp(dir / "zero.csv") == "s,tau_re,tau_im,abs_det,cond\n0,-1,0,1,1\nintegral,-1,0,1,1\n");

    std::ostringstream out2, err2;
    CHECK(cmd_tau_scan(dir / "scalar.json", "[[0,0]]", {}, dir / "bad.csv", out2, err2) == kExitRefused);
}
