#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "schlesinger/family.hpp"
#include "schlesinger/matrix.hpp"

namespace schlesinger {

/// F, G and loci t of one family point, plus an optional seed and the stored
/// coupling certificate S_PZ(t).
struct ProblemFile {
    std::size_t m = 0;
    std::size_t n = 0;
    ComplexMatrix F;
    ComplexMatrix G;
    std::vector<Complex> t;
    std::optional<std::uint64_t> seed;
    std::optional<ComplexMatrix> S_PZ;

    [[nodiscard]] PoleZeroLoci loci() const { return PoleZeroLoci(t); }
    [[nodiscard]] FamilyHandle family() const { return make_family(F, G); }

    friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

/// Parses and validates shapes and loci (InvalidInput / SpectraCollide).
[[nodiscard]] ProblemFile parse_problem(const std::string& text);
[[nodiscard]] std::string serialize_problem(const ProblemFile& p);
[[nodiscard]] ProblemFile load_problem(const std::filesystem::path& path);
void save_problem(const ProblemFile& p, const std::filesystem::path& path);

/// Loci as a JSON array of [re, im] pairs, inline or in a file.
[[nodiscard]] std::vector<Complex> parse_loci(const std::string& text);

/// Platform-independent uniform draws from a 64-bit Mersenne twister.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Complex box(double half_width) { return {uniform(-half_width, half_width), uniform(-half_width, half_width)}; }

private:
    std::mt19937_64 gen_;
};

struct GenerateOptions {
    double box = 2.0;            // loci in [−box, box]²
    double min_separation = 0.3;
    double cond_max = 1e6;
    int max_redraws = 1000;
};

/// Random admissible data: F, G uniform in [−1, 1]², loci in the box with the
/// minimum separation, redrawn until G·F passes the matching test and
/// cond S_PZ(t) ≤ cond_max. Throws GiveUp after max_redraws attempts.
[[nodiscard]] ProblemFile generate_problem(std::size_t m, std::size_t n, std::uint64_t seed,
                                           const GenerateOptions& opts = {});

/// Random loci with the box and separation of opts, drawn from rng.
[[nodiscard]] std::vector<Complex> random_loci(Rng& rng, std::size_t n, const GenerateOptions& opts = {});

}  // namespace schlesinger
