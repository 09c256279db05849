#include "schlesinger/problem.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "schlesinger/error.hpp"

namespace schlesinger {

namespace {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected " + std::to_string(rows) + " rows");
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw Error(ErrorCode::InvalidInput, std::string(what) + ": expected " + std::to_string(cols) + " columns");
        }
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c], what);
    }
    if (!m.all_finite()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-finite entry");
    return m;
}

std::vector<Complex> loci_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "t: expected an array of [re, im] pairs");
    std::vector<Complex> t;
    for (const auto& e : j) t.push_back(complex_from_json(e, "t"));
    return t;
}

std::size_t count_field(const Json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned() || doc[key].get<std::size_t>() == 0) {
        throw Error(ErrorCode::InvalidInput, std::string("field '") + key + "' must be a positive integer");
    }
    return doc[key].get<std::size_t>();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "problem file must be a JSON object");
    ProblemFile p;
    p.m = count_field(doc, "m");
    p.n = count_field(doc, "n");
    if (!doc.contains("F") || !doc.contains("G") || !doc.contains("t")) {
        throw Error(ErrorCode::InvalidInput, "problem file needs F, G and t");
    }
    p.F = matrix_from_json(doc["F"], p.m, p.n, "F");
    p.G = matrix_from_json(doc["G"], p.n, p.m, "G");
    p.t = loci_from_json(doc["t"]);
    if (p.t.size() != 2 * p.n) throw Error(ErrorCode::InvalidInput, "t must hold 2n loci");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw Error(ErrorCode::InvalidInput, "seed must be an unsigned integer");
        p.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("S_PZ")) p.S_PZ = matrix_from_json(doc["S_PZ"], p.n, p.n, "S_PZ");

    // Validation by construction: zero columns/rows, duplicated loci.
    (void)SemiresidualPair(p.F, p.G);
    (void)p.loci();
    return p;
}

std::string serialize_problem(const ProblemFile& p) {
    Json doc;
    doc["m"] = p.m;
    doc["n"] = p.n;
    if (p.seed) doc["seed"] = *p.seed;
    doc["F"] = matrix_to_json(p.F);
    doc["G"] = matrix_to_json(p.G);
    Json t = Json::array();
    for (const auto& v : p.t) t.push_back(complex_to_json(v));
    doc["t"] = std::move(t);
    if (p.S_PZ) doc["S_PZ"] = matrix_to_json(*p.S_PZ);
    return doc.dump(2) + "\n";
}

ProblemFile load_problem(const std::filesystem::path& path) { return parse_problem(read_text(path)); }

void save_problem(const ProblemFile& p, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    out << serialize_problem(p);
}

std::vector<Complex> parse_loci(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const std::string body = first != std::string::npos && text[first] == '[' ? text : read_text(text);
    try {
        return loci_from_json(Json::parse(body));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed loci: ") + e.what());
    }
}

std::vector<Complex> random_loci(Rng& rng, std::size_t n, const GenerateOptions& opts) {
    std::vector<Complex> t;
    int attempts = 0;
    while (t.size() < 2 * n) {
        if (++attempts > 100000) throw Error(ErrorCode::GiveUp, "cannot place separated loci in the box");
        const Complex c = rng.box(opts.box);
        bool ok = true;
        for (const auto& v : t) ok = ok && std::abs(c - v) >= opts.min_separation;
        if (ok) t.push_back(c);
    }
    return t;
}

ProblemFile generate_problem(std::size_t m, std::size_t n, std::uint64_t seed, const GenerateOptions& opts) {
    if (m == 0 || n == 0) throw Error(ErrorCode::InvalidInput, "m and n must be at least 1");
    Rng rng(seed);
    std::string last_failure = "none";
    for (int attempt = 0; attempt < opts.max_redraws; ++attempt) {
        ProblemFile p;
        p.m = m;
        p.n = n;
        p.seed = seed;
        p.F = ComplexMatrix(m, n);
        p.G = ComplexMatrix(n, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) p.F(i, j) = rng.box(1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) p.G(i, j) = rng.box(1.0);
        p.t = random_loci(rng, n, opts);
        try {
            const FamilyHandle h = p.family();
            if (!h.admissible()) {
                last_failure = "G·F Frobenius-singular";
                continue;
            }
            const FamilyPoint point(h, p.loci(), opts.cond_max);
            p.S_PZ = point.coupling();
            return p;
        } catch (const Error& e) {
            last_failure = e.what();
        }
    }
    throw Error(ErrorCode::GiveUp, "no admissible draw after " + std::to_string(opts.max_redraws) +
                                       " attempts (last: " + last_failure + ")");
}

}  // namespace schlesinger
