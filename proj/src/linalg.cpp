#include "schlesinger/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include "schlesinger/error.hpp"

namespace schlesinger {

// ---------------------------------------------------------------------------
// LU

LuFactor::LuFactor(const ComplexMatrix& a) : n_(a.rows()), lu_(a), perm_(a.rows()) {
    if (!a.is_square()) throw Error(ErrorCode::InvalidInput, "LU of a non-square matrix");
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double threshold = kPivotEps * a.max_abs();
    if (a.max_abs() == 0.0 && n_ > 0) singular_ = true;

    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n_; ++i) {
            if (const double v = std::abs(lu_(i, k)); v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= threshold) singular_ = true;
        if (best == 0.0) continue;  // column already eliminated; det() will be 0
        if (p != k) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
            parity_ = -parity_;
        }
        const Complex pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n_; ++i) {
            const Complex factor = lu_(i, k) / pivot;
            lu_(i, k) = factor;
            if (factor == Complex{}) continue;
            for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= factor * lu_(k, j);
        }
    }
}

Complex LuFactor::det() const {
    Complex d = static_cast<double>(parity_);
    for (std::size_t k = 0; k < n_; ++k) d *= lu_(k, k);
    return d;
}

ComplexMatrix LuFactor::solve(const ComplexMatrix& b) const {
    if (b.rows() != n_) throw Error(ErrorCode::InvalidInput, "lu_solve: right-hand side row count");
    if (singular_) throw Error(ErrorCode::SingularMatrix, "pivot below threshold");
    ComplexMatrix x(n_, b.cols());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(perm_[i], j);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            Complex s = x(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * x(k, j);
            x(i, j) = s;
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            Complex s = x(ii, j);
            for (std::size_t k = ii + 1; k < n_; ++k) s -= lu_(ii, k) * x(k, j);
            x(ii, j) = s / lu_(ii, ii);
        }
    }
    return x;
}

ComplexMatrix LuFactor::solve_right(const ComplexMatrix& b) const {
    if (b.cols() != n_) throw Error(ErrorCode::InvalidInput, "solve_right: column count");
    return b * inverse();
}

ComplexMatrix LuFactor::inverse() const { return solve(ComplexMatrix::identity(n_)); }

ComplexMatrix lu_solve(const ComplexMatrix& a, const ComplexMatrix& b) { return LuFactor(a).solve(b); }

Complex det(const ComplexMatrix& a) { return LuFactor(a).det(); }

ComplexMatrix inverse(const ComplexMatrix& a) { return LuFactor(a).inverse(); }

double cond_estimate(const ComplexMatrix& a) {
    const LuFactor lu(a);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    const double c = a.norm1() * lu.inverse().norm1();
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Lyapunov equations with diagonal coefficients

ComplexMatrix solve_lyapunov_diag(const DiagSpectrum& a, const DiagSpectrum& b, const ComplexMatrix& y,
                                  double dist_eps) {
    if (y.rows() != a.size() || y.cols() != b.size()) {
        throw Error(ErrorCode::InvalidInput, "solve_lyapunov_diag: shape mismatch");
    }
    if (dist_eps < 0.0) dist_eps = 1e-12 * (1.0 + std::max(a.max_abs(), b.max_abs()));
    ComplexMatrix x(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Complex d = a[i] - b[j];
            if (std::abs(d) < dist_eps) {
                throw Error(ErrorCode::SpectraCollide, "a_" + std::to_string(i) + " meets b_" + std::to_string(j));
            }
            x(i, j) = y(i, j) / d;
        }
    return x;
}

namespace {

struct Circle {
    Complex center;
    double radius;
};

// Adds the trapezoidal approximation of (1/2πi)∮ Y_ij / ((z−a_i)(z−b_j)) dz.
void accumulate_circle(const Circle& c, const DiagSpectrum& a, const DiagSpectrum& b, const ComplexMatrix& y,
                       std::size_t nodes, ComplexMatrix& x) {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const Complex w = std::polar(c.radius, step * static_cast<double>(k));
        const Complex z = c.center + w;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Complex left = w / (z - a[i]) / static_cast<double>(nodes);
            for (std::size_t j = 0; j < b.size(); ++j) x(i, j) += left * y(i, j) / (z - b[j]);
        }
    }
}

}  // namespace

ComplexMatrix contour_lyapunov_oracle(const DiagSpectrum& a, const DiagSpectrum& b, const ComplexMatrix& y,
                                      std::size_t quad_points) {
    if (y.rows() != a.size() || y.cols() != b.size()) {
        throw Error(ErrorCode::InvalidInput, "contour_lyapunov_oracle: shape mismatch");
    }
    if (quad_points < 4) throw Error(ErrorCode::InvalidInput, "contour_lyapunov_oracle: too few nodes");
    ComplexMatrix x(a.size(), b.size());
    if (a.size() == 0 || b.size() == 0) return x;

    const double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
    Complex mean = 0.0;
    for (auto v : a.values()) mean += v;
    mean /= static_cast<double>(a.size());
    double inner = 0.0;
    for (auto v : a.values()) inner = std::max(inner, std::abs(v - mean));
    double outer = std::numeric_limits<double>::infinity();
    for (auto v : b.values()) outer = std::min(outer, std::abs(v - mean));

    // One circle if it separates with a comfortable geometric convergence rate.
    const double r = 0.5 * (inner + outer);
    if (outer > inner && std::max(inner / r, r / outer) <= 0.6) {
        accumulate_circle({mean, r}, a, b, y, quad_points, x);
        return x;
    }

    std::vector<Complex> centers;
    for (auto v : a.values()) {
        const bool seen = std::any_of(centers.begin(), centers.end(),
                                      [&](Complex c) { return std::abs(c - v) <= 1e-14 * scale; });
        if (!seen) centers.push_back(v);
    }
    for (auto c : centers) {
        double gap = std::numeric_limits<double>::infinity();
        for (auto v : b.values()) gap = std::min(gap, std::abs(v - c));
        for (auto other : centers)
            if (other != c) gap = std::min(gap, std::abs(other - c));
        if (!(gap > 1e-12 * scale)) {
            throw Error(ErrorCode::NoSeparatingContour, "a spectral point of U coincides with one of V");
        }
        accumulate_circle({c, 0.5 * gap}, a, b, y, quad_points, x);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Frobenius singularity

double numerical_zero_eps(const ComplexMatrix& m) { return 1e-13 * m.max_abs(); }

namespace {

bool try_augment(const std::vector<std::vector<std::size_t>>& adj, std::size_t row, std::vector<char>& visited,
                 std::vector<std::size_t>& match_of_col) {
    constexpr auto unmatched = std::numeric_limits<std::size_t>::max();
    for (std::size_t col : adj[row]) {
        if (visited[col]) continue;
        visited[col] = 1;
        if (match_of_col[col] == unmatched || try_augment(adj, match_of_col[col], visited, match_of_col)) {
            match_of_col[col] = row;
            return true;
        }
    }
    return false;
}

}  // namespace

std::size_t structural_rank(const ComplexMatrix& m, double zero_eps) {
    std::vector<std::vector<std::size_t>> adj(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > zero_eps) adj[i].push_back(j);

    std::vector<std::size_t> match_of_col(m.cols(), std::numeric_limits<std::size_t>::max());
    std::size_t matched = 0;
    std::vector<char> visited(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::fill(visited.begin(), visited.end(), 0);
        if (try_augment(adj, i, visited, match_of_col)) ++matched;
    }
    return matched;
}

bool is_frobenius_singular(const ComplexMatrix& m, double zero_eps) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidInput, "is_frobenius_singular: non-square");
    return structural_rank(m, zero_eps) < m.rows();
}

bool frobenius_brute(const ComplexMatrix& m, double zero_eps) {
    if (!m.is_square()) throw Error(ErrorCode::InvalidInput, "frobenius_brute: non-square");
    if (m.rows() > 8) throw Error(ErrorCode::TooLarge, "frobenius_brute enumerates n! terms; n > 8");
    std::vector<std::size_t> sigma(m.rows());
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    do {
        bool survives = true;
        for (std::size_t i = 0; i < sigma.size() && survives; ++i) survives = std::abs(m(i, sigma[i])) > zero_eps;
        if (survives) return false;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return true;
}

// ---------------------------------------------------------------------------
// Rank-one factorization

namespace {

// Returns factors without the rank test; f is empty for the zero matrix.
RankOneFactors gauge_fixed_factors(const ComplexMatrix& m) {
    std::size_t best_col = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (const double nrm = m.column(j).frobenius_norm(); nrm > best_norm) {
            best_norm = nrm;
            best_col = j;
        }
    }
    if (!(best_norm > 0.0)) return {};

    ComplexMatrix f = m.column(best_col);
    std::size_t lead = 0;
    for (std::size_t i = 1; i < f.rows(); ++i)
        if (std::abs(f(i, 0)) > std::abs(f(lead, 0))) lead = i;
    f *= std::conj(f(lead, 0)) / std::abs(f(lead, 0));

    const double ff = std::pow(f.frobenius_norm(), 2);
    ComplexMatrix g = f.adjoint() * m;
    g *= 1.0 / ff;
    return {std::move(f), std::move(g)};
}

}  // namespace

double rank_one_defect(const ComplexMatrix& m) {
    auto factors = gauge_fixed_factors(m);
    if (factors.f.empty()) return std::numeric_limits<double>::infinity();
    return (m - factors.f * factors.g).frobenius_norm() / m.frobenius_norm();
}

RankOneFactors rank_one_factor(const ComplexMatrix& m, double rank_eps) {
    auto factors = gauge_fixed_factors(m);
    if (factors.f.empty()) throw Error(ErrorCode::NotRankOne, "zero matrix");
    const double defect = (m - factors.f * factors.g).frobenius_norm() / m.frobenius_norm();
    if (!(defect <= rank_eps)) {
        throw Error(ErrorCode::NotRankOne, "relative rank-one defect " + std::to_string(defect));
    }
    return factors;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_eps) {
    std::vector<ComplexMatrix> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    double first = -1.0;
    std::size_t rank = 0;
    while (!cols.empty()) {
        auto it = std::max_element(cols.begin(), cols.end(), [](const ComplexMatrix& a, const ComplexMatrix& b) {
            return a.frobenius_norm() < b.frobenius_norm();
        });
        const double pivot = it->frobenius_norm();
        if (first < 0.0) first = pivot;
        if (!(pivot > rel_eps * first) || pivot == 0.0) break;
        ComplexMatrix q = *it * (1.0 / pivot);
        cols.erase(it);
        for (auto& c : cols) c -= q * (q.adjoint() * c);
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Cauchy determinant

ComplexMatrix cauchy_matrix(const DiagSpectrum& z, const DiagSpectrum& t) {
    ComplexMatrix c(z.size(), t.size());
    for (std::size_t l = 0; l < z.size(); ++l)
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (z[l] == t[k]) throw Error(ErrorCode::SpectraCollide, "cauchy_matrix: z meets t");
            c(l, k) = 1.0 / (z[l] - t[k]);
        }
    return c;
}

Complex cauchy_determinant(const DiagSpectrum& z, const DiagSpectrum& t) {
    if (z.size() != t.size()) throw Error(ErrorCode::InvalidInput, "cauchy_determinant: size mismatch");
    const double scale = 1.0 + std::max(z.max_abs(), t.max_abs());
    const std::size_t n = z.size();
    Complex num = 1.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) num *= (z[q] - z[p]) * (t[p] - t[q]);
    Complex den = 1.0;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex d = z[l] - t[k];
            if (std::abs(d) <= 1e-14 * scale) throw Error(ErrorCode::SpectraCollide, "cauchy_determinant: z meets t");
            den *= d;
        }
    return num / den;
}

}  // namespace schlesinger
