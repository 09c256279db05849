#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "schlesinger/matrix.hpp"
#include "schlesinger/problem.hpp"

namespace oracle {

using schlesinger::Complex;
using schlesinger::ComplexMatrix;

// Leibniz expansion over all n! permutations.
inline Complex permutation_det(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    Complex sum = 0.0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j];
        Complex prod = inversions % 2 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= a(i, p[i]);
        sum += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return sum;
}

inline ComplexMatrix random_matrix(schlesinger::Rng& rng, std::size_t r, std::size_t c, double half = 1.0) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.box(half);
    return m;
}

// Product of Householder reflectors I − 2vv*/v*v: exactly unitary.
inline ComplexMatrix householder_product(schlesinger::Rng& rng, std::size_t n, int reflectors) {
    ComplexMatrix u = ComplexMatrix::identity(n);
    for (int k = 0; k < reflectors; ++k) {
        const ComplexMatrix v = random_matrix(rng, n, 1);
        const double vv = std::pow(v.frobenius_norm(), 2);
        u = u * (ComplexMatrix::identity(n) - (2.0 / vv) * (v * v.adjoint()));
    }
    return u;
}

// Central difference of a matrix function along direction `dir`.
inline ComplexMatrix central_difference(const std::function<ComplexMatrix(Complex)>& f, Complex z, Complex h) {
    return (1.0 / (2.0 * h)) * (f(z + h) - f(z - h));
}

// (1/2πi)∮ f(z)(z−t)^{−k−1} dz on |z − t| = radius by the trapezoidal rule.
inline ComplexMatrix contour_coefficient(const std::function<ComplexMatrix(Complex)>& f, Complex t, double radius,
                                         int k, int nodes = 400) {
    ComplexMatrix acc;
    for (int j = 0; j < nodes; ++j) {
        const Complex u = std::polar(radius, 2.0 * M_PI * j / nodes);
        const ComplexMatrix term = std::pow(u, -k) * f(t + u);
        acc = acc.empty() ? term : acc + term;
    }
    return (1.0 / nodes) * acc;
}

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm() / std::max(1e-300, b.frobenius_norm());
}

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace oracle
