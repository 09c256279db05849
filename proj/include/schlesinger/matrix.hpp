#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace schlesinger {

using Complex = std::complex<double>;

/// Diagonal entries of a diagonal matrix, e.g. the pole matrix diag(t_1..t_n).
class DiagSpectrum {
public:
    DiagSpectrum() = default;
    explicit DiagSpectrum(std::vector<Complex> values);
    DiagSpectrum(std::initializer_list<Complex> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] Complex operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return values_; }

    /// Largest modulus, 0 for an empty spectrum.
    [[nodiscard]] double max_abs() const noexcept;

private:
    std::vector<Complex> values_;
};

/// Dense row-major complex matrix. Sizes in this library are small (a few
/// dozen at most), so every operation is a straightforward loop.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix diagonal(const DiagSpectrum& d);
    static ComplexMatrix column_vector(std::span<const Complex> v);
    static ComplexMatrix row_vector(std::span<const Complex> v);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    [[nodiscard]] Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }

    [[nodiscard]] ComplexMatrix row(std::size_t i) const;
    [[nodiscard]] ComplexMatrix column(std::size_t j) const;
    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix transpose() const;

    [[nodiscard]] double frobenius_norm() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;
    /// Maximum absolute column sum.
    [[nodiscard]] double norm1() const noexcept;
    [[nodiscard]] Complex trace() const;
    [[nodiscard]] bool all_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

[[nodiscard]] ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
[[nodiscard]] ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
[[nodiscard]] ComplexMatrix operator-(ComplexMatrix m);
[[nodiscard]] ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
[[nodiscard]] ComplexMatrix operator*(Complex s, ComplexMatrix m);
[[nodiscard]] ComplexMatrix operator*(ComplexMatrix m, Complex s);

/// Scales row i by d[i] (left multiplication by diag(d)).
[[nodiscard]] ComplexMatrix scale_rows(const DiagSpectrum& d, ComplexMatrix m);
/// Scales column j by d[j] (right multiplication by diag(d)).
[[nodiscard]] ComplexMatrix scale_cols(ComplexMatrix m, const DiagSpectrum& d);

/// Frobenius commutator [a, b] = ab - ba.
[[nodiscard]] ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m);

}  // namespace schlesinger
