#include "schlesinger/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "schlesinger/error.hpp"

namespace schlesinger {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::InvalidInput, std::string("shape mismatch in ") + op);
    }
}

}  // namespace

DiagSpectrum::DiagSpectrum(std::vector<Complex> values) : values_(std::move(values)) {}

DiagSpectrum::DiagSpectrum(std::initializer_list<Complex> values) : values_(values) {}

double DiagSpectrum::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw Error(ErrorCode::InvalidInput, "entry count does not match rows*cols");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::InvalidInput, "ragged matrix literal");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const DiagSpectrum& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column_vector(std::span<const Complex> v) {
    return {v.size(), 1, std::vector<Complex>(v.begin(), v.end())};
}

ComplexMatrix ComplexMatrix::row_vector(std::span<const Complex> v) {
    return {1, v.size(), std::vector<Complex>(v.begin(), v.end())};
}

ComplexMatrix ComplexMatrix::row(std::size_t i) const {
    ComplexMatrix r(1, cols_);
    for (std::size_t j = 0; j < cols_; ++j) r(0, j) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::column(std::size_t j) const {
    ComplexMatrix c(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) a(j, i) = (*this)(i, j);
    return a;
}

double ComplexMatrix::frobenius_norm() const noexcept {
    // Scaled accumulation keeps tiny and huge entries from under/overflowing.
    const double scale = max_abs();
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double sum = 0.0;
    for (const auto& e : entries_) sum += std::norm(e / scale);
    return scale * std::sqrt(sum);
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::norm1() const noexcept {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw Error(ErrorCode::InvalidInput, "trace of a non-square matrix");
    Complex s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex& e) {
        return std::isfinite(e.real()) && std::isfinite(e.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "+");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "-");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) noexcept {
    for (auto& e : entries_) e *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw Error(ErrorCode::InvalidInput, "shape mismatch in *");
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

ComplexMatrix scale_rows(const DiagSpectrum& d, ComplexMatrix m) {
    if (d.size() != m.rows()) throw Error(ErrorCode::InvalidInput, "shape mismatch in scale_rows");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= d[i];
    return m;
}

ComplexMatrix scale_cols(ComplexMatrix m, const DiagSpectrum& d) {
    if (d.size() != m.cols()) throw Error(ErrorCode::InvalidInput, "shape mismatch in scale_cols");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= d[j];
    return m;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    }
    return os << ']';
}

}  // namespace schlesinger
