#pragma once

#include "gstruct/error.hpp"
#include "gstruct/rational.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace gstruct {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Rational& x) { return std::abs(to_double(x)); }
/// Bound on every stored coefficient; for plain scalars the magnitude.
inline double norm_bound(double x) { return std::abs(x); }
inline double norm_bound(const Rational& x) { return magnitude(x); }

/// Small dense row-major matrix. Sizes are desk scale (<= 8), so no expression templates.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw InvalidArgument("ragged matrix initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n, const T& one = T(1), const T& zero = T(0)) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_, zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    template <class U>
    Matrix& operator*=(const U& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    template <class U>
    friend Matrix operator*(Matrix a, const U& s)
        requires(!std::is_same_v<U, Matrix>)
    {
        return a *= s;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_, a.zero_like());
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw InvalidArgument("matrix-vector dimension mismatch");
        std::vector<T> out(rows_, zero_like());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    T trace() const {
        T t = zero_like();
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, magnitude(x));
        return m;
    }

    T zero_like() const { return T(0); }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
    return a * b - b * a;
}

/// Gauss-Jordan inverse with partial pivoting on the magnitude of the leading value.
template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw InvalidArgument("inverse of non-square matrix");
    Matrix<T> a = m;
    const T zero = m.zero_like();
    Matrix<T> inv(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = T(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = magnitude(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (magnitude(a(r, col)) > best) {
                best = magnitude(a(r, col));
                piv = r;
            }
        }
        if (best == 0.0) throw InvalidArgument("singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const T p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const T f = a(r, col);
            if (magnitude(f) == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Matrix exponential by scaling and squaring of the Taylor series. Works for
/// any entry type with ring operations and scalar multiplication by double.
template <class T>
Matrix<T> expm(const Matrix<T>& x) {
    const std::size_t n = x.rows();
    if (x.cols() != n) throw InvalidArgument("expm of non-square matrix");
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0;
        for (std::size_t j = 0; j < n; ++j) row += norm_bound(x(i, j));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    Matrix<T> a = x * std::ldexp(1.0, -squarings);
    const T zero = x.zero_like();
    Matrix<T> result(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) result(i, i) = T(1);
    Matrix<T> term = result;
    for (int k = 1; k <= 30; ++k) {
        term = term * a;
        term *= 1.0 / k;
        result += term;
        double size = 0;
        for (const auto& e : term.data()) size = std::max(size, norm_bound(e));
        if (size < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

/// Plain Taylor partial sums, used as the reference for expm on small arguments.
template <class T>
Matrix<T> exp_series(const Matrix<T>& x, int terms) {
    const std::size_t n = x.rows();
    const T zero = x.zero_like();
    Matrix<T> result(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) result(i, i) = T(1);
    Matrix<T> term = result;
    for (int k = 1; k <= terms; ++k) {
        term = term * x;
        term *= 1.0 / k;
        result += term;
    }
    return result;
}

template <class To, class From>
Matrix<To> matrix_cast(const Matrix<From>& m) {
    Matrix<To> out(m.rows(), m.cols(), To(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if constexpr (std::is_same_v<From, Rational> && !std::is_same_v<To, Rational>)
                out(i, j) = To(to_double(m(i, j)));
            else
                out(i, j) = To(m(i, j));
        }
    return out;
}

}  // namespace gstruct
