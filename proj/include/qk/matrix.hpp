#pragma once

#include <vector>

#include "qk/error.hpp"
#include "qk/rational.hpp"

namespace qk {

// Dense matrix over an arbitrary exact ring T. T needs +, -, *, == and an
// is_zero(); rings whose zero carries shape (ExpPoly with a variable count)
// pass a prototype zero element.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, const T& zero = T())
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, zero) {}

    static Matrix identity(int n, const T& zero = T(), const T& one = T(1)) {
        Matrix m(n, n, zero);
        for (int i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    Matrix& operator+=(const Matrix& o) {
        check_shape(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_shape(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        require(a.cols_ == b.rows_, "DimensionMismatch", "matrix product shape");
        Matrix r(a.rows_, b.cols_, a.zero_like());
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    if (b(k, j).is_zero()) continue;
                    r(i, j) += aik * b(k, j);
                }
            }
        return r;
    }
    Matrix& operator*=(const Matrix& o) { return *this = *this * o; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    template <class S>
    Matrix scaled(const S& c) const {
        Matrix r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        require(static_cast<int>(v.size()) == cols_, "DimensionMismatch", "matrix-vector shape");
        std::vector<T> r(rows_, zero_like());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !v[j].is_zero()) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Matrix transposed() const {
        Matrix r(cols_, rows_, zero_like());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<T> column(int j) const {
        std::vector<T> v(rows_, zero_like());
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_column(int j, const std::vector<T>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    // Entry-wise map into another ring.
    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(data_[0]));
        Matrix<U> r(rows_, cols_, U());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    T zero_like() const {
        if (!data_.empty()) {
            T z = data_[0];
            z -= data_[0];
            return z;
        }
        return T();
    }

    Matrix pow(long e) const {
        require(rows_ == cols_ && e >= 0, "DimensionMismatch", "matrix power");
        T z = zero_like();
        Matrix acc = identity(rows_, z, z + T(1));
        Matrix base = *this;
        long n = e;
        while (n) {
            if (n & 1) acc *= base;
            if (n >>= 1) base *= base;
        }
        return acc;
    }

private:
    void check_shape(const Matrix& o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, "DimensionMismatch", "matrix shapes differ");
    }
    int rows_, cols_;
    std::vector<T> data_;
};

// Gauss-Jordan inverse over a ring with division on pivots. The
// `ring_inverse` hook must fail loudly on non-invertible pivots.
template <class T, class InvFn>
Matrix<T> matrix_inverse(const Matrix<T>& m, InvFn ring_inverse) {
    require(m.rows() == m.cols(), "DimensionMismatch", "inverse of non-square matrix");
    int n = m.rows();
    T zero = m.zero_like();
    Matrix<T> a = m;
    Matrix<T> inv = Matrix<T>::identity(n, zero, zero + T(1));
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!a(i, col).is_zero()) {
                piv = i;
                break;
            }
        require(piv >= 0, "SingularLeadingTerm", "matrix not invertible");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        T pinv = ring_inverse(a(col, col));
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * pinv;
            inv(col, j) = inv(col, j) * pinv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero()) continue;
            T f = a(i, col);
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline Matrix<Rational> rational_matrix_inverse(const Matrix<Rational>& m) {
    return matrix_inverse(m, [](const Rational& x) { return x.inverse(); });
}

}  // namespace qk
