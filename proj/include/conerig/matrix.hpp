#pragma once

// Dense complex matrices, row-major. Everything in this library is small
// (dimension <= a few dozen), so no blocking or expression templates: plain
// loops keep the numerics auditable.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conerig {

using Complex = std::complex<double>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    static Matrix identity(std::size_t n) {
        Matrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix& operator+=(const Matrix& other) {
        check_same_shape(other, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& other) {
        check_same_shape(other, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
        return *this;
    }
    Matrix& operator*=(Complex scalar) {
        for (auto& x : data_) x *= scalar;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= Complex(s, 0.0); }
    friend Matrix operator*(double s, Matrix a) { return a *= Complex(s, 0.0); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product: inner dimensions " +
                                        std::to_string(a.cols_) + " and " +
                                        std::to_string(b.rows_) + " do not match");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    Matrix adjoint() const {
        Matrix result(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) result(j, i) = std::conj((*this)(i, j));
        return result;
    }

    Matrix transpose() const {
        Matrix result(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) result(j, i) = (*this)(i, j);
        return result;
    }

    Matrix conj() const {
        Matrix result(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) result.data_[k] = std::conj(data_[k]);
        return result;
    }

    Complex trace() const {
        require_square("trace");
        Complex t(0.0, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& x : data_) s += std::norm(x);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : data_) m = std::max(m, std::abs(x));
        return m;
    }

    bool all_finite() const {
        for (const auto& x : data_)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        return true;
    }

    // max |A - B| entrywise; shapes must agree
    double max_abs_diff(const Matrix& other) const {
        check_same_shape(other, "max_abs_diff");
        double m = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k)
            m = std::max(m, std::abs(data_[k] - other.data_[k]));
        return m;
    }

    void require_square(const char* what) const {
        if (!is_square())
            throw std::invalid_argument(std::string(what) + ": matrix is " +
                                        std::to_string(rows_) + "x" + std::to_string(cols_) +
                                        ", expected square");
    }

private:
    void check_same_shape(const Matrix& other, const char* what) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                        std::to_string(rows_) + "x" + std::to_string(cols_) +
                                        " vs " + std::to_string(other.rows_) + "x" +
                                        std::to_string(other.cols_));
    }

    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

}  // namespace conerig
