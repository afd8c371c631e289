#ifndef ROTODET_MATRIX_HPP
#define ROTODET_MATRIX_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rotodet/errors.hpp"

namespace rotodet {

/// Dense row-major matrix of doubles. Small and unclever on purpose: the
/// largest matrices in this pipeline are 225x225 covariances and whole
/// images, so naive O(n^3) products are cheap.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0)
            throw ShapeMismatch("Matrix: negative dimensions");
    }

    static Matrix from_data(int rows, int cols, std::vector<double> data) {
        if (data.size() != static_cast<std::size_t>(rows) * cols)
            throw ShapeMismatch("Matrix::from_data: size does not match dimensions");
        Matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(data);
        return m;
    }

    static Matrix identity(int n) {
        Matrix m(n, n, 0.0);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const double> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<double> row(int r) {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// a * b with inner-dimension check.
Matrix multiply(const Matrix& a, const Matrix& b);

/// a * x for a column vector x (x.size() == a.cols()).
std::vector<double> multiply(const Matrix& a, std::span<const double> x);

} // namespace rotodet

#endif
