#include "rotodet/matrix.hpp"

namespace rotodet {

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeMismatch("multiply: inner dimensions differ");
    Matrix out(a.rows(), b.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (static_cast<std::size_t>(a.cols()) != x.size())
        throw ShapeMismatch("multiply: vector length does not match matrix columns");
    std::vector<double> out(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        auto r = a.row(i);
        for (int j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
        out[i] = acc;
    }
    return out;
}

} // namespace rotodet
