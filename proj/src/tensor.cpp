#include "fwopt/tensor.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fwopt {

std::string to_string(NormKind kind) {
    switch (kind) {
    case NormKind::l1: return "l1";
    case NormKind::l2: return "l2";
    case NormKind::linf: return "linf";
    case NormKind::frobenius: return "frobenius";
    case NormKind::spectral: return "spectral";
    case NormKind::nuclear: return "nuclear";
    }
    return "unknown";
}

DenseVector::DenseVector(std::size_t dim, double fill) : data_(dim, fill) {}

DenseVector::DenseVector(std::vector<double> data) : data_(std::move(data)) {}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

DenseMatrix DenseMatrix::diagonal(std::initializer_list<double> diag) {
    const std::vector<double> d(diag);
    return diagonal(d, d.size(), d.size());
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag, std::size_t rows, std::size_t cols) {
    DenseMatrix out(rows, cols);
    const std::size_t k = std::min({rows, cols, diag.size()});
    for (std::size_t i = 0; i < k; ++i) {
        out(i, i) = diag[i];
    }
    return out;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("matmul_tn: row counts differ");
    }
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = a(k, i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aki * b(k, j);
            }
        }
    }
    return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw DimensionError("matmul_nt: column counts differ");
    }
    DenseMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(i, k) * b(j, k);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
    if (a.cols() != x.dim()) {
        throw DimensionError("matvec: dimension mismatch");
    }
    DenseVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a(i, j) * x[j];
        }
        out[i] = acc;
    }
    return out;
}

std::string Shape::to_string() const {
    if (matrix) {
        return std::to_string(rows) + "x" + std::to_string(cols) + " matrix";
    }
    return "vector[" + std::to_string(rows) + "]";
}

ParamPoint ParamPoint::zeros(const Shape& shape) {
    if (shape.matrix) {
        return ParamPoint(DenseMatrix(shape.rows, shape.cols));
    }
    return ParamPoint(DenseVector(shape.rows));
}

Shape ParamPoint::shape() const {
    if (const auto* m = std::get_if<DenseMatrix>(&value_)) {
        return Shape::matrix_of(m->rows(), m->cols());
    }
    return Shape::vector(std::get<DenseVector>(value_).dim());
}

const DenseVector& ParamPoint::vector() const {
    if (const auto* v = std::get_if<DenseVector>(&value_)) {
        return *v;
    }
    throw DimensionError("ParamPoint: expected a vector, found " + shape().to_string());
}

const DenseMatrix& ParamPoint::matrix() const {
    if (const auto* m = std::get_if<DenseMatrix>(&value_)) {
        return *m;
    }
    throw DimensionError("ParamPoint: expected a matrix, found " + shape().to_string());
}

std::span<const double> ParamPoint::values() const noexcept {
    return std::visit([](const auto& x) { return x.values(); }, value_);
}

std::span<double> ParamPoint::values() noexcept {
    return std::visit([](auto& x) { return x.values(); }, value_);
}

void require_same_shape(const ParamPoint& a, const ParamPoint& b, const char* what) {
    if (a.shape() != b.shape()) {
        throw DimensionError(std::string(what) + ": shape mismatch (" + a.shape().to_string() +
                             " vs " + b.shape().to_string() + ")");
    }
}

double inner(const ParamPoint& a, const ParamPoint& b) {
    require_same_shape(a, b, "inner");
    const auto x = a.values();
    const auto y = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

namespace {

double sum_abs(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += std::abs(x);
    }
    return acc;
}

double sum_squares(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return acc;
}

// Plain sum of squares, rescaled by the largest magnitude only when the
// plain sum under- or overflows.
double euclidean(std::span<const double> v) {
    const double plain = sum_squares(v);
    if (plain >= std::numeric_limits<double>::min() && plain <= std::numeric_limits<double>::max()) {
        return std::sqrt(plain);
    }
    double scale = 0.0;
    for (double x : v) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0 || !std::isfinite(scale)) {
        return scale;
    }
    double acc = 0.0;
    for (double x : v) {
        acc += (x / scale) * (x / scale);
    }
    return scale * std::sqrt(acc);
}

} // namespace

double norm(const ParamPoint& a, NormKind kind) {
    const bool vector_kind = kind == NormKind::l1 || kind == NormKind::l2 || kind == NormKind::linf;
    if (vector_kind == a.is_matrix()) {
        throw InvalidNormError("norm: " + to_string(kind) + " is not defined for a " +
                               a.shape().to_string());
    }
    switch (kind) {
    case NormKind::l1: return sum_abs(a.values());
    case NormKind::l2:
    case NormKind::frobenius: return euclidean(a.values());
    case NormKind::linf: {
        double best = 0.0;
        for (double x : a.values()) {
            best = std::max(best, std::abs(x));
        }
        return best;
    }
    case NormKind::spectral:
    case NormKind::nuclear: {
        const auto s = svd_thin(a.matrix()).s;
        if (s.dim() == 0) {
            return 0.0;
        }
        return kind == NormKind::spectral ? s[0] : sum_abs(s.values());
    }
    }
    throw InvalidNormError("norm: unknown kind");
}

double euclidean_norm(const ParamPoint& a) {
    return euclidean(a.values());
}

ParamPoint lincomb(double alpha, const ParamPoint& a, double beta, const ParamPoint& b) {
    require_same_shape(a, b, "lincomb");
    ParamPoint out = a;
    auto o = out.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = alpha * o[i] + beta * y[i];
    }
    return out;
}

ParamPoint operator+(const ParamPoint& a, const ParamPoint& b) {
    require_same_shape(a, b, "operator+");
    ParamPoint out = a;
    auto o = out.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] += y[i];
    }
    return out;
}

ParamPoint operator-(const ParamPoint& a, const ParamPoint& b) {
    require_same_shape(a, b, "operator-");
    ParamPoint out = a;
    auto o = out.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] -= y[i];
    }
    return out;
}

ParamPoint operator*(double c, const ParamPoint& a) {
    ParamPoint out = a;
    for (double& x : out.values()) {
        x *= c;
    }
    return out;
}

bool all_finite(const ParamPoint& a) noexcept {
    return std::all_of(a.values().begin(), a.values().end(),
                       [](double x) { return std::isfinite(x); });
}

double max_abs_diff(const ParamPoint& a, const ParamPoint& b) {
    require_same_shape(a, b, "max_abs_diff");
    const auto x = a.values();
    const auto y = b.values();
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        best = std::max(best, std::abs(x[i] - y[i]));
    }
    return best;
}

} // namespace fwopt
