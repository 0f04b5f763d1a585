#pragma once

// Dense real vectors and matrices, the ParamPoint union over them, and the
// inner products and norms used throughout the library. All reductions are
// sequential left-to-right sums in double precision so that results are
// reproducible bit-for-bit across runs.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fwopt {

enum class NormKind { l1, l2, linf, frobenius, spectral, nuclear };

std::string to_string(NormKind kind);

class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t dim, double fill = 0.0);
    explicit DenseVector(std::vector<double> data);
    DenseVector(std::initializer_list<double> values);

    std::size_t dim() const noexcept { return data_.size(); }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    friend bool operator==(const DenseVector&, const DenseVector&) = default;

private:
    std::vector<double> data_;
};

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::initializer_list<double> diag);
    static DenseMatrix diagonal(std::span<const double> diag, std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    DenseMatrix transposed() const;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T without materializing the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool matrix = false;

    static Shape vector(std::size_t dim) { return {dim, 1, false}; }
    static Shape matrix_of(std::size_t rows, std::size_t cols) { return {rows, cols, true}; }

    std::size_t size() const noexcept { return rows * cols; }
    std::string to_string() const;

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// A point in the parameter space: either a vector or a matrix. Arithmetic
/// is only defined between points with identical shape.
class ParamPoint {
public:
    ParamPoint() = default;
    ParamPoint(DenseVector v) : value_(std::move(v)) {}
    ParamPoint(DenseMatrix m) : value_(std::move(m)) {}

    static ParamPoint zeros(const Shape& shape);

    bool is_matrix() const noexcept { return std::holds_alternative<DenseMatrix>(value_); }
    Shape shape() const;
    std::size_t size() const noexcept { return values().size(); }

    const DenseVector& vector() const;
    const DenseMatrix& matrix() const;

    std::span<const double> values() const noexcept;
    std::span<double> values() noexcept;

    friend bool operator==(const ParamPoint&, const ParamPoint&) = default;

private:
    std::variant<DenseVector, DenseMatrix> value_;
};

/// Throws DimensionError unless a and b have the same tag and shape.
void require_same_shape(const ParamPoint& a, const ParamPoint& b, const char* what);

double inner(const ParamPoint& a, const ParamPoint& b);
double norm(const ParamPoint& a, NormKind kind);
/// l2 for vectors, Frobenius for matrices.
double euclidean_norm(const ParamPoint& a);

ParamPoint operator+(const ParamPoint& a, const ParamPoint& b);
ParamPoint operator-(const ParamPoint& a, const ParamPoint& b);
ParamPoint operator*(double c, const ParamPoint& a);
/// Returns alpha * a + beta * b, evaluated elementwise as written.
ParamPoint lincomb(double alpha, const ParamPoint& a, double beta, const ParamPoint& b);

bool all_finite(const ParamPoint& a) noexcept;
/// Largest absolute elementwise difference.
double max_abs_diff(const ParamPoint& a, const ParamPoint& b);

} // namespace fwopt
