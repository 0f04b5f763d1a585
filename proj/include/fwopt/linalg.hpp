#pragma once

#include "fwopt/tensor.hpp"

#include <cstddef>

namespace fwopt {

/// Thin SVD A = U diag(S) V^T with k = min(m, n).
struct SvdResult {
    DenseMatrix u;       // m x k, orthonormal columns
    DenseVector s;       // k singular values, nonincreasing
    DenseMatrix v;       // n x k, orthonormal columns
    std::size_t sweeps = 0;
};

struct SvdOptions {
    double tolerance = 1e-14;
    std::size_t max_sweeps = 60;
};

/// One-sided Jacobi SVD on the smaller dimension with cyclic sweep order.
/// Throws NumericalError when the sweep cap is hit before convergence, or
/// when the input holds non-finite values.
SvdResult svd_thin(const DenseMatrix& a, const SvdOptions& options = {});

DenseMatrix reconstruct(const SvdResult& svd);

struct PolarFactor {
    DenseMatrix q;
    /// Set when the input was the zero matrix; q is then zero as well.
    bool degenerate = false;
};

/// Relative cutoff below which singular directions are dropped from the polar factor.
inline constexpr double kPolarRankCutoff = 1e-12;

/// Semi-orthogonal factor U V^T of the polar decomposition, i.e. the
/// Frobenius-nearest semi-orthogonal matrix. Singular triplets with
/// sigma_i <= 1e-12 * sigma_max contribute zero.
PolarFactor polar_factor_exact(const DenseMatrix& a);

/// Polar factor assembled from an existing thin SVD (same cutoff rule).
PolarFactor polar_from_svd(const SvdResult& svd);

inline constexpr std::size_t kDefaultNewtonSchulzIters = 20;

/// Cubic Newton-Schulz iteration X <- 1.5 X - 0.5 X X^T X started from
/// A / ||A||_F. Throws DegenerateInputError on the zero matrix.
DenseMatrix polar_factor_newton_schulz(const DenseMatrix& a,
                                       std::size_t iters = kDefaultNewtonSchulzIters);

} // namespace fwopt
