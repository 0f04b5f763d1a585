#include "fwopt/linalg.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace fwopt {

namespace {

using Column = std::vector<double>;

double dot(const Column& a, const Column& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

// Rotations are skipped once the pair is orthogonal to this relative level.
constexpr double kRotationThreshold = 1e-15;

struct JacobiOutcome {
    std::vector<Column> cols; // A V, column by column
    std::vector<Column> v;    // accumulated right rotations, column by column
    std::size_t sweeps = 0;
};

// One-sided Jacobi on a tall p x q matrix (p >= q) given as q columns.
JacobiOutcome one_sided_jacobi(std::vector<Column> cols, const SvdOptions& options) {
    const std::size_t q = cols.size();
    std::vector<Column> v(q, Column(q, 0.0));
    for (std::size_t i = 0; i < q; ++i) {
        v[i][i] = 1.0;
    }

    double frob2 = 0.0;
    for (const auto& c : cols) {
        frob2 += dot(c, c);
    }

    std::size_t sweep = 0;
    double off = 0.0;
    while (true) {
        if (sweep == options.max_sweeps) {
            std::ostringstream msg;
            msg << "svd_thin: no convergence after " << sweep
                << " sweeps; off-diagonal mass " << std::sqrt(off) << " vs tolerance "
                << options.tolerance * frob2;
            throw NumericalError(msg.str());
        }
        ++sweep;
        off = 0.0;
        std::size_t rotations = 0;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            for (std::size_t j = i + 1; j < q; ++j) {
                const double alpha = dot(cols[i], cols[i]);
                const double beta = dot(cols[j], cols[j]);
                const double gamma = dot(cols[i], cols[j]);
                off += gamma * gamma;
                if (gamma == 0.0 || std::abs(gamma) <= kRotationThreshold * std::sqrt(alpha * beta)) {
                    continue;
                }
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < cols[i].size(); ++k) {
                    const double xi = cols[i][k];
                    const double xj = cols[j][k];
                    cols[i][k] = c * xi - s * xj;
                    cols[j][k] = s * xi + c * xj;
                }
                for (std::size_t k = 0; k < q; ++k) {
                    const double xi = v[i][k];
                    const double xj = v[j][k];
                    v[i][k] = c * xi - s * xj;
                    v[j][k] = s * xi + c * xj;
                }
                ++rotations;
            }
        }
        // off-diagonal mass of the Gram matrix, compared in squared units of A
        if (rotations == 0 || std::sqrt(off) <= options.tolerance * frob2) {
            break;
        }
    }
    return {std::move(cols), std::move(v), sweep};
}

// Orthonormalizes `basis` in order with two passes of modified Gram-Schmidt.
// Columns that collapse (zero singular value) are replaced by the standard
// basis vector with the largest component orthogonal to the accepted ones.
void orthonormalize(std::vector<Column>& basis) {
    const std::size_t p = basis.empty() ? 0 : basis.front().size();
    auto project_out = [&](Column& c, std::size_t upto) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < upto; ++k) {
                const double r = dot(basis[k], c);
                for (std::size_t i = 0; i < p; ++i) {
                    c[i] -= r * basis[k][i];
                }
            }
        }
    };
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Column c = basis[j];
        const double before = std::sqrt(dot(c, c));
        project_out(c, j);
        double after = std::sqrt(dot(c, c));
        if (before == 0.0 || after < 0.5 * before) {
            double best = -1.0;
            Column chosen;
            for (std::size_t e = 0; e < p; ++e) {
                Column cand(p, 0.0);
                cand[e] = 1.0;
                project_out(cand, j);
                const double len = std::sqrt(dot(cand, cand));
                if (len > best) {
                    best = len;
                    chosen = std::move(cand);
                }
            }
            c = std::move(chosen);
            after = best;
        }
        for (double& x : c) {
            x /= after;
        }
        basis[j] = std::move(c);
    }
}

} // namespace

SvdResult svd_thin(const DenseMatrix& a, const SvdOptions& options) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m == 0 || n == 0) {
        throw DimensionError("svd_thin: empty matrix");
    }
    for (double x : a.values()) {
        if (!std::isfinite(x)) {
            throw NumericalError("svd_thin: non-finite entry in input");
        }
    }

    // Work on the tall orientation: columns of A if m >= n, else columns of A^T.
    const bool tall = m >= n;
    const std::size_t p = tall ? m : n;
    const std::size_t q = tall ? n : m;
    std::vector<Column> cols(q, Column(p));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (tall) {
                cols[j][i] = a(i, j);
            } else {
                cols[i][j] = a(i, j);
            }
        }
    }

    auto outcome = one_sided_jacobi(std::move(cols), options);

    std::vector<double> sigma(q);
    for (std::size_t j = 0; j < q; ++j) {
        sigma[j] = std::sqrt(dot(outcome.cols[j], outcome.cols[j]));
    }
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    std::vector<Column> left(q);
    std::vector<Column> right(q);
    DenseVector s(q);
    for (std::size_t r = 0; r < q; ++r) {
        const std::size_t j = order[r];
        s[r] = sigma[j];
        left[r] = outcome.cols[j];
        if (sigma[j] > 0.0) {
            for (double& x : left[r]) {
                x /= sigma[j];
            }
        }
        right[r] = outcome.v[j];
    }
    orthonormalize(left);

    // left spans the tall side (length p), right the short side (length q).
    const std::size_t k = q;
    DenseMatrix u(m, k);
    DenseMatrix v(n, k);
    for (std::size_t r = 0; r < k; ++r) {
        const Column& tall_vec = left[r];
        const Column& short_vec = right[r];
        for (std::size_t i = 0; i < m; ++i) {
            u(i, r) = tall ? tall_vec[i] : short_vec[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            v(i, r) = tall ? short_vec[i] : tall_vec[i];
        }
    }
    return {std::move(u), std::move(s), std::move(v), outcome.sweeps};
}

DenseMatrix reconstruct(const SvdResult& svd) {
    DenseMatrix us = svd.u;
    for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t r = 0; r < us.cols(); ++r) {
            us(i, r) *= svd.s[r];
        }
    }
    return matmul_nt(us, svd.v);
}

PolarFactor polar_from_svd(const SvdResult& svd) {
    const std::size_t m = svd.u.rows();
    const std::size_t n = svd.v.rows();
    DenseMatrix q(m, n);
    const double smax = svd.s[0];
    if (smax == 0.0) {
        return {std::move(q), true};
    }
    const double cutoff = kPolarRankCutoff * smax;
    for (std::size_t r = 0; r < svd.s.dim() && svd.s[r] > cutoff; ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            const double ui = svd.u(i, r);
            for (std::size_t j = 0; j < n; ++j) {
                q(i, j) += ui * svd.v(j, r);
            }
        }
    }
    return {std::move(q), false};
}

PolarFactor polar_factor_exact(const DenseMatrix& a) {
    return polar_from_svd(svd_thin(a));
}

DenseMatrix polar_factor_newton_schulz(const DenseMatrix& a, std::size_t iters) {
    const double fro = norm(ParamPoint(a), NormKind::frobenius);
    if (fro == 0.0) {
        throw DegenerateInputError("polar_factor_newton_schulz: zero matrix has no polar factor");
    }
    if (!std::isfinite(fro)) {
        throw NumericalError("polar_factor_newton_schulz: non-finite input");
    }
    DenseMatrix x = a;
    for (double& e : x.values()) {
        e /= fro;
    }
    const bool wide = a.rows() <= a.cols();
    for (std::size_t it = 0; it < iters; ++it) {
        // Gram on the smaller side keeps the product cheap.
        const DenseMatrix cubic = wide ? matmul(matmul_nt(x, x), x) : matmul(x, matmul_tn(x, x));
        auto xv = x.values();
        const auto cv = cubic.values();
        for (std::size_t i = 0; i < xv.size(); ++i) {
            xv[i] = 1.5 * xv[i] - 0.5 * cv[i];
        }
    }
    return x;
}

} // namespace fwopt
