#include "fwopt/constraint.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fwopt {

std::string to_string(BallKind kind) {
    switch (kind) {
    case BallKind::linf: return "linf";
    case BallKind::l2: return "l2";
    case BallKind::spectral: return "spectral";
    }
    return "unknown";
}

ConstraintSet::ConstraintSet(BallKind kind, double radius, Shape shape)
    : kind_(kind), radius_(radius), shape_(shape) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DimensionError("ConstraintSet: radius must be positive and finite");
    }
    if (shape.size() == 0) {
        throw DimensionError("ConstraintSet: empty shape");
    }
    if ((kind == BallKind::spectral) != shape.matrix) {
        throw DimensionError("ConstraintSet: " + to_string(kind) + " ball cannot be placed on a " +
                             shape.to_string());
    }
}

ConstraintSet ConstraintSet::linf_ball(double radius, std::size_t dim) {
    return {BallKind::linf, radius, Shape::vector(dim)};
}

ConstraintSet ConstraintSet::l2_ball(double radius, std::size_t dim) {
    return {BallKind::l2, radius, Shape::vector(dim)};
}

ConstraintSet ConstraintSet::spectral_ball(double radius, std::size_t rows, std::size_t cols) {
    return {BallKind::spectral, radius, Shape::matrix_of(rows, cols)};
}

NormKind ConstraintSet::norm_kind() const noexcept {
    switch (kind_) {
    case BallKind::linf: return NormKind::linf;
    case BallKind::l2: return NormKind::l2;
    case BallKind::spectral: return NormKind::spectral;
    }
    return NormKind::l2;
}

NormKind ConstraintSet::dual_norm_kind() const noexcept {
    switch (kind_) {
    case BallKind::linf: return NormKind::l1;
    case BallKind::l2: return NormKind::l2;
    case BallKind::spectral: return NormKind::nuclear;
    }
    return NormKind::l2;
}

namespace {

void require_shape(const ConstraintSet& set, const ParamPoint& p, const char* what) {
    if (p.shape() != set.shape()) {
        throw DimensionError(std::string(what) + ": point is a " + p.shape().to_string() +
                             " but the set lives on a " + set.shape().to_string());
    }
}

struct LmoAndDual {
    ParamPoint point;
    double dual = 0.0;
};

// Shares one SVD between the spectral LMO and the nuclear norm.
LmoAndDual lmo_with_dual(const ConstraintSet& set, const ParamPoint& g) {
    const double r = set.radius();
    switch (set.kind()) {
    case BallKind::linf: {
        ParamPoint u = g;
        double l1 = 0.0;
        for (double& x : u.values()) {
            l1 += std::abs(x);
            x = x > 0.0 ? -r : (x < 0.0 ? r : 0.0);
        }
        return {std::move(u), l1};
    }
    case BallKind::l2: {
        const double n2 = euclidean_norm(g);
        if (n2 == 0.0) {
            return {ParamPoint::zeros(g.shape()), 0.0};
        }
        return {(-r / n2) * g, n2};
    }
    case BallKind::spectral: {
        const auto& a = g.matrix();
        const auto svd = svd_thin(a);
        double nuclear = 0.0;
        for (double s : svd.s.values()) {
            nuclear += s;
        }
        auto polar = polar_from_svd(svd);
        return {(-r) * ParamPoint(std::move(polar.q)), nuclear};
    }
    }
    throw DimensionError("lmo: unknown ball kind");
}

} // namespace

ParamPoint lmo(const ConstraintSet& set, const ParamPoint& g) {
    require_shape(set, g, "lmo");
    return lmo_with_dual(set, g).point;
}

double diameter(const ConstraintSet& set) {
    const double r = set.radius();
    switch (set.kind()) {
    case BallKind::linf: return 2.0 * r * std::sqrt(static_cast<double>(set.shape().size()));
    case BallKind::l2: return 2.0 * r;
    case BallKind::spectral:
        return 2.0 * r * std::sqrt(static_cast<double>(std::min(set.shape().rows, set.shape().cols)));
    }
    return 0.0;
}

double dual_norm(const ConstraintSet& set, const ParamPoint& g) {
    require_shape(set, g, "dual_norm");
    return norm(g, set.dual_norm_kind());
}

bool contains(const ConstraintSet& set, const ParamPoint& x, double tol) {
    require_shape(set, x, "contains");
    const double limit = set.radius() * (1.0 + tol);
    if (set.kind() == BallKind::spectral) {
        // Cheap upper bounds first: ||X||_2 <= ||X||_F and ||X||_2 <= sqrt(||X||_1 ||X||_inf).
        const auto& m = x.matrix();
        if (euclidean_norm(x) <= limit) {
            return true;
        }
        double max_col = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                acc += std::abs(m(i, j));
            }
            max_col = std::max(max_col, acc);
        }
        double max_row = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                acc += std::abs(m(i, j));
            }
            max_row = std::max(max_row, acc);
        }
        if (std::sqrt(max_col * max_row) <= limit) {
            return true;
        }
    }
    return norm(x, set.norm_kind()) <= limit;
}

GapReport fw_gap(const ConstraintSet& set, const ParamPoint& x, const ParamPoint& grad,
                 double feasibility_tol) {
    require_shape(set, x, "fw_gap");
    require_shape(set, grad, "fw_gap");
    if (!contains(set, x, feasibility_tol)) {
        std::ostringstream msg;
        msg << "fw_gap: x is infeasible (" << to_string(set.norm_kind())
            << " norm " << norm(x, set.norm_kind()) << " > radius " << set.radius() << ")";
        throw FeasibilityError(msg.str());
    }
    auto [point, dual] = lmo_with_dual(set, grad);
    const double xg = inner(x, grad);
    GapReport report;
    report.gap = set.radius() * dual + xg;
    report.dual_norm = dual;
    report.kkt_residual = dual + xg / set.radius();
    report.lmo_point = std::move(point);
    return report;
}

ParamPoint scale_into(const ConstraintSet& set, const ParamPoint& x) {
    require_shape(set, x, "scale_into");
    const double n = norm(x, set.norm_kind());
    if (n <= set.radius()) {
        return x;
    }
    ParamPoint out = (set.radius() / n) * x;
    // Guard the last ulp so the result satisfies contains(set, out, 0).
    while (norm(out, set.norm_kind()) > set.radius()) {
        out = (1.0 - 1e-15) * out;
    }
    return out;
}

} // namespace fwopt
