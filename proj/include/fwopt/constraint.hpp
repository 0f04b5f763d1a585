#pragma once

#include "fwopt/tensor.hpp"

#include <string>

namespace fwopt {

enum class BallKind { linf, l2, spectral };

std::string to_string(BallKind kind);

/// Norm ball {x : ||x|| <= radius} over a fixed shape. The l-infinity and l2
/// balls live on vectors, the spectral ball on matrices.
class ConstraintSet {
public:
    ConstraintSet(BallKind kind, double radius, Shape shape);

    static ConstraintSet linf_ball(double radius, std::size_t dim);
    static ConstraintSet l2_ball(double radius, std::size_t dim);
    static ConstraintSet spectral_ball(double radius, std::size_t rows, std::size_t cols);

    BallKind kind() const noexcept { return kind_; }
    double radius() const noexcept { return radius_; }
    const Shape& shape() const noexcept { return shape_; }

    /// Norm whose ball this is.
    NormKind norm_kind() const noexcept;
    /// Dual of norm_kind(): l1, l2, or nuclear.
    NormKind dual_norm_kind() const noexcept;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
    BallKind kind_;
    double radius_;
    Shape shape_;
};

inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// argmin over the ball of <v, g>. Zero coordinates of g map to zero in the
/// l-infinity ball; the zero gradient maps to the origin for every kind.
ParamPoint lmo(const ConstraintSet& set, const ParamPoint& g);

/// l2/Frobenius diameter of the ball.
double diameter(const ConstraintSet& set);

double dual_norm(const ConstraintSet& set, const ParamPoint& g);

struct GapReport {
    double gap = 0.0;
    ParamPoint lmo_point;
    double kkt_residual = 0.0;
    double dual_norm = 0.0; // ||grad||_*
};

/// Frank-Wolfe gap max_{v in C} <v - x, -grad>, evaluated through the
/// closed form radius * ||grad||_* + <x, grad>. kkt_residual is
/// ||grad||_* - <-x, grad> / radius, which vanishes exactly at KKT points.
/// Throws FeasibilityError if x violates the set beyond `feasibility_tol`.
GapReport fw_gap(const ConstraintSet& set, const ParamPoint& x, const ParamPoint& grad,
                 double feasibility_tol = kDefaultFeasibilityTol);

/// True iff the set's norm of x is at most radius * (1 + tol).
bool contains(const ConstraintSet& set, const ParamPoint& x, double tol = 0.0);

/// Radially rescales x onto the ball if it lies outside; returns x unchanged otherwise.
ParamPoint scale_into(const ConstraintSet& set, const ParamPoint& x);

} // namespace fwopt
