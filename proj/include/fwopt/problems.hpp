#pragma once

// Deterministic objectives with closed-form gradients, additive noise
// models, batch-size schedules, and the stochastic gradient oracle that
// combines them.

#include "fwopt/rng.hpp"
#include "fwopt/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fwopt {

enum class ObjectiveKind { isotropic_quadratic, convex_quadratic, matrix_quadratic, least_squares };

std::string to_string(ObjectiveKind kind);

class Objective {
public:
    /// F(x) = 0.5 ||x||^2 on vectors.
    static Objective isotropic_quadratic(std::size_t dim);
    /// F(X) = 0.5 ||X||_F^2 on matrices.
    static Objective matrix_quadratic(std::size_t rows, std::size_t cols);
    /// F(x) = 0.5 x^T A x - b^T x. A must be symmetric PSD.
    static Objective convex_quadratic(DenseMatrix a, DenseVector b);
    /// F(x) = (1/2n) sum_i (a_i . x - y_i)^2, one design row per sample.
    static Objective least_squares(DenseMatrix design, DenseVector targets);

    /// Q diag(lambda) Q^T with lambda log-spaced in [eig_min, eig_max], Q and b random.
    static Objective random_convex_quadratic(std::size_t dim, double eig_min, double eig_max,
                                             std::uint64_t seed);
    /// Gaussian design rows and targets.
    static Objective random_least_squares(std::size_t samples, std::size_t dim, std::uint64_t seed);

    ObjectiveKind kind() const noexcept { return kind_; }
    const Shape& shape() const noexcept { return shape_; }
    /// Lipschitz constant of the gradient (largest Hessian eigenvalue).
    double smoothness() const noexcept { return smoothness_; }
    /// Number of finite-sum components (least squares only; 0 otherwise).
    std::size_t samples() const noexcept { return design_.rows(); }

    double value(const ParamPoint& x) const;
    ParamPoint grad(const ParamPoint& x) const;
    /// Least-squares gradient averaged over the given sample indices.
    ParamPoint grad_subset(const ParamPoint& x, const std::vector<std::size_t>& indices) const;

private:
    Objective(ObjectiveKind kind, Shape shape) : kind_(kind), shape_(shape) {}

    ObjectiveKind kind_;
    Shape shape_;
    double smoothness_ = 1.0;
    DenseMatrix a_;      // convex quadratic Hessian
    DenseVector b_;      // convex quadratic linear term
    DenseMatrix design_; // least squares rows
    DenseVector targets_;
};

/// Closed-form gradient of the objective.
ParamPoint grad_true(const Objective& objective, const ParamPoint& x);

enum class NoiseKind { none, gaussian, pareto };

std::string to_string(NoiseKind kind);

/// Zero-mean additive noise applied i.i.d. per component.
struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double sigma = 1.0;      // gaussian standard deviation
    double tail_index = 2.5; // symmetrized Pareto tail index, > 1
    double scale = 1.0;      // symmetrized Pareto x_m

    static NoiseModel none() { return {}; }
    static NoiseModel gaussian(double sigma);
    /// |X| = scale * U^(-1/tail_index) with U ~ Uniform(0, 1], random sign.
    static NoiseModel pareto(double tail_index, double scale = 1.0);

    void validate() const;

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

enum class BatchKind { constant, warm_start };

/// Batch size m_t as a function of the step index t >= 1.
class BatchSchedule {
public:
    static BatchSchedule constant(std::size_t m);
    /// m_1 = initial, m_t = rest for t > 1.
    static BatchSchedule warm_start(std::size_t initial, std::size_t rest);
    /// m_t = ceil(T) for every t.
    static BatchSchedule horizon(std::size_t T) { return constant(T); }
    /// m_1 = ceil(T^(1/3)), m_t = 1 afterwards.
    static BatchSchedule cube_root_warm_start(std::size_t T);

    std::size_t at(std::size_t t) const noexcept { return t <= 1 ? initial_ : rest_; }
    BatchKind kind() const noexcept { return kind_; }
    std::size_t initial() const noexcept { return initial_; }
    std::size_t rest() const noexcept { return rest_; }

    friend bool operator==(const BatchSchedule&, const BatchSchedule&) = default;

private:
    BatchSchedule(BatchKind kind, std::size_t initial, std::size_t rest)
        : kind_(kind), initial_(initial), rest_(rest) {}

    BatchKind kind_;
    std::size_t initial_;
    std::size_t rest_;
};

/// ceil(x) that tolerates x landing a few ulps above an integer (e.g. 1000^(1/3)).
std::size_t ceil_count(double x);

/// Handle to the randomness of one oracle call. Replaying it at another
/// point reuses the identical noise realization / subsample.
struct SharedSample {
    std::uint64_t oracle_id = 0;
    std::size_t t = 0;
    std::size_t batch = 0;

    friend bool operator==(const SharedSample&, const SharedSample&) = default;
};

/// Stochastic gradient oracle: closed-form gradient plus batch-averaged
/// noise, or a random subsample for least squares. Every call is a pure
/// function of (seed, t, x).
class GradOracle {
public:
    GradOracle(Objective objective, NoiseModel noise, BatchSchedule batch, std::uint64_t seed);

    const Objective& objective() const noexcept { return objective_; }
    const NoiseModel& noise() const noexcept { return noise_; }
    const BatchSchedule& batch() const noexcept { return batch_; }
    std::uint64_t seed() const noexcept { return rng_.seed(); }
    /// Fingerprint of (objective kind, shape, noise, seed) stamped on samples.
    std::uint64_t id() const noexcept { return id_; }

    std::pair<ParamPoint, SharedSample> sample_grad(const ParamPoint& x, std::size_t t) const;
    /// Gradient at x under the randomness of `sample`. Throws ProvenanceError
    /// for samples issued by a different oracle.
    ParamPoint replay_grad(const ParamPoint& x, const SharedSample& sample) const;

    /// The batch-averaged additive noise realization of step t.
    ParamPoint noise_at(std::size_t t, std::size_t batch) const;

private:
    ParamPoint evaluate(const ParamPoint& x, std::size_t t, std::size_t batch) const;
    std::vector<std::size_t> subsample(std::size_t t, std::size_t batch) const;

    Objective objective_;
    NoiseModel noise_;
    BatchSchedule batch_;
    CounterRng rng_;
    std::uint64_t id_;
};

/// (1 ^ M / ||g||) g with the l2/Frobenius norm.
ParamPoint clip(const ParamPoint& g, double max_norm);

} // namespace fwopt
