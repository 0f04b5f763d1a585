#include "fwopt/problems.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace fwopt {

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
    case ObjectiveKind::isotropic_quadratic: return "isotropic_quadratic";
    case ObjectiveKind::convex_quadratic: return "convex_quadratic";
    case ObjectiveKind::matrix_quadratic: return "matrix_quadratic";
    case ObjectiveKind::least_squares: return "least_squares";
    }
    return "unknown";
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::pareto: return "pareto";
    }
    return "unknown";
}

namespace {

// Smallest eigenvalue check for a symmetric matrix: Cholesky of A + shift I.
bool cholesky_succeeds(const DenseMatrix& a, double shift) {
    const std::size_t n = a.rows();
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j) + shift;
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            return false;
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, const CounterRng& rng,
                            std::uint64_t stream) {
    DenseMatrix out(rows, cols);
    auto v = out.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = rng.normal(stream, i);
    }
    return out;
}

} // namespace

Objective Objective::isotropic_quadratic(std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("isotropic_quadratic: dimension must be positive");
    }
    return {ObjectiveKind::isotropic_quadratic, Shape::vector(dim)};
}

Objective Objective::matrix_quadratic(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix_quadratic: shape must be positive");
    }
    return {ObjectiveKind::matrix_quadratic, Shape::matrix_of(rows, cols)};
}

Objective Objective::convex_quadratic(DenseMatrix a, DenseVector b) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n || b.dim() != n) {
        throw DimensionError("convex_quadratic: A must be square and match b");
    }
    double amax = 0.0;
    for (double x : a.values()) {
        amax = std::max(amax, std::abs(x));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * (1.0 + amax)) {
                throw NumericalError("convex_quadratic: A is not symmetric");
            }
        }
    }
    if (!cholesky_succeeds(a, 1e-10)) {
        throw NumericalError("convex_quadratic: A is not positive semidefinite");
    }
    Objective obj(ObjectiveKind::convex_quadratic, Shape::vector(n));
    obj.smoothness_ = svd_thin(a).s[0];
    obj.a_ = std::move(a);
    obj.b_ = std::move(b);
    return obj;
}

Objective Objective::least_squares(DenseMatrix design, DenseVector targets) {
    if (design.rows() == 0 || design.cols() == 0 || targets.dim() != design.rows()) {
        throw DimensionError("least_squares: need one target per design row");
    }
    Objective obj(ObjectiveKind::least_squares, Shape::vector(design.cols()));
    const double smax = svd_thin(design).s[0];
    obj.smoothness_ = smax * smax / static_cast<double>(design.rows());
    obj.design_ = std::move(design);
    obj.targets_ = std::move(targets);
    return obj;
}

Objective Objective::random_convex_quadratic(std::size_t dim, double eig_min, double eig_max,
                                             std::uint64_t seed) {
    if (!(eig_min >= 0.0) || !(eig_max >= eig_min)) {
        throw NumericalError("random_convex_quadratic: need 0 <= eig_min <= eig_max");
    }
    const CounterRng rng(seed);
    const DenseMatrix q = polar_factor_exact(gaussian_matrix(dim, dim, rng, 0)).q;
    std::vector<double> eig(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double frac = dim == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(dim - 1);
        eig[i] = eig_min == 0.0 ? eig_max * frac
                                : eig_min * std::pow(eig_max / eig_min, frac);
    }
    DenseMatrix qd = q;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            qd(i, j) *= eig[j];
        }
    }
    DenseMatrix a = matmul_nt(qd, q);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    }
    DenseVector b(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        b[i] = rng.normal(1, i);
    }
    return convex_quadratic(std::move(a), std::move(b));
}

Objective Objective::random_least_squares(std::size_t samples, std::size_t dim, std::uint64_t seed) {
    const CounterRng rng(seed);
    DenseMatrix design = gaussian_matrix(samples, dim, rng, 0);
    DenseVector targets(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        targets[i] = rng.normal(1, i);
    }
    return least_squares(std::move(design), std::move(targets));
}

double Objective::value(const ParamPoint& x) const {
    if (x.shape() != shape_) {
        throw DimensionError("Objective::value: expected " + shape_.to_string() + ", got " +
                             x.shape().to_string());
    }
    switch (kind_) {
    case ObjectiveKind::isotropic_quadratic:
    case ObjectiveKind::matrix_quadratic: return 0.5 * inner(x, x);
    case ObjectiveKind::convex_quadratic: {
        const ParamPoint ax(matvec(a_, x.vector()));
        return 0.5 * inner(x, ax) - inner(x, ParamPoint(b_));
    }
    case ObjectiveKind::least_squares: {
        const DenseVector r = matvec(design_, x.vector());
        double acc = 0.0;
        for (std::size_t i = 0; i < r.dim(); ++i) {
            const double e = r[i] - targets_[i];
            acc += e * e;
        }
        return 0.5 * acc / static_cast<double>(r.dim());
    }
    }
    return 0.0;
}

ParamPoint Objective::grad(const ParamPoint& x) const {
    if (x.shape() != shape_) {
        throw DimensionError("grad_true: expected " + shape_.to_string() + ", got " +
                             x.shape().to_string());
    }
    switch (kind_) {
    case ObjectiveKind::isotropic_quadratic:
    case ObjectiveKind::matrix_quadratic: return x;
    case ObjectiveKind::convex_quadratic: {
        DenseVector g = matvec(a_, x.vector());
        for (std::size_t i = 0; i < g.dim(); ++i) {
            g[i] -= b_[i];
        }
        return ParamPoint(std::move(g));
    }
    case ObjectiveKind::least_squares: {
        std::vector<std::size_t> all(design_.rows());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        return grad_subset(x, all);
    }
    }
    throw DimensionError("grad_true: unknown objective");
}

ParamPoint Objective::grad_subset(const ParamPoint& x, const std::vector<std::size_t>& indices) const {
    if (kind_ != ObjectiveKind::least_squares) {
        throw DimensionError("grad_subset: only defined for least squares");
    }
    if (x.shape() != shape_) {
        throw DimensionError("grad_subset: expected " + shape_.to_string() + ", got " +
                             x.shape().to_string());
    }
    if (indices.empty()) {
        throw DimensionError("grad_subset: empty subsample");
    }
    const auto& xv = x.vector();
    const std::size_t d = design_.cols();
    DenseVector g(d);
    for (std::size_t idx : indices) {
        double residual = -targets_[idx];
        for (std::size_t j = 0; j < d; ++j) {
            residual += design_(idx, j) * xv[j];
        }
        for (std::size_t j = 0; j < d; ++j) {
            g[j] += design_(idx, j) * residual;
        }
    }
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (std::size_t j = 0; j < d; ++j) {
        g[j] *= inv;
    }
    return ParamPoint(std::move(g));
}

ParamPoint grad_true(const Objective& objective, const ParamPoint& x) {
    return objective.grad(x);
}

NoiseModel NoiseModel::gaussian(double sigma) {
    NoiseModel n;
    n.kind = NoiseKind::gaussian;
    n.sigma = sigma;
    n.validate();
    return n;
}

NoiseModel NoiseModel::pareto(double tail_index, double scale) {
    NoiseModel n;
    n.kind = NoiseKind::pareto;
    n.tail_index = tail_index;
    n.scale = scale;
    n.validate();
    return n;
}

void NoiseModel::validate() const {
    if (kind == NoiseKind::gaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
        throw ConfigError("noise.sigma: must be positive");
    }
    if (kind == NoiseKind::pareto) {
        if (!(tail_index > 1.0 && std::isfinite(tail_index))) {
            throw ConfigError("noise.tail_index: must exceed 1");
        }
        if (!(scale > 0.0 && std::isfinite(scale))) {
            throw ConfigError("noise.scale: must be positive");
        }
    }
}

BatchSchedule BatchSchedule::constant(std::size_t m) {
    if (m == 0) {
        throw ConfigError("batch.size: must be positive");
    }
    return {BatchKind::constant, m, m};
}

BatchSchedule BatchSchedule::warm_start(std::size_t initial, std::size_t rest) {
    if (initial == 0 || rest == 0) {
        throw ConfigError("batch: warm-start sizes must be positive");
    }
    return {BatchKind::warm_start, initial, rest};
}

BatchSchedule BatchSchedule::cube_root_warm_start(std::size_t T) {
    return warm_start(ceil_count(std::cbrt(static_cast<double>(T))), 1);
}

std::size_t ceil_count(double x) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<std::size_t>(std::max(1.0, nearest));
    }
    return static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
}

namespace {

constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kSubsampleStream = 1;

std::uint64_t stream_for(std::size_t t, std::uint64_t purpose) {
    return (static_cast<std::uint64_t>(t) << 2) | purpose;
}

std::uint64_t fingerprint(const Objective& obj, const NoiseModel& noise, std::uint64_t seed) {
    std::uint64_t h = mix64(seed);
    auto fold = [&h](std::uint64_t v) { h = mix64(h ^ v); };
    fold(static_cast<std::uint64_t>(obj.kind()));
    fold(obj.shape().rows);
    fold(obj.shape().cols);
    fold(static_cast<std::uint64_t>(noise.kind));
    fold(std::bit_cast<std::uint64_t>(noise.sigma));
    fold(std::bit_cast<std::uint64_t>(noise.tail_index));
    fold(std::bit_cast<std::uint64_t>(noise.scale));
    fold(obj.samples());
    return h;
}

} // namespace

GradOracle::GradOracle(Objective objective, NoiseModel noise, BatchSchedule batch, std::uint64_t seed)
    : objective_(std::move(objective)), noise_(noise), batch_(batch), rng_(seed),
      id_(fingerprint(objective_, noise_, seed)) {
    noise_.validate();
}

ParamPoint GradOracle::noise_at(std::size_t t, std::size_t batch) const {
    ParamPoint out = ParamPoint::zeros(objective_.shape());
    auto v = out.values();
    const std::uint64_t stream = stream_for(t, kNoiseStream);
    switch (noise_.kind) {
    case NoiseKind::none: break;
    case NoiseKind::gaussian: {
        // The mean of m i.i.d. N(0, s^2) draws is N(0, s^2 / m) exactly.
        const double sd = noise_.sigma / std::sqrt(static_cast<double>(batch));
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = sd * rng_.normal(stream, i);
        }
        break;
    }
    case NoiseKind::pareto: {
        const double inv_tail = -1.0 / noise_.tail_index;
        for (std::size_t j = 0; j < batch; ++j) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::uint64_t c = 2 * (static_cast<std::uint64_t>(j) * v.size() + i);
                const double magnitude = noise_.scale * std::pow(rng_.uniform_pos(stream, c), inv_tail);
                const bool negative = (rng_.bits(stream, c + 1) >> 63) != 0;
                v[i] += negative ? -magnitude : magnitude;
            }
        }
        if (batch > 1) {
            const double inv = 1.0 / static_cast<double>(batch);
            for (double& x : v) {
                x *= inv;
            }
        }
        break;
    }
    }
    return out;
}

std::vector<std::size_t> GradOracle::subsample(std::size_t t, std::size_t batch) const {
    const std::size_t n = objective_.samples();
    std::vector<std::size_t> idx(batch);
    const std::uint64_t stream = stream_for(t, kSubsampleStream);
    for (std::size_t j = 0; j < batch; ++j) {
        const auto k = static_cast<std::size_t>(rng_.uniform(stream, j) * static_cast<double>(n));
        idx[j] = std::min(k, n - 1);
    }
    return idx;
}

ParamPoint GradOracle::evaluate(const ParamPoint& x, std::size_t t, std::size_t batch) const {
    ParamPoint g = objective_.kind() == ObjectiveKind::least_squares
                       ? objective_.grad_subset(x, subsample(t, batch))
                       : objective_.grad(x);
    if (noise_.kind != NoiseKind::none) {
        g = g + noise_at(t, batch);
    }
    return g;
}

std::pair<ParamPoint, SharedSample> GradOracle::sample_grad(const ParamPoint& x, std::size_t t) const {
    if (t == 0) {
        throw Error("sample_grad: step index starts at 1");
    }
    const std::size_t m = batch_.at(t);
    return {evaluate(x, t, m), SharedSample{id_, t, m}};
}

ParamPoint GradOracle::replay_grad(const ParamPoint& x, const SharedSample& sample) const {
    if (sample.oracle_id != id_ || sample.t == 0 || sample.batch != batch_.at(sample.t)) {
        throw ProvenanceError("replay_grad: sample was not issued by this oracle");
    }
    return evaluate(x, sample.t, sample.batch);
}

ParamPoint clip(const ParamPoint& g, double max_norm) {
    if (!(max_norm > 0.0)) {
        throw Error("clip: threshold must be positive");
    }
    const double n = euclidean_norm(g);
    if (n <= max_norm) {
        return g;
    }
    ParamPoint out = (max_norm / n) * g;
    // Rounding can leave the result one ulp above the threshold.
    while (euclidean_norm(out) > max_norm) {
        out = (1.0 - 0x1.0p-52) * out;
    }
    return out;
}

} // namespace fwopt
