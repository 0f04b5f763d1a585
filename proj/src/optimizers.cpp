#include "fwopt/optimizers.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fwopt {

namespace {

// Slack for coefficient ratios that equal 1 mathematically but not in floating point.
constexpr double kRatioSlack = 1e-12;

std::string at_step(const char* what, std::size_t t) {
    return std::string(what) + " (t=" + std::to_string(t) + ")";
}

void require_finite(const ParamPoint& p, const char* op, const char* quantity, std::size_t t) {
    if (!all_finite(p)) {
        throw NumericalError(at_step(op, t) + ": non-finite " + quantity);
    }
}

double sign(double v) {
    if (v > 0.0) {
        return 1.0;
    }
    if (v < 0.0) {
        return -1.0;
    }
    return 0.0;
}

ParamPoint sign_of(const ParamPoint& p) {
    ParamPoint out = p;
    for (double& v : out.values()) {
        v = sign(v);
    }
    return out;
}

bool is_zero(const ParamPoint& p) {
    for (double v : p.values()) {
        if (v != 0.0) {
            return false;
        }
    }
    return true;
}

struct DrawnGradient {
    ParamPoint raw;
    ParamPoint clipped;
    std::optional<ParamPoint> correction; // unclipped grad f(x_t) - grad f(x_{t-1}), same sample
};

DrawnGradient draw(const GradOracle& oracle, const ParamPoint& x, const std::optional<ParamPoint>& prev_x,
                   std::size_t t, const std::optional<double>& clip_m, bool vr, const char* op) {
    auto [raw, sample] = oracle.sample_grad(x, t);
    require_finite(raw, op, "stochastic gradient", t);
    DrawnGradient out{raw, clip_m ? clip(raw, *clip_m) : raw, std::nullopt};
    if (vr && t >= 2) {
        if (!prev_x) {
            throw Error(at_step(op, t) + ": variance reduction needs the previous iterate");
        }
        ParamPoint prev_grad = oracle.replay_grad(*prev_x, sample);
        require_finite(prev_grad, op, "replayed gradient", t);
        out.correction = raw - prev_grad;
    }
    return out;
}

void check_clip(const std::optional<double>& clip_m, const char* where) {
    if (clip_m && !(*clip_m > 0.0 && std::isfinite(*clip_m))) {
        throw ConfigError(std::string(where) + ": clip threshold must be positive and finite");
    }
}

void check_decayed_step(const Schedule& lr, double weight_decay, std::size_t t, const char* op) {
    const double eta = lr.at(t);
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw StepSizeError(at_step(op, t) + ": learning rate must be positive, got " + std::to_string(eta));
    }
    if (weight_decay * eta > 1.0) {
        throw StepSizeError(at_step(op, t) + ": weight_decay * lr = " + std::to_string(weight_decay * eta) +
                            " exceeds 1");
    }
}

void check_schedule_bound(const Schedule& lr, double weight_decay, const char* where) {
    if (!lr.bounded_known()) {
        return;
    }
    if (!(lr.min_value() > 0.0)) {
        throw StepSizeError(std::string(where) + ": learning rate must be positive");
    }
    if (weight_decay * lr.max_value() > 1.0) {
        throw StepSizeError(std::string(where) + ": weight_decay * lr exceeds 1");
    }
}

} // namespace

double momentum_ratio(double beta1, double gamma) {
    if (gamma == 1.0) {
        return beta1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return beta1 / (1.0 - gamma);
}

void SfwParams::validate_at(std::size_t t) const {
    const double e = eta.at(t);
    if (!(e > 0.0 && e <= 1.0)) {
        throw StepSizeError(at_step("sfw", t) + ": eta must lie in (0, 1], got " + std::to_string(e));
    }
    const double g = gamma.at(t);
    if (!(g > 0.0 && g <= 1.0)) {
        throw ConfigError(at_step("sfw", t) + ": gamma must lie in (0, 1], got " + std::to_string(g));
    }
    const double b = beta1.at(t);
    const double ratio = momentum_ratio(b, g);
    if (!(b >= 0.0) || !(ratio <= 1.0 + kRatioSlack)) {
        throw ConfigError(at_step("sfw", t) + ": beta1 / (1 - gamma) must lie in [0, 1], got " +
                          std::to_string(ratio));
    }
    check_clip(clip, "sfw");
}

SfwState sfw_init(const ParamPoint& x1) {
    SfwState s;
    s.x = x1;
    s.g = ParamPoint::zeros(x1.shape());
    return s;
}

SfwState sfw_step(const SfwState& state, const SfwParams& params, const ConstraintSet& set,
                  const GradOracle& oracle) {
    const std::size_t t = state.t;
    if (t == 0) {
        throw Error("sfw_step: t must start at 1");
    }
    params.validate_at(t);
    if (!contains(set, state.x, kDefaultFeasibilityTol)) {
        throw FeasibilityError(at_step("sfw_step", t) + ": iterate lies outside the constraint set");
    }
    const double eta = params.eta.at(t);
    const double gamma = params.gamma.at(t);
    const double ratio = std::min(momentum_ratio(params.beta1.at(t), gamma), 1.0);

    DrawnGradient d = draw(oracle, state.x, state.prev_x, t, params.clip, params.variance_reduction, "sfw_step");

    SfwState next;
    next.g = lincomb(1.0 - gamma, state.g, gamma, d.clipped);
    if (d.correction) {
        next.g = next.g + (1.0 - gamma) * *d.correction;
    }
    next.g_hat = lincomb(ratio, next.g, 1.0 - ratio, d.clipped);
    next.u = lmo(set, next.g_hat);
    next.x = lincomb(1.0 - eta, state.x, eta, next.u);
    require_finite(next.x, "sfw_step", "iterate", t);
    next.prev_x = state.x;
    next.t = t + 1;
    next.g_bar = std::move(d.clipped);
    return next;
}

void LionParams::validate() const {
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("lion: beta1 and beta2 must lie in [0, 1)");
    }
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
        throw ConfigError("lion: weight_decay must be nonnegative");
    }
    check_clip(clip, "lion");
    check_schedule_bound(lr, weight_decay, "lion");
}

LionState lion_init(const ParamPoint& x1) {
    LionState s;
    s.x = x1;
    s.m = ParamPoint::zeros(x1.shape());
    return s;
}

LionState lion_step(const LionState& state, const LionParams& params, const GradOracle& oracle) {
    const std::size_t t = state.t;
    if (t == 0) {
        throw Error("lion_step: t must start at 1");
    }
    check_decayed_step(params.lr, params.weight_decay, t, "lion_step");
    const double eta = params.lr.at(t);
    const double b1 = params.beta1;
    const double b2 = params.beta2;

    DrawnGradient d = draw(oracle, state.x, state.prev_x, t, params.clip, params.variance_reduction, "lion_step");

    LionState next;
    next.c = lincomb(b1, state.m, 1.0 - b1, d.clipped);
    if (d.correction) {
        next.c = next.c + b1 * *d.correction;
    }
    next.x = state.x - eta * (sign_of(next.c) + params.weight_decay * state.x);
    next.m = lincomb(b2, state.m, 1.0 - b2, d.clipped);
    if (d.correction) {
        next.m = next.m + b2 * *d.correction;
    }
    require_finite(next.x, "lion_step", "iterate", t);
    next.prev_x = state.x;
    next.t = t + 1;
    next.g_bar = std::move(d.clipped);
    return next;
}

std::string to_string(Orthogonalizer o) {
    return o == Orthogonalizer::exact ? "exact" : "newton_schulz";
}

void MuonParams::validate() const {
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ConfigError("muon: momentum must lie in [0, 1)");
    }
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
        throw ConfigError("muon: weight_decay must be nonnegative");
    }
    if (orthogonalizer == Orthogonalizer::newton_schulz && ns_iters == 0) {
        throw ConfigError("muon: ns_iters must be positive");
    }
    check_clip(clip, "muon");
    check_schedule_bound(lr, weight_decay, "muon");
}

MuonState muon_init(const ParamPoint& x1) {
    if (!x1.is_matrix()) {
        throw DimensionError("muon: parameters must be a matrix");
    }
    MuonState s;
    s.x = x1;
    s.b = ParamPoint::zeros(x1.shape());
    return s;
}

MuonState muon_step(const MuonState& state, const MuonParams& params, const GradOracle& oracle) {
    const std::size_t t = state.t;
    if (t == 0) {
        throw Error("muon_step: t must start at 1");
    }
    if (!state.x.is_matrix()) {
        throw DimensionError("muon_step: parameters must be a matrix");
    }
    check_decayed_step(params.lr, params.weight_decay, t, "muon_step");
    const double eta = params.lr.at(t);
    const double mu = params.momentum;

    DrawnGradient d = draw(oracle, state.x, state.prev_x, t, params.clip, params.variance_reduction, "muon_step");

    MuonState next;
    next.b = mu * state.b + d.clipped;
    if (d.correction) {
        next.b = next.b + (mu / (1.0 - mu)) * *d.correction;
    }
    require_finite(next.b, "muon_step", "momentum", t);
    if (is_zero(next.b)) {
        next.o = ParamPoint::zeros(next.b.shape());
        next.degenerate = true;
    } else if (params.orthogonalizer == Orthogonalizer::exact) {
        PolarFactor pf = polar_factor_exact(next.b.matrix());
        next.o = std::move(pf.q);
        next.degenerate = pf.degenerate;
    } else {
        next.o = polar_factor_newton_schulz(next.b.matrix(), params.ns_iters);
    }
    next.x = state.x - eta * (next.o + params.weight_decay * state.x);
    require_finite(next.x, "muon_step", "iterate", t);
    next.prev_x = state.x;
    next.t = t + 1;
    next.g_bar = std::move(d.clipped);
    return next;
}

namespace {

void check_mapping_decay(double weight_decay, const char* where) {
    if (!(weight_decay > 0.0) || !std::isfinite(weight_decay)) {
        throw MappingDomainError(std::string(where) + ": the mapping needs weight_decay > 0");
    }
}

} // namespace

SfwInstance map_lion_to_sfw(const LionParams& lion, std::size_t dim) {
    check_mapping_decay(lion.weight_decay, "map_lion_to_sfw");
    if (lion.beta1 > lion.beta2) {
        throw MappingDomainError("map_lion_to_sfw: beta1 > beta2 puts beta1/beta2 outside [0, 1]");
    }
    lion.validate();
    SfwParams p;
    p.eta = lion.lr.scaled(lion.weight_decay);
    p.gamma = Schedule::constant(1.0 - lion.beta2);
    p.beta1 = Schedule::constant(lion.beta1);
    p.clip = lion.clip;
    p.variance_reduction = lion.variance_reduction;
    return {p, ConstraintSet::linf_ball(1.0 / lion.weight_decay, dim)};
}

SfwInstance map_muon_to_sfw(const MuonParams& muon, std::size_t rows, std::size_t cols) {
    check_mapping_decay(muon.weight_decay, "map_muon_to_sfw");
    muon.validate();
    SfwParams p;
    p.eta = muon.lr.scaled(muon.weight_decay);
    p.gamma = Schedule::constant(1.0 - muon.momentum);
    p.beta1 = Schedule::constant(muon.momentum);
    p.clip = muon.clip;
    p.variance_reduction = muon.variance_reduction;
    return {p, ConstraintSet::spectral_ball(1.0 / muon.weight_decay, rows, cols)};
}

} // namespace fwopt
