#pragma once

// Step rules for the stochastic Frank-Wolfe family and for Lion and Muon
// with their clipped ("+") and clipped variance-reduced ("++") variants.
//
// Every step is a pure function old state -> new state. The order of the
// updates inside one step follows the algorithm boxes exactly; the Lion and
// Muon trajectories coincide with the mapped SFW trajectories only under
// that order.

#include "fwopt/constraint.hpp"
#include "fwopt/problems.hpp"
#include "fwopt/schedule.hpp"
#include "fwopt/tensor.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace fwopt {

/// Parameters of the stochastic Frank-Wolfe method.
///
/// With `clip` set, the gradient entering the momentum is clipped. With
/// `variance_reduction` set, the STORM correction
/// (1 - gamma_t) 1{t >= 2} (grad f(x_t; xi_t) - grad f(x_{t-1}; xi_t))
/// is added to the momentum, always using unclipped gradients.
struct SfwParams {
    Schedule eta = Schedule::constant(0.1);
    Schedule gamma = Schedule::constant(0.1);
    Schedule beta1 = Schedule::constant(0.0);
    std::optional<double> clip;
    bool variance_reduction = false;

    /// Checks eta_t in (0, 1], gamma_t in (0, 1], beta1_t / (1 - gamma_t) in [0, 1].
    void validate_at(std::size_t t) const;
};

/// beta / (1 - gamma), with 0/0 read as 0 (the gamma = 1, beta = 0 corner).
double momentum_ratio(double beta1, double gamma);

struct SfwState {
    ParamPoint x;
    ParamPoint g; // momentum g_{t-1} before the step, g_t after
    std::optional<ParamPoint> prev_x;
    std::size_t t = 1;

    // Quantities of the most recent step.
    ParamPoint g_bar; // gradient entering the momentum (clipped if configured)
    ParamPoint g_hat; // LMO input
    ParamPoint u;     // LMO output
};

SfwState sfw_init(const ParamPoint& x1);

/// One iteration of the stochastic Frank-Wolfe method (vanilla, clipped,
/// variance-reduced, or both, depending on `params`).
SfwState sfw_step(const SfwState& state, const SfwParams& params, const ConstraintSet& set,
                  const GradOracle& oracle);

struct LionParams {
    double beta1 = 0.9;
    double beta2 = 0.99;
    Schedule lr = Schedule::constant(1e-4);
    double weight_decay = 0.0;
    std::optional<double> clip;
    bool variance_reduction = false;

    void validate() const;
};

struct LionState {
    ParamPoint x;
    ParamPoint m;
    std::optional<ParamPoint> prev_x;
    std::size_t t = 1;

    ParamPoint c;     // interpolation c_t of the most recent step
    ParamPoint g_bar; // gradient of the most recent step after clipping
};

LionState lion_init(const ParamPoint& x1);

/// Lion; Lion+ when `clip` is set; Lion++ when `variance_reduction` is also set.
LionState lion_step(const LionState& state, const LionParams& params, const GradOracle& oracle);

enum class Orthogonalizer { exact, newton_schulz };

std::string to_string(Orthogonalizer o);

struct MuonParams {
    double momentum = 0.95;
    Schedule lr = Schedule::constant(0.02);
    double weight_decay = 0.0;
    std::optional<double> clip;
    bool variance_reduction = false;
    Orthogonalizer orthogonalizer = Orthogonalizer::exact;
    std::size_t ns_iters = 20;

    void validate() const;
};

struct MuonState {
    ParamPoint x;
    ParamPoint b;
    std::optional<ParamPoint> prev_x;
    std::size_t t = 1;

    ParamPoint o;           // orthogonalized update of the most recent step
    ParamPoint g_bar;       // gradient G_t of the most recent step after clipping
    bool degenerate = false; // B_t was zero, so O_t = 0
};

MuonState muon_init(const ParamPoint& x1);

/// Muon; Muon+ when `clip` is set; Muon++ when `variance_reduction` is also set.
MuonState muon_step(const MuonState& state, const MuonParams& params, const GradOracle& oracle);

struct SfwInstance {
    SfwParams params;
    ConstraintSet set;
};

/// beta_{1,t} = beta1, gamma_t = 1 - beta2, eta_t = lambda * lr_t over the
/// l-infinity ball of radius 1/lambda. Clip and variance-reduction flags carry over.
SfwInstance map_lion_to_sfw(const LionParams& lion, std::size_t dim);

/// beta_{1,t} = mu, gamma_t = 1 - mu, eta_t = lambda * lr_t over the spectral
/// ball of radius 1/lambda.
SfwInstance map_muon_to_sfw(const MuonParams& muon, std::size_t rows, std::size_t cols);

} // namespace fwopt
