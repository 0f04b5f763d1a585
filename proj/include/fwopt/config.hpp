#pragma once

// Experiment configuration: a flat, line-oriented "key = value" format with
// dotted section keys. Blank lines and lines starting with '#' are ignored.
// Unknown keys, keys that do not apply to the chosen objective / noise /
// algorithm, and duplicate keys are all rejected with a ConfigError naming
// the key.

#include "fwopt/constraint.hpp"
#include "fwopt/linalg.hpp"
#include "fwopt/optimizers.hpp"
#include "fwopt/presets.hpp"
#include "fwopt/problems.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace fwopt {

enum class AlgorithmFamily { sfw, lion, muon };

/// One of: sfw, sfw_vr, sfw_clip, sfw_clip_vr, lion, lion+, lion++, muon, muon+, muon++.
struct AlgorithmId {
    AlgorithmFamily family = AlgorithmFamily::sfw;
    bool clip = false;
    bool variance_reduction = false;

    std::string name() const;
    static AlgorithmId parse(const std::string& name);

    friend bool operator==(const AlgorithmId&, const AlgorithmId&) = default;
};

enum class StartKind { zeros, constant, gaussian };
enum class ScheduleKind { constant, cosine };

struct ExperimentConfig {
    // objective
    ObjectiveKind objective = ObjectiveKind::isotropic_quadratic;
    std::size_t dim = 10;
    std::size_t rows = 4;
    std::size_t cols = 4;
    std::size_t samples = 100;
    double eig_min = 0.1;
    double eig_max = 10.0;
    std::uint64_t objective_seed = 0;

    NoiseModel noise;

    std::size_t batch_size = 1;
    std::optional<std::size_t> batch_initial;

    // constraint (SFW family only; Lion/Muon use the ball of radius 1/weight_decay)
    BallKind constraint = BallKind::linf;
    double radius = 1.0;

    AlgorithmId algorithm;
    std::optional<PresetName> preset;
    PresetConstants preset_constants; // D, L, G, sigma left empty are derived from the problem

    double eta = 0.1; // SFW step size, or Lion/Muon learning rate
    ScheduleKind schedule = ScheduleKind::constant;
    double eta_min = 0.0; // cosine floor
    double gamma = 0.1;
    double beta1 = 0.0; // SFW beta_{1,t}; Lion beta1
    double beta2 = 0.99;
    double momentum = 0.95;
    double weight_decay = 1.0;
    double clip = 1.0;
    Orthogonalizer orthogonalizer = Orthogonalizer::exact;
    std::size_t ns_iters = kDefaultNewtonSchulzIters;

    std::size_t horizon = 100;
    std::size_t runs = 1;
    std::uint64_t seed = 1;
    std::size_t gap_every = 1;
    std::string output = "out";

    StartKind start = StartKind::zeros;
    double start_value = 0.0; // constant fill, or gaussian standard deviation
    std::uint64_t start_seed = 0;

    /// Stable tag used in CSV output, e.g. "lion++" or "sfw/thm33".
    std::string tag() const;
};

/// Splits text into key/value pairs. Throws ConfigError on syntax errors
/// and duplicate keys (message carries the line number).
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Parses and validates a full configuration.
ExperimentConfig parse_config(const std::string& text);

/// Canonical form: every key that applies to the configuration, sorted,
/// one "key = value" line each, numbers in shortest round-trip form.
std::string serialize_config(const ExperimentConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string shortest_double(double v);

// Builders turning a validated configuration into library objects.

Objective make_objective(const ExperimentConfig& config);
/// The SFW constraint, or for Lion/Muon the ball of radius 1/weight_decay
/// that their iterates provably stay in.
ConstraintSet make_constraint(const ExperimentConfig& config);
/// Preset resolved against the problem: D defaults to the ball diameter,
/// L to the objective smoothness, G to ||grad F(0)|| + L D / 2, and sigma to
/// the Gaussian noise norm sigma sqrt(size) (0 without noise).
Preset resolve_preset(const ExperimentConfig& config);
BatchSchedule make_batch(const ExperimentConfig& config);
SfwParams make_sfw_params(const ExperimentConfig& config);
LionParams make_lion_params(const ExperimentConfig& config);
MuonParams make_muon_params(const ExperimentConfig& config);
/// Start point before any projection onto the constraint.
ParamPoint make_start(const ExperimentConfig& config);

} // namespace fwopt
