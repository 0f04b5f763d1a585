#pragma once

// Step-size, momentum, batch, and clipping schedules prescribed by the
// convergence theorems for the stochastic Frank-Wolfe family.

#include "fwopt/optimizers.hpp"
#include "fwopt/problems.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fwopt {

enum class PresetName { thm33, cor31, thm41, cor42, thm43, thm44 };

std::string to_string(PresetName name);
/// Throws ConfigError for unknown names.
PresetName parse_preset_name(const std::string& text);

/// Problem constants. Which ones are required depends on the preset:
/// every preset needs D; thm43/thm44 also need L, G, sigma, p and delta.
struct PresetConstants {
    std::optional<double> D;
    std::optional<double> L;
    std::optional<double> G;
    std::optional<double> sigma;
    double p = 2.0;
    double delta = 0.05;

    /// Batch size m for thm33 and thm41 (m_t for t > 1).
    std::size_t batch = 1;
    /// thm33/cor31 leave the momentum weights free; these are the values used.
    double gamma = 0.01;
    double beta1 = 0.9;
};

struct Preset {
    PresetName name;
    std::size_t horizon = 0;
    double eta_raw = 0.0; // value of the formula before clamping into (0, 1]
    double eta = 0.0;
    double gamma = 0.0;
    double beta1 = 0.0;
    std::optional<double> clip;
    bool variance_reduction = false;
    BatchSchedule batch = BatchSchedule::constant(1);
    /// Individual terms of the minimum defining eta (thm43/thm44 only).
    std::vector<std::pair<std::string, double>> eta_terms;

    SfwParams params() const;
    /// Human-readable listing, one "key = value" line per quantity.
    std::string describe() const;
};

/// Throws ConfigError for T < 2, missing or out-of-range constants, or an
/// eta formula that evaluates to a nonpositive value.
Preset make_preset(PresetName name, std::size_t T, const PresetConstants& constants);

} // namespace fwopt
