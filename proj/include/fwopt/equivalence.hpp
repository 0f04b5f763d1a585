#pragma once

// Side-by-side runs of Lion / Muon (and their clipped and variance-reduced
// variants) against the stochastic Frank-Wolfe instance they map to, on a
// shared gradient oracle.

#include "fwopt/optimizers.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fwopt {

enum class EquivalencePair { lion, lion_plus, lion_pp, muon, muon_plus, muon_pp };

std::string to_string(EquivalencePair pair);
/// Accepts lion, lion+, lion++, muon, muon+, muon++. Throws ConfigError otherwise.
EquivalencePair parse_equivalence_pair(const std::string& text);
bool is_muon(EquivalencePair pair);

struct EquivalenceOptions {
    std::size_t trials = 10;
    /// Pass threshold on max_t ||x_t - x_t^SFW||_inf / (1 + ||x_t||_inf);
    /// <= 0 selects the default (1e-10 for Lion pairs, 1e-8 for Muon pairs).
    double tolerance = 0.0;
    std::uint64_t seed = 1;
    /// 0 selects the default horizon (200 for Lion pairs, 100 for Muon pairs).
    std::size_t horizon = 0;
    Orthogonalizer orthogonalizer = Orthogonalizer::exact;
    std::size_t ns_iters = 20;
};

struct TrialReport {
    std::uint64_t seed = 0;
    double max_deviation = 0.0;       // relative iterate deviation, max over t
    double max_state_deviation = 0.0; // momentum: |m - g| (Lion) or |(1 - mu) B - g| (Muon), sup norm
    bool pass = false;
};

struct EquivalenceReport {
    EquivalencePair pair = EquivalencePair::lion;
    double tolerance = 0.0;
    std::size_t horizon = 0;
    std::vector<TrialReport> trials;
    bool pass = false;

    std::string describe() const;
};

/// Lion pairs: d = 50 convex quadratic with Gaussian noise (sigma = 1),
/// beta = (0.9, 0.99), lr = 0.01, weight decay 1, clip 2 for the "+" forms.
/// Muon pairs: 8 x 12 matrix quadratic with Gaussian noise (sigma = 1),
/// mu = 0.95, lr = 0.05, weight decay 0.1, clip 3 for the "+" forms.
/// Trial i uses seed options.seed + i for the problem, the start and the oracle.
EquivalenceReport check_equivalence(EquivalencePair pair, const EquivalenceOptions& options);

} // namespace fwopt
