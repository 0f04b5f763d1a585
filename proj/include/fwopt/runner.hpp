#pragma once

#include "fwopt/config.hpp"
#include "fwopt/metrics.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fwopt {

struct ExperimentResult {
    std::vector<RunTrace> traces;   // in seed order
    std::vector<SummaryRow> summary; // in seed order, then by t
    std::vector<std::string> warnings;
};

/// Worker count: FWOPT_THREADS if set (must be a positive integer), else the
/// hardware concurrency; never more than `jobs`.
std::size_t worker_count(std::size_t jobs);

/// Runs config.runs independent trajectories with seeds seed, seed+1, ...
/// The result does not depend on `threads`.
///
/// Every iterate is checked against the constraint set to tolerance 1e-9.
/// The gap and the other per-step metrics are recorded at t = 1, 1 + k,
/// 1 + 2k, ... and at t = T, where k = config.gap_every. Summary rows are
/// emitted at the same checkpoints; avg_grad_norm there averages the true
/// gradient norm over every step up to t, avg_gap the recorded gaps.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads);

/// Writes traces.csv and summary.csv into `dir`, creating it if needed.
void write_experiment(const ExperimentResult& result, const std::string& dir);

} // namespace fwopt
