#pragma once

#include "fwopt/metrics.hpp"

#include <string>
#include <vector>

namespace fwopt {

/// Quantile bands of avg_grad_norm across runs, per algorithm and checkpoint.
struct AlgorithmBand {
    std::string algo;
    QuantileBand band;
};

/// Groups rows by algorithm (in order of first appearance) and computes the
/// delta / median / 1 - delta band at every checkpoint t.
std::vector<AlgorithmBand> summarize_bands(const std::vector<SummaryRow>& rows, double delta);

/// 800 x 500 SVG with a log-scale y axis: a shaded band plus median, lower
/// and upper polylines per algorithm, and a legend in input order.
std::string render_svg(const std::vector<AlgorithmBand>& bands);

/// Reads summary CSVs in order; parse errors name the file and line.
std::vector<SummaryRow> load_summaries(const std::vector<std::string>& paths);

} // namespace fwopt
