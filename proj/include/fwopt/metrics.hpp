#pragma once

// Per-run traces, cross-run order statistics, empirical rate estimation,
// and the CSV formats that carry them between processes.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fwopt {

struct StepRecord {
    std::size_t t = 0;
    double fw_gap = 0.0;
    double grad_norm = 0.0; // l2/Frobenius norm of the true gradient
    double dual_norm = 0.0; // dual norm of the true gradient
    double kkt_residual = 0.0;
    double x_norm = 0.0; // constraint norm of the iterate
};

class RunTrace {
public:
    RunTrace() = default;
    RunTrace(std::size_t run_id, std::uint64_t seed, std::string algo);

    /// Throws Error unless t exceeds the last recorded t and every value is finite.
    void push(const StepRecord& record);

    std::size_t run_id() const noexcept { return run_id_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& algo() const noexcept { return algo_; }
    const std::vector<StepRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

private:
    std::size_t run_id_ = 0;
    std::uint64_t seed_ = 0;
    std::string algo_;
    std::vector<StepRecord> records_;
};

/// Mean of fw_gap over the recorded steps. Throws Error on an empty trace.
double average_gap(const RunTrace& trace);
/// Mean of grad_norm over the recorded steps. Throws Error on an empty trace.
double average_grad_norm(const RunTrace& trace);

/// Running arithmetic mean with a left-to-right sum, so that feeding values
/// one at a time gives the same bits as averaging the whole sequence.
class StreamingMean {
public:
    void add(double v) noexcept {
        sum_ += v;
        ++count_;
    }
    std::size_t count() const noexcept { return count_; }
    /// Throws Error when nothing was added.
    double mean() const;

private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

/// q-quantile by the nearest-rank rule: sorted[ceil(q N)] (1-indexed, clamped to [1, N]).
double nearest_rank(std::span<const double> sorted, double q);

struct QuantileStats {
    double lower = 0.0;  // delta quantile
    double median = 0.0; // 0.5 quantile
    double upper = 0.0;  // 1 - delta quantile
};

/// Order statistics of one checkpoint across runs. Throws Error on empty
/// input or delta outside (0, 0.5).
QuantileStats quantile_band(std::span<const double> values, double delta);

struct QuantileBand {
    double delta = 0.0;
    std::vector<double> checkpoints;
    std::vector<QuantileStats> stats;
};

/// Least-squares slope of log(metric) against log(T). Needs at least three
/// pairs; throws Error on a nonpositive T or metric.
double rate_slope(std::span<const std::pair<double, double>> pairs);

/// Decimal text with 17 significant digits ("%.17g"); reads back to the same double.
std::string format_double(double v);

inline constexpr const char* kTraceCsvHeader = "run_id,seed,algo,t,fw_gap,grad_norm,dual_norm,kkt_residual,x_norm";
inline constexpr const char* kSummaryCsvHeader = "run_id,seed,algo,t,avg_grad_norm,avg_gap";

void write_trace_csv(std::ostream& out, std::span<const RunTrace> traces);
/// Throws ParseError naming the line on malformed input.
std::vector<RunTrace> read_trace_csv(std::istream& in);

/// Running averages of one run at one checkpoint t: the mean true-gradient
/// norm over steps 1..t and the mean gap over the gaps recorded up to t.
struct SummaryRow {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::string algo;
    std::size_t t = 0;
    double avg_grad_norm = 0.0;
    double avg_gap = 0.0;
};

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
/// Throws ParseError naming the line on malformed input.
std::vector<SummaryRow> read_summary_csv(std::istream& in);

} // namespace fwopt
