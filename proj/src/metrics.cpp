#include "fwopt/metrics.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace fwopt {

RunTrace::RunTrace(std::size_t run_id, std::uint64_t seed, std::string algo)
    : run_id_(run_id), seed_(seed), algo_(std::move(algo)) {}

void RunTrace::push(const StepRecord& r) {
    if (r.t == 0 || (!records_.empty() && r.t <= records_.back().t)) {
        throw Error("RunTrace::push: t must increase strictly from 1, got " + std::to_string(r.t));
    }
    for (double v : {r.fw_gap, r.grad_norm, r.dual_norm, r.kkt_residual, r.x_norm}) {
        if (!std::isfinite(v)) {
            throw NumericalError("RunTrace::push: non-finite value at t=" + std::to_string(r.t));
        }
    }
    records_.push_back(r);
}

double StreamingMean::mean() const {
    if (count_ == 0) {
        throw Error("StreamingMean: no values");
    }
    return sum_ / static_cast<double>(count_);
}

double average_gap(const RunTrace& trace) {
    if (trace.empty()) {
        throw Error("average_gap: empty trace");
    }
    StreamingMean m;
    for (const auto& r : trace.records()) {
        m.add(r.fw_gap);
    }
    return m.mean();
}

double average_grad_norm(const RunTrace& trace) {
    if (trace.empty()) {
        throw Error("average_grad_norm: empty trace");
    }
    StreamingMean m;
    for (const auto& r : trace.records()) {
        m.add(r.grad_norm);
    }
    return m.mean();
}

double nearest_rank(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw Error("nearest_rank: empty input");
    }
    const double n = static_cast<double>(sorted.size());
    // q*N lands a few ulps above an integer for q = 0.9, N = 100 and the like.
    double rank = std::ceil(q * n - 1e-9);
    rank = std::clamp(rank, 1.0, n);
    return sorted[static_cast<std::size_t>(rank) - 1];
}

QuantileStats quantile_band(std::span<const double> values, double delta) {
    if (values.empty()) {
        throw Error("quantile_band: no runs");
    }
    if (!(delta > 0.0 && delta < 0.5)) {
        throw Error("quantile_band: delta must lie in (0, 0.5)");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return {nearest_rank(sorted, delta), nearest_rank(sorted, 0.5), nearest_rank(sorted, 1.0 - delta)};
}

double rate_slope(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 3) {
        throw Error("rate_slope: need at least three horizons");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [T, metric] : pairs) {
        if (!(T > 0.0) || !(metric > 0.0)) {
            throw Error("rate_slope: horizons and metrics must be positive");
        }
        sx += std::log(T);
        sy += std::log(metric);
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [T, metric] : pairs) {
        const double dx = std::log(T) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(metric) - my);
    }
    if (sxx == 0.0) {
        throw Error("rate_slope: horizons must not all be equal");
    }
    return sxy / sxx;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

template <class Int>
Int parse_int(const std::string& s, std::size_t line_no, const char* field) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        fail(line_no, std::string("bad integer in field '") + field + "': '" + s + "'");
    }
    return v;
}

double parse_real(const std::string& s, std::size_t line_no, const char* field) {
    if (s.empty()) {
        fail(line_no, std::string("empty field '") + field + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        fail(line_no, std::string("bad number in field '") + field + "': '" + s + "'");
    }
    return v;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

void expect_header(std::istream& in, const char* header) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(1, "missing header");
    }
    if (strip_cr(line) != header) {
        fail(1, std::string("unexpected header, expected '") + header + "'");
    }
}

} // namespace

void write_trace_csv(std::ostream& out, std::span<const RunTrace> traces) {
    out << kTraceCsvHeader << '\n';
    for (const RunTrace& tr : traces) {
        for (const StepRecord& r : tr.records()) {
            out << tr.run_id() << ',' << tr.seed() << ',' << tr.algo() << ',' << r.t << ',' << format_double(r.fw_gap)
                << ',' << format_double(r.grad_norm) << ',' << format_double(r.dual_norm) << ','
                << format_double(r.kkt_residual) << ',' << format_double(r.x_norm) << '\n';
        }
    }
}

std::vector<RunTrace> read_trace_csv(std::istream& in) {
    expect_header(in, kTraceCsvHeader);
    std::vector<RunTrace> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 9) {
            fail(line_no, "expected 9 fields, got " + std::to_string(f.size()));
        }
        const auto run_id = parse_int<std::size_t>(f[0], line_no, "run_id");
        const auto seed = parse_int<std::uint64_t>(f[1], line_no, "seed");
        if (out.empty() || out.back().run_id() != run_id || out.back().seed() != seed || out.back().algo() != f[2]) {
            out.emplace_back(run_id, seed, f[2]);
        }
        StepRecord r;
        r.t = parse_int<std::size_t>(f[3], line_no, "t");
        r.fw_gap = parse_real(f[4], line_no, "fw_gap");
        r.grad_norm = parse_real(f[5], line_no, "grad_norm");
        r.dual_norm = parse_real(f[6], line_no, "dual_norm");
        r.kkt_residual = parse_real(f[7], line_no, "kkt_residual");
        r.x_norm = parse_real(f[8], line_no, "x_norm");
        try {
            out.back().push(r);
        } catch (const Error& e) {
            fail(line_no, e.what());
        }
    }
    return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << kSummaryCsvHeader << '\n';
    for (const SummaryRow& r : rows) {
        out << r.run_id << ',' << r.seed << ',' << r.algo << ',' << r.t << ',' << format_double(r.avg_grad_norm)
            << ',' << format_double(r.avg_gap) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    expect_header(in, kSummaryCsvHeader);
    std::vector<SummaryRow> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 6) {
            fail(line_no, "expected 6 fields, got " + std::to_string(f.size()));
        }
        SummaryRow r;
        r.run_id = parse_int<std::size_t>(f[0], line_no, "run_id");
        r.seed = parse_int<std::uint64_t>(f[1], line_no, "seed");
        r.algo = f[2];
        if (r.algo.empty()) {
            fail(line_no, "empty field 'algo'");
        }
        r.t = parse_int<std::size_t>(f[3], line_no, "t");
        r.avg_grad_norm = parse_real(f[4], line_no, "avg_grad_norm");
        r.avg_gap = parse_real(f[5], line_no, "avg_gap");
        if (!std::isfinite(r.avg_grad_norm) || !std::isfinite(r.avg_gap)) {
            fail(line_no, "non-finite value");
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace fwopt
