#include "fwopt/runner.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

namespace fwopt {

namespace {

struct RunContext {
    const ExperimentConfig& config;
    const Objective& objective;
    const ConstraintSet& set;
    const BatchSchedule& batch;
    const ParamPoint& start;
};

struct RunOutput {
    RunTrace trace;
    std::vector<SummaryRow> summary;
};

bool checkpoint(std::size_t t, std::size_t T, std::size_t every) {
    return (t - 1) % every == 0 || t == T;
}

template <class State, class Step>
RunOutput drive(const RunContext& ctx, std::size_t run_id, std::uint64_t seed, State state, Step step) {
    const std::size_t T = ctx.config.horizon;
    const std::string tag = ctx.config.tag();
    RunOutput out{RunTrace(run_id, seed, tag), {}};
    StreamingMean grad_mean;
    StreamingMean gap_mean;
    for (std::size_t t = 1; t <= T; ++t) {
        const ParamPoint grad = grad_true(ctx.objective, state.x);
        grad_mean.add(euclidean_norm(grad));
        if (checkpoint(t, T, ctx.config.gap_every)) {
            const GapReport gap = fw_gap(ctx.set, state.x, grad, kDefaultFeasibilityTol);
            StepRecord r;
            r.t = t;
            r.fw_gap = gap.gap;
            r.grad_norm = euclidean_norm(grad);
            r.dual_norm = gap.dual_norm;
            r.kkt_residual = gap.kkt_residual;
            r.x_norm = norm(state.x, ctx.set.norm_kind());
            out.trace.push(r);
            gap_mean.add(r.fw_gap);
            out.summary.push_back({run_id, seed, tag, t, grad_mean.mean(), gap_mean.mean()});
        } else if (!contains(ctx.set, state.x, kDefaultFeasibilityTol)) {
            throw FeasibilityError("run " + std::to_string(run_id) + " (seed " + std::to_string(seed) +
                                   "): iterate left the constraint set at t=" + std::to_string(t));
        }
        if (t < T) {
            state = step(state);
        }
    }
    return out;
}

RunOutput run_one(const RunContext& ctx, std::size_t run_id) {
    const ExperimentConfig& c = ctx.config;
    const std::uint64_t seed = c.seed + run_id;
    const GradOracle oracle(ctx.objective, c.noise, ctx.batch, seed);
    switch (c.algorithm.family) {
    case AlgorithmFamily::sfw: {
        const SfwParams params = make_sfw_params(c);
        return drive(ctx, run_id, seed, sfw_init(ctx.start),
                     [&](const SfwState& s) { return sfw_step(s, params, ctx.set, oracle); });
    }
    case AlgorithmFamily::lion: {
        const LionParams params = make_lion_params(c);
        return drive(ctx, run_id, seed, lion_init(ctx.start),
                     [&](const LionState& s) { return lion_step(s, params, oracle); });
    }
    case AlgorithmFamily::muon: {
        const MuonParams params = make_muon_params(c);
        return drive(ctx, run_id, seed, muon_init(ctx.start),
                     [&](const MuonState& s) { return muon_step(s, params, oracle); });
    }
    }
    throw ConfigError("algorithm.name: unsupported");
}

} // namespace

std::size_t worker_count(std::size_t jobs) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FWOPT_THREADS"); env && *env) {
        std::size_t v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec != std::errc() || ptr != end || v == 0) {
            throw ConfigError(std::string("FWOPT_THREADS: expected a positive integer, got '") + env + "'");
        }
        n = v;
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads) {
    const Objective objective = make_objective(config);
    const ConstraintSet set = make_constraint(config);
    const BatchSchedule batch = make_batch(config);

    ExperimentResult result;
    ParamPoint start = make_start(config);
    if (!contains(set, start, 0.0)) {
        start = scale_into(set, start);
        result.warnings.push_back("start point lies outside the " + to_string(set.kind()) +
                                  " ball; scaled radially onto it");
    }

    const RunContext ctx{config, objective, set, batch, start};
    const std::size_t n = config.runs;
    std::vector<RunOutput> outputs(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                outputs[i] = run_one(ctx, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, n));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
    }
    result.traces.reserve(n);
    for (auto& o : outputs) {
        result.traces.push_back(std::move(o.trace));
        result.summary.insert(result.summary.end(), o.summary.begin(), o.summary.end());
    }
    return result;
}

void write_experiment(const ExperimentResult& result, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("run.output: cannot create directory '" + dir + "': " + ec.message());
    }
    auto open = [&](const std::string& name) {
        const std::string path = (std::filesystem::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw ConfigError("run.output: cannot write '" + path + "'");
        }
        return out;
    };
    {
        auto out = open("traces.csv");
        write_trace_csv(out, result.traces);
    }
    {
        auto out = open("summary.csv");
        write_summary_csv(out, result.summary);
    }
}

} // namespace fwopt
