#include "fwopt/equivalence.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/metrics.hpp"
#include "fwopt/problems.hpp"
#include "fwopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fwopt {

namespace {

double sup_abs(const ParamPoint& p) {
    double m = 0.0;
    for (double v : p.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double relative_deviation(const ParamPoint& x, const ParamPoint& y) {
    return max_abs_diff(x, y) / (1.0 + sup_abs(x));
}

ParamPoint random_start(const Shape& shape, std::uint64_t seed, double scale) {
    const CounterRng rng(mix64(seed ^ 0x5eedULL));
    ParamPoint x = ParamPoint::zeros(shape);
    auto values = x.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = scale * (2.0 * rng.uniform(0, i) - 1.0);
    }
    return x;
}

TrialReport lion_trial(EquivalencePair pair, std::uint64_t seed, std::size_t T) {
    constexpr std::size_t dim = 50;
    const Objective objective = Objective::random_convex_quadratic(dim, 0.5, 5.0, seed);
    const GradOracle oracle(objective, NoiseModel::gaussian(1.0), BatchSchedule::constant(1), seed);

    LionParams lion;
    lion.beta1 = 0.9;
    lion.beta2 = 0.99;
    lion.lr = Schedule::constant(0.01);
    lion.weight_decay = 1.0;
    if (pair != EquivalencePair::lion) {
        lion.clip = 2.0;
    }
    lion.variance_reduction = pair == EquivalencePair::lion_pp;
    const SfwInstance sfw = map_lion_to_sfw(lion, dim);

    const ParamPoint x1 = random_start(Shape::vector(dim), seed, 0.5);
    LionState a = lion_init(x1);
    SfwState b = sfw_init(x1);
    TrialReport report{seed, 0.0, 0.0, false};
    for (std::size_t t = 1; t <= T; ++t) {
        a = lion_step(a, lion, oracle);
        b = sfw_step(b, sfw.params, sfw.set, oracle);
        report.max_deviation = std::max(report.max_deviation, relative_deviation(a.x, b.x));
        report.max_state_deviation = std::max(report.max_state_deviation, max_abs_diff(a.m, b.g));
    }
    return report;
}

TrialReport muon_trial(EquivalencePair pair, std::uint64_t seed, std::size_t T, const EquivalenceOptions& options) {
    constexpr std::size_t rows = 8;
    constexpr std::size_t cols = 12;
    const Objective objective = Objective::matrix_quadratic(rows, cols);
    const GradOracle oracle(objective, NoiseModel::gaussian(1.0), BatchSchedule::constant(1), seed);

    MuonParams muon;
    muon.momentum = 0.95;
    muon.lr = Schedule::constant(0.05);
    muon.weight_decay = 0.1;
    if (pair != EquivalencePair::muon) {
        muon.clip = 3.0;
    }
    muon.variance_reduction = pair == EquivalencePair::muon_pp;
    muon.orthogonalizer = options.orthogonalizer;
    muon.ns_iters = options.ns_iters;
    const SfwInstance sfw = map_muon_to_sfw(muon, rows, cols);

    const ParamPoint x1 = scale_into(sfw.set, random_start(Shape::matrix_of(rows, cols), seed, 2.0));
    MuonState a = muon_init(x1);
    SfwState b = sfw_init(x1);
    TrialReport report{seed, 0.0, 0.0, false};
    const double scale = 1.0 - muon.momentum;
    for (std::size_t t = 1; t <= T; ++t) {
        a = muon_step(a, muon, oracle);
        b = sfw_step(b, sfw.params, sfw.set, oracle);
        report.max_deviation = std::max(report.max_deviation, relative_deviation(a.x, b.x));
        report.max_state_deviation = std::max(report.max_state_deviation, max_abs_diff(scale * a.b, b.g));
    }
    return report;
}

} // namespace

std::string to_string(EquivalencePair pair) {
    switch (pair) {
    case EquivalencePair::lion: return "lion";
    case EquivalencePair::lion_plus: return "lion+";
    case EquivalencePair::lion_pp: return "lion++";
    case EquivalencePair::muon: return "muon";
    case EquivalencePair::muon_plus: return "muon+";
    case EquivalencePair::muon_pp: return "muon++";
    }
    return "?";
}

EquivalencePair parse_equivalence_pair(const std::string& text) {
    for (EquivalencePair p : {EquivalencePair::lion, EquivalencePair::lion_plus, EquivalencePair::lion_pp,
                              EquivalencePair::muon, EquivalencePair::muon_plus, EquivalencePair::muon_pp}) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw ConfigError("unknown pair '" + text + "' (expected lion, lion+, lion++, muon, muon+ or muon++)");
}

bool is_muon(EquivalencePair pair) {
    return pair == EquivalencePair::muon || pair == EquivalencePair::muon_plus || pair == EquivalencePair::muon_pp;
}

std::string EquivalenceReport::describe() const {
    std::ostringstream out;
    out << "pair " << to_string(pair) << ", T = " << horizon << ", tolerance " << format_double(tolerance) << "\n";
    for (const TrialReport& r : trials) {
        out << "seed " << r.seed << ": max deviation " << format_double(r.max_deviation) << ", momentum deviation "
            << format_double(r.max_state_deviation) << (r.pass ? "  ok" : "  FAIL") << "\n";
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

EquivalenceReport check_equivalence(EquivalencePair pair, const EquivalenceOptions& options) {
    if (options.trials == 0) {
        throw ConfigError("--trials: must be positive");
    }
    const bool muon = is_muon(pair);
    EquivalenceReport report;
    report.pair = pair;
    report.tolerance = options.tolerance > 0.0 ? options.tolerance : (muon ? 1e-8 : 1e-10);
    report.horizon = options.horizon > 0 ? options.horizon : (muon ? 100 : 200);
    report.pass = true;
    for (std::size_t i = 0; i < options.trials; ++i) {
        const std::uint64_t seed = options.seed + i;
        TrialReport r = muon ? muon_trial(pair, seed, report.horizon, options) : lion_trial(pair, seed, report.horizon);
        r.pass = r.max_deviation <= report.tolerance;
        report.pass = report.pass && r.pass;
        report.trials.push_back(r);
    }
    return report;
}

} // namespace fwopt
