#include "fwopt/config.hpp"
#include "fwopt/equivalence.hpp"
#include "fwopt/errors.hpp"
#include "fwopt/plot.hpp"
#include "fwopt/runner.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace fwopt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fwopt_harness_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FWOPT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* const kPareto = R"(objective.kind = convex_quadratic
objective.dim = 12
objective.seed = 3
noise.kind = pareto
noise.tail_index = 1.5
algorithm.name = lion++
algorithm.lr = 0.05
algorithm.weight_decay = 1
algorithm.clip = 3
run.T = 40
run.runs = 7
run.seed = 10
run.gap_every = 3
start.kind = gaussian
start.value = 2
)";

} // namespace

TEST(Runner, SingleRunSummaryEqualsTraceAverages) {
    const ExperimentConfig c = parse_config("objective.dim = 6\nalgorithm.name = lion\nalgorithm.lr = 0.01\n"
                                            "start.kind = constant\nstart.value = 0.8\nrun.T = 50\n");
    const ExperimentResult r = run_experiment(c, 1);
    ASSERT_EQ(r.traces.size(), 1u);
    ASSERT_EQ(r.traces[0].records().size(), 50u);
    const SummaryRow& last = r.summary.back();
    EXPECT_EQ(last.t, 50u);
    EXPECT_EQ(last.avg_grad_norm, average_grad_norm(r.traces[0]));
    EXPECT_EQ(last.avg_gap, average_gap(r.traces[0]));
    EXPECT_EQ(last.algo, "lion");
    EXPECT_EQ(last.seed, 1u);
}

TEST(Runner, RecomputedAveragesFromIterates) {
    // Noiseless SFW on 0.5 ||x||^2: replay the trajectory independently and
    // recompute the averaged gap and gradient norm.
    const ExperimentConfig c = parse_config("objective.dim = 4\nconstraint.kind = l2\nconstraint.radius = 2\n"
                                            "algorithm.name = sfw\nalgorithm.eta = 0.01\nalgorithm.gamma = 1\n"
                                            "start.kind = constant\nstart.value = 0.9\nrun.T = 1000\n");
    const ExperimentResult r = run_experiment(c, 1);
    std::vector<double> x(4, 0.9);
    long double gap = 0, gn = 0;
    for (int t = 1; t <= 1000; ++t) {
        double n2 = 0;
        for (double v : x) {
            n2 += v * v;
        }
        const double n = std::sqrt(n2);
        gap += 2 * n + n2; // radius * ||x||_2 + <x, x>
        gn += n;
        for (double& v : x) {
            v = 0.99 * v + 0.01 * (-2 * v / n);
        }
    }
    EXPECT_NEAR(average_gap(r.traces[0]), static_cast<double>(gap / 1000), 1e-12);
    EXPECT_NEAR(average_grad_norm(r.traces[0]), static_cast<double>(gn / 1000), 1e-12);
}

TEST(Runner, CheckpointThinning) {
    const ExperimentConfig c = parse_config(kPareto);
    const ExperimentResult r = run_experiment(c, 1);
    ASSERT_EQ(r.traces.size(), 7u);
    std::vector<std::size_t> ts;
    for (const StepRecord& rec : r.traces[0].records()) {
        ts.push_back(rec.t);
    }
    const std::vector<std::size_t> expected = {1, 4, 7, 10, 13, 16, 19, 22, 25, 28, 31, 34, 37, 40};
    EXPECT_EQ(ts, expected);
    EXPECT_EQ(r.summary.size(), 7 * expected.size());
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        EXPECT_EQ(r.traces[i].seed(), 10 + i);
        EXPECT_EQ(r.traces[i].run_id(), i);
        for (const StepRecord& rec : r.traces[i].records()) {
            EXPECT_LE(rec.x_norm, 1.0 + 1e-9);
        }
    }
}

TEST(Runner, DeterministicAndThreadIndependent) {
    const ExperimentConfig c = parse_config(kPareto);
    const fs::path a = scratch("a"), b = scratch("b"), d = scratch("d");
    write_experiment(run_experiment(c, 1), a.string());
    write_experiment(run_experiment(c, 3), b.string());
    write_experiment(run_experiment(c, 7), d.string());
    for (const char* f : {"traces.csv", "summary.csv"}) {
        const std::string first = slurp(a / f);
        EXPECT_FALSE(first.empty());
        EXPECT_EQ(first, slurp(b / f)) << f;
        EXPECT_EQ(first, slurp(d / f)) << f;
    }
}

TEST(Runner, InfeasibleStartIsProjectedWithWarning) {
    const ExperimentConfig c = parse_config("objective.dim = 3\nalgorithm.name = sfw\nconstraint.radius = 1\n"
                                            "start.kind = constant\nstart.value = 4\nrun.T = 5\n");
    const ExperimentResult r = run_experiment(c, 1);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].find("start"), std::string::npos);
    EXPECT_EQ(r.traces[0].records()[0].x_norm, 1.0);
}

TEST(Runner, ThreadsEnvironment) {
    ::setenv("FWOPT_THREADS", "2", 1);
    EXPECT_EQ(worker_count(10), 2u);
    EXPECT_EQ(worker_count(1), 1u);
    ::setenv("FWOPT_THREADS", "zero", 1);
    EXPECT_THROW(worker_count(10), ConfigError);
    ::setenv("FWOPT_THREADS", "0", 1);
    EXPECT_THROW(worker_count(10), ConfigError);
    ::unsetenv("FWOPT_THREADS");
    EXPECT_GE(worker_count(10), 1u);
}

TEST(Equivalence, LionPairsPass) {
    for (auto pair : {EquivalencePair::lion, EquivalencePair::lion_plus, EquivalencePair::lion_pp}) {
        EquivalenceOptions o;
        o.trials = 3;
        const EquivalenceReport r = check_equivalence(pair, o);
        EXPECT_TRUE(r.pass) << r.describe();
        EXPECT_EQ(r.tolerance, 1e-10);
        EXPECT_EQ(r.horizon, 200u);
    }
}

TEST(Equivalence, NewtonSchulzDocumentsApproximation) {
    EquivalenceOptions o;
    o.trials = 3;
    o.orthogonalizer = Orthogonalizer::newton_schulz;
    o.ns_iters = 12;
    o.tolerance = 1e-10;
    EXPECT_FALSE(check_equivalence(EquivalencePair::muon, o).pass);
    o.tolerance = 1e-2;
    EXPECT_TRUE(check_equivalence(EquivalencePair::muon, o).pass);
    o.orthogonalizer = Orthogonalizer::exact;
    o.tolerance = 0.0;
    const EquivalenceReport exact = check_equivalence(EquivalencePair::muon, o);
    EXPECT_TRUE(exact.pass);
    EXPECT_EQ(exact.tolerance, 1e-8);
}

TEST(Equivalence, ParsePairs) {
    EXPECT_EQ(parse_equivalence_pair("muon++"), EquivalencePair::muon_pp);
    EXPECT_THROW(parse_equivalence_pair("adam"), ConfigError);
    EXPECT_TRUE(is_muon(EquivalencePair::muon_plus));
    EXPECT_FALSE(is_muon(EquivalencePair::lion_pp));
}

TEST(Plot, GoldenFile) {
    const std::vector<SummaryRow> rows =
        load_summaries({FWOPT_TEST_DATA "/golden_lion.csv", FWOPT_TEST_DATA "/golden_lionpp.csv"});
    EXPECT_EQ(render_svg(summarize_bands(rows, 0.1)), slurp(FWOPT_TEST_DATA "/golden.svg"));
}

TEST(Plot, SingleRunHasCoincidentLines) {
    const std::vector<SummaryRow> rows = {{0, 1, "sfw", 1, 2.0, 1.0}, {0, 1, "sfw", 5, 1.0, 1.0},
                                          {0, 1, "sfw", 9, 0.1, 1.0}};
    const std::vector<AlgorithmBand> bands = summarize_bands(rows, 0.01);
    ASSERT_EQ(bands.size(), 1u);
    for (const QuantileStats& s : bands[0].band.stats) {
        EXPECT_EQ(s.lower, s.median);
        EXPECT_EQ(s.median, s.upper);
    }
    const std::string svg = render_svg(bands);
    // lower, upper and median polylines carry identical points.
    std::vector<std::string> points;
    for (std::size_t pos = svg.find("<polyline points=\""); pos != std::string::npos;
         pos = svg.find("<polyline points=\"", pos + 1)) {
        const std::size_t start = pos + 18;
        points.push_back(svg.substr(start, svg.find('"', start) - start));
    }
    ASSERT_EQ(points.size(), 4u); // axes + three band lines
    EXPECT_EQ(points[1], points[2]);
    EXPECT_EQ(points[2], points[3]);
}

TEST(Plot, LegendFollowsInputOrder) {
    const std::vector<SummaryRow> rows = {{0, 1, "muon++", 1, 2.0, 1.0}, {0, 1, "muon", 1, 3.0, 1.0},
                                          {1, 2, "muon++", 1, 1.0, 1.0}};
    const std::string svg = render_svg(summarize_bands(rows, 0.1));
    const std::size_t a = svg.find(">muon++</text>");
    const std::size_t b = svg.find(">muon</text>");
    ASSERT_NE(a, std::string::npos);
    ASSERT_NE(b, std::string::npos);
    EXPECT_LT(a, b);
}

TEST(Plot, MalformedCsvNamesFileAndLine) {
    const fs::path dir = scratch("bad");
    std::ofstream(dir / "s.csv") << kSummaryCsvHeader << "\n0,1,sfw,1,0.5,0.5\n0,1,sfw,2,oops,1\n";
    try {
        load_summaries({(dir / "s.csv").string()});
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("s.csv"), std::string::npos) << what;
        EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    }
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    EXPECT_EQ(run_cli(""), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("presets thm33"), 1); // --T missing

    std::ofstream(dir / "bad.cfg") << "objective.dimm = 3\n";
    EXPECT_EQ(run_cli("run " + (dir / "bad.cfg").string()), 2);
    EXPECT_EQ(run_cli("run " + (dir / "missing.cfg").string()), 2);
    EXPECT_EQ(run_cli("presets thm43 --T 100 --D 1"), 2);
    EXPECT_EQ(run_cli("presets thm33 --T 10000 --D 2"), 0);
    EXPECT_EQ(run_cli("equivalence adam"), 2);

    std::ofstream(dir / "overflow.cfg") << "constraint.radius = 1e300\nstart.kind = constant\nstart.value = 1e300\n"
                                        << "run.T = 3\nrun.output = " << (dir / "o1").string() << "\n";
    EXPECT_EQ(run_cli("run " + (dir / "overflow.cfg").string()), 3);

    std::ofstream(dir / "ok.cfg") << "objective.dim = 3\nrun.T = 5\nrun.runs = 2\nrun.output = " << (dir / "o2").string()
                                  << "\n";
    EXPECT_EQ(run_cli("run " + (dir / "ok.cfg").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "o2" / "traces.csv"));
    EXPECT_EQ(run_cli("plot " + (dir / "o2" / "summary.csv").string() + " -o " + (dir / "p.svg").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "p.svg"));
    std::ofstream(dir / "broken.csv") << "nonsense\n";
    EXPECT_EQ(run_cli("plot " + (dir / "broken.csv").string() + " -o " + (dir / "q.svg").string()), 2);

    EXPECT_EQ(run_cli("equivalence lion --trials 2"), 0);
    EXPECT_EQ(run_cli("equivalence muon --trials 2 --orthogonalizer newton_schulz --ns-iters 12 --tol 1e-10"), 4);
    EXPECT_EQ(run_cli("equivalence muon --trials 2 --orthogonalizer newton_schulz --ns-iters 12 --tol 1e-2"), 0);
}

TEST(Cli, RunIsByteDeterministic) {
    const fs::path dir = scratch("det");
    for (const char* sub : {"x", "y"}) {
        std::ofstream(dir / (std::string(sub) + ".cfg")) << kPareto << "run.output = " << (dir / sub).string() << "\n";
    }
    ::setenv("FWOPT_THREADS", "1", 1);
    ASSERT_EQ(run_cli("run " + (dir / "x.cfg").string()), 0);
    ::setenv("FWOPT_THREADS", "4", 1);
    ASSERT_EQ(run_cli("run " + (dir / "y.cfg").string()), 0);
    ::unsetenv("FWOPT_THREADS");
    EXPECT_EQ(slurp(dir / "x" / "traces.csv"), slurp(dir / "y" / "traces.csv"));
    EXPECT_EQ(slurp(dir / "x" / "summary.csv"), slurp(dir / "y" / "summary.csv"));
}
