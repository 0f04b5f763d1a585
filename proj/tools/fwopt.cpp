// fwopt: command-line front end.
//
//   fwopt run <config>
//   fwopt equivalence <pair> [--trials N] [--tol X]
//   fwopt plot <csv...> [--delta D] [-o out.svg]
//   fwopt presets <name> --T <int> [--D x] [--L x] [--G x] [--sigma x] [--p x] [--delta x]
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 numerical failure, 4 equivalence failure.

#include "fwopt/config.hpp"
#include "fwopt/equivalence.hpp"
#include "fwopt/errors.hpp"
#include "fwopt/plot.hpp"
#include "fwopt/presets.hpp"
#include "fwopt/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kEquivalence = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw fwopt::ConfigError(path + ": cannot open");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cmd_run(const std::string& path) {
    const fwopt::ExperimentConfig config = fwopt::parse_config(read_file(path));
    const fwopt::ExperimentResult result = fwopt::run_experiment(config, fwopt::worker_count(config.runs));
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    fwopt::write_experiment(result, config.output);

    std::vector<double> gap;
    for (const auto& trace : result.traces) {
        gap.push_back(fwopt::average_gap(trace));
    }
    std::vector<double> final_grad;
    for (const auto& row : result.summary) {
        if (row.t == config.horizon) {
            final_grad.push_back(row.avg_grad_norm);
        }
    }
    const auto g = fwopt::quantile_band(final_grad, 0.01);
    const auto q = fwopt::quantile_band(gap, 0.01);
    std::cout << config.tag() << ": " << config.runs << " runs, T = " << config.horizon << "\n"
              << "avg grad norm  median " << fwopt::format_double(g.median) << "  [0.01] "
              << fwopt::format_double(g.lower) << "  [0.99] " << fwopt::format_double(g.upper) << "\n"
              << "avg gap        median " << fwopt::format_double(q.median) << "  [0.01] "
              << fwopt::format_double(q.lower) << "  [0.99] " << fwopt::format_double(q.upper) << "\n"
              << "wrote " << config.output << "/traces.csv and " << config.output << "/summary.csv\n";
    return kOk;
}

int cmd_equivalence(const std::string& pair_name, const fwopt::EquivalenceOptions& options) {
    const auto pair = fwopt::parse_equivalence_pair(pair_name);
    if (!fwopt::is_muon(pair) && options.orthogonalizer != fwopt::Orthogonalizer::exact) {
        throw fwopt::ConfigError("--orthogonalizer: only applies to muon pairs");
    }
    const auto report = fwopt::check_equivalence(pair, options);
    std::cout << report.describe();
    return report.pass ? kOk : kEquivalence;
}

int cmd_plot(const std::vector<std::string>& inputs, double delta, const std::string& out_path) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw fwopt::ConfigError("--delta: must lie in (0, 0.5)");
    }
    const auto rows = fwopt::load_summaries(inputs);
    const std::string svg = fwopt::render_svg(fwopt::summarize_bands(rows, delta));
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << svg)) {
        throw fwopt::ConfigError(out_path + ": cannot write");
    }
    std::cout << "wrote " << out_path << "\n";
    return kOk;
}

int cmd_presets(const std::string& name, std::size_t T, const fwopt::PresetConstants& constants) {
    const auto preset = fwopt::make_preset(fwopt::parse_preset_name(name), T, constants);
    std::cout << preset.describe();
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Frank-Wolfe, Lion and Muon experiments"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a configured multi-seed experiment");
    run->add_option("config", config_path, "Configuration file")->required();

    std::string pair;
    fwopt::EquivalenceOptions eq;
    std::string ortho = "exact";
    auto* equiv = app.add_subcommand("equivalence", "Check an optimizer against its Frank-Wolfe instance");
    equiv->add_option("pair", pair, "lion, lion+, lion++, muon, muon+ or muon++")->required();
    equiv->add_option("--trials", eq.trials, "Number of seeds")->check(CLI::PositiveNumber);
    equiv->add_option("--tol", eq.tolerance, "Relative tolerance")->check(CLI::PositiveNumber);
    equiv->add_option("--seed", eq.seed, "First seed");
    equiv->add_option("--T", eq.horizon, "Steps per trial")->check(CLI::PositiveNumber);
    equiv->add_option("--orthogonalizer", ortho, "exact or newton_schulz")
        ->check(CLI::IsMember({"exact", "newton_schulz"}));
    equiv->add_option("--ns-iters", eq.ns_iters, "Newton-Schulz iterations")->check(CLI::PositiveNumber);

    std::vector<std::string> inputs;
    double delta = 0.01;
    std::string out_path = "plot.svg";
    auto* plot = app.add_subcommand("plot", "Plot quantile bands from summary CSVs");
    plot->add_option("csv", inputs, "summary.csv files")->required();
    plot->add_option("--delta", delta, "Lower quantile level, in (0, 0.5)");
    plot->add_option("-o,--output", out_path, "Output SVG path");

    std::string preset_name;
    std::size_t horizon = 0;
    fwopt::PresetConstants constants;
    std::optional<double> D, L, G, sigma;
    auto* presets = app.add_subcommand("presets", "Print the schedule a convergence theorem prescribes");
    presets->add_option("name", preset_name, "thm33, cor31, thm41, cor42, thm43 or thm44")->required();
    presets->add_option("--T", horizon, "Horizon")->required();
    presets->add_option("--D", D, "Diameter of the constraint set");
    presets->add_option("--L", L, "Smoothness constant");
    presets->add_option("--G", G, "Gradient norm bound");
    presets->add_option("--sigma", sigma, "Noise moment bound");
    presets->add_option("--p", constants.p, "Moment order in (1, 2]");
    presets->add_option("--delta", constants.delta, "Failure probability");
    presets->add_option("--batch", constants.batch, "Batch size");
    presets->add_option("--gamma", constants.gamma, "gamma for thm33 / cor31");
    presets->add_option("--beta1", constants.beta1, "beta1 for thm33 / cor31");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path);
        }
        if (equiv->parsed()) {
            eq.orthogonalizer = ortho == "exact" ? fwopt::Orthogonalizer::exact : fwopt::Orthogonalizer::newton_schulz;
            return cmd_equivalence(pair, eq);
        }
        if (plot->parsed()) {
            return cmd_plot(inputs, delta, out_path);
        }
        if (presets->parsed()) {
            constants.D = D;
            constants.L = L;
            constants.G = G;
            constants.sigma = sigma;
            return cmd_presets(preset_name, horizon, constants);
        }
    } catch (const fwopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const fwopt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kConfig;
    } catch (const fwopt::MappingDomainError& e) {
        std::cerr << "mapping error: " << e.what() << "\n";
        return kConfig;
    } catch (const fwopt::StepSizeError& e) {
        std::cerr << "step size error: " << e.what() << "\n";
        return kConfig;
    } catch (const fwopt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
