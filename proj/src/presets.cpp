#include "fwopt/presets.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fwopt {

namespace {

double require_nonnegative(const std::optional<double>& v, const char* key) {
    if (!v) {
        throw ConfigError(std::string("preset.") + key + ": required by this preset");
    }
    if (!(*v >= 0.0) || !std::isfinite(*v)) {
        throw ConfigError(std::string("preset.") + key + ": must be nonnegative and finite");
    }
    return *v;
}

double require(const std::optional<double>& v, const char* key) {
    if (!v) {
        throw ConfigError(std::string("preset.") + key + ": required by this preset");
    }
    if (!(*v > 0.0) || !std::isfinite(*v)) {
        throw ConfigError(std::string("preset.") + key + ": must be positive and finite");
    }
    return *v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct HeavyTail {
    double D, L, G, sigma, p, delta;
};

HeavyTail heavy_tail_constants(const PresetConstants& c) {
    HeavyTail h{require(c.D, "D"), require(c.L, "L"), require(c.G, "G"), require_nonnegative(c.sigma, "sigma"), c.p, c.delta};
    if (!(h.p > 1.0 && h.p <= 2.0)) {
        throw ConfigError("preset.p: must lie in (1, 2]");
    }
    if (!(h.delta > 0.0 && h.delta < 1.0)) {
        throw ConfigError("preset.delta: must lie in (0, 1)");
    }
    return h;
}

} // namespace

std::string to_string(PresetName name) {
    switch (name) {
    case PresetName::thm33: return "thm33";
    case PresetName::cor31: return "cor31";
    case PresetName::thm41: return "thm41";
    case PresetName::cor42: return "cor42";
    case PresetName::thm43: return "thm43";
    case PresetName::thm44: return "thm44";
    }
    return "?";
}

PresetName parse_preset_name(const std::string& text) {
    for (PresetName n : {PresetName::thm33, PresetName::cor31, PresetName::thm41, PresetName::cor42,
                         PresetName::thm43, PresetName::thm44}) {
        if (to_string(n) == text) {
            return n;
        }
    }
    throw ConfigError("unknown preset '" + text + "' (expected thm33, cor31, thm41, cor42, thm43 or thm44)");
}

SfwParams Preset::params() const {
    SfwParams p;
    p.eta = Schedule::constant(eta);
    p.gamma = Schedule::constant(gamma);
    p.beta1 = Schedule::constant(beta1);
    p.clip = clip;
    p.variance_reduction = variance_reduction;
    return p;
}

std::string Preset::describe() const {
    std::ostringstream out;
    out << "preset = " << to_string(name) << "\n";
    out << "T = " << horizon << "\n";
    for (const auto& [label, value] : eta_terms) {
        out << "eta." << label << " = " << fmt(value) << "\n";
    }
    out << "eta_raw = " << fmt(eta_raw) << "\n";
    out << "eta = " << fmt(eta) << "\n";
    out << "gamma = " << fmt(gamma) << "\n";
    out << "beta1 = " << fmt(beta1) << "\n";
    out << "clip = " << (clip ? fmt(*clip) : std::string("none")) << "\n";
    out << "variance_reduction = " << (variance_reduction ? "true" : "false") << "\n";
    out << "batch.initial = " << batch.initial() << "\n";
    out << "batch.rest = " << batch.rest() << "\n";
    return out.str();
}

Preset make_preset(PresetName name, std::size_t T, const PresetConstants& c) {
    if (T < 2) {
        throw ConfigError("preset.T: horizon must be at least 2");
    }
    if (c.batch == 0) {
        throw ConfigError("preset.batch: must be positive");
    }
    const double Td = static_cast<double>(T);
    Preset out;
    out.name = name;
    out.horizon = T;

    switch (name) {
    case PresetName::thm33:
    case PresetName::cor31: {
        const double D = require(c.D, "D");
        if (!(c.gamma > 0.0 && c.gamma < 1.0)) {
            throw ConfigError("preset.gamma: must lie in (0, 1)");
        }
        if (!(c.beta1 >= 0.0 && c.beta1 <= 1.0 - c.gamma)) {
            throw ConfigError("preset.beta1: must lie in [0, 1 - gamma]");
        }
        out.eta_raw = 1.0 / (D * std::sqrt(Td));
        out.gamma = c.gamma;
        out.beta1 = c.beta1;
        out.batch = name == PresetName::cor31 ? BatchSchedule::horizon(T) : BatchSchedule::constant(c.batch);
        break;
    }
    case PresetName::thm41:
    case PresetName::cor42: {
        const double D = require(c.D, "D");
        out.eta_raw = 1.0 / (D * std::pow(Td, 2.0 / 3.0));
        out.gamma = 1.0 / std::pow(Td, 2.0 / 3.0);
        out.beta1 = 1.0 - 1.0 / std::cbrt(Td);
        out.variance_reduction = true;
        out.batch = name == PresetName::cor42 ? BatchSchedule::cube_root_warm_start(T)
                                              : BatchSchedule::constant(c.batch);
        break;
    }
    case PresetName::thm43: {
        const HeavyTail h = heavy_tail_constants(c);
        const double e = -h.p / (3.0 * h.p - 2.0);
        const double gamma = std::pow(Td, e);
        const double beta = (1.0 - gamma) * (1.0 - std::pow(Td, e));
        const double M = std::max(h.sigma / std::pow(gamma, 1.0 / h.p), 2.0 * h.G);
        out.eta_terms = {
            {"smooth", 1.0 / (std::sqrt(h.L * Td) * h.D)},
            {"momentum", (gamma / beta) / h.D},
            {"bias", std::sqrt(gamma) / (h.D * std::sqrt(beta * Td * h.L))},
            {"tail", (1.0 - gamma) / (20.0 * gamma * h.D * Td * M * std::log(4.0 * Td / h.delta))},
            {"clip", 1.0 / (2.0 * Td * h.D * (1.0 - beta / (1.0 - gamma)) * M * (1.0 + gamma))},
        };
        out.gamma = gamma;
        out.beta1 = beta;
        out.clip = M;
        out.batch = BatchSchedule::constant(c.batch);
        break;
    }
    case PresetName::thm44: {
        const HeavyTail h = heavy_tail_constants(c);
        const double e = -h.p / (2.0 * h.p - 1.0);
        const double gamma = std::pow(Td, e);
        const double beta = (1.0 - gamma) * (1.0 - std::pow(Td, e));
        const double M = std::max(h.sigma / std::pow(gamma, 1.0 / h.p), 2.0 * h.G);
        out.eta_terms = {
            {"smooth", 1.0 / (std::sqrt(h.L * Td) * h.D)},
            {"momentum", (gamma / beta) / h.D},
            {"bias", std::pow(gamma, 0.25) / (h.D * std::sqrt(9.0 * Td * h.L * beta * std::log(3.0 * Td / h.delta)))},
            {"tail", (1.0 - gamma) / (20.0 * gamma * h.D * Td * M * beta * std::log(4.0 * Td / h.delta))},
            {"clip", 1.0 / (2.0 * Td * h.D * (1.0 - beta / (1.0 - gamma)) * M * (1.0 + gamma))},
        };
        out.gamma = gamma;
        out.beta1 = beta;
        out.clip = M;
        out.variance_reduction = true;
        out.batch = BatchSchedule::constant(c.batch);
        break;
    }
    }

    if (!out.eta_terms.empty()) {
        out.eta_raw = out.eta_terms.front().second;
        for (const auto& term : out.eta_terms) {
            out.eta_raw = std::min(out.eta_raw, term.second);
        }
    }
    if (!(out.eta_raw > 0.0) || std::isnan(out.eta_raw)) {
        throw ConfigError("preset " + to_string(name) + ": step size formula gives " + fmt(out.eta_raw) +
                          ", which is not positive");
    }
    out.eta = std::min(out.eta_raw, 1.0);
    return out;
}

} // namespace fwopt
