#include "fwopt/config.hpp"

#include "fwopt/errors.hpp"
#include "fwopt/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

namespace fwopt {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ConfigError(key + ": " + what);
}

// Hands out typed values and remembers which keys were used, so that
// anything left over can be reported as unknown.
class Reader {
public:
    explicit Reader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::optional<std::string> raw(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        return it->second;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        return raw(key).value_or(fallback);
    }

    double real(const std::string& key, double fallback) {
        auto v = raw(key);
        return v ? to_real(key, *v) : fallback;
    }

    std::optional<double> opt_real(const std::string& key) {
        auto v = raw(key);
        if (!v) {
            return std::nullopt;
        }
        return to_real(key, *v);
    }

    template <class Int>
    Int integer(const std::string& key, Int fallback) {
        auto v = raw(key);
        return v ? to_int<Int>(key, *v) : fallback;
    }

    template <class Int>
    std::optional<Int> opt_integer(const std::string& key) {
        auto v = raw(key);
        if (!v) {
            return std::nullopt;
        }
        return to_int<Int>(key, *v);
    }

    void finish() const {
        for (const auto& [key, value] : kv_) {
            if (!used_.count(key)) {
                bad(key, "unknown key, or not applicable to this configuration");
            }
        }
    }

private:
    static double to_real(const std::string& key, const std::string& s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            bad(key, "expected a number, got '" + s + "'");
        }
        return v;
    }

    template <class Int>
    static Int to_int(const std::string& key, const std::string& s) {
        Int v{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            bad(key, "expected a nonnegative integer, got '" + s + "'");
        }
        return v;
    }

    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

const char* objective_name(ObjectiveKind k) {
    switch (k) {
    case ObjectiveKind::isotropic_quadratic: return "isotropic_quadratic";
    case ObjectiveKind::convex_quadratic: return "convex_quadratic";
    case ObjectiveKind::matrix_quadratic: return "matrix_quadratic";
    case ObjectiveKind::least_squares: return "least_squares";
    }
    return "?";
}

const char* noise_name(NoiseKind k) {
    switch (k) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::pareto: return "pareto";
    }
    return "?";
}

const char* start_name(StartKind k) {
    switch (k) {
    case StartKind::zeros: return "zeros";
    case StartKind::constant: return "constant";
    case StartKind::gaussian: return "gaussian";
    }
    return "?";
}

template <class Enum, std::size_t N>
Enum pick(const std::string& key, const std::string& value, const std::pair<const char*, Enum> (&options)[N]) {
    std::string expected;
    for (const auto& [name, e] : options) {
        if (value == name) {
            return e;
        }
        expected += expected.empty() ? name : std::string(", ") + name;
    }
    bad(key, "unknown value '" + value + "' (expected " + expected + ")");
}

bool is_matrix_objective(ObjectiveKind k) { return k == ObjectiveKind::matrix_quadratic; }

void require_positive(const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        bad(key, "must be positive and finite");
    }
}

void require_positive_count(const std::string& key, std::size_t v) {
    if (v == 0) {
        bad(key, "must be positive");
    }
}

const char* step_key(const ExperimentConfig& c) { return c.algorithm.family == AlgorithmFamily::sfw ? "eta" : "lr"; }

// Every key that applies to `c`, with its canonical text.
std::map<std::string, std::string> to_key_values(const ExperimentConfig& c) {
    std::map<std::string, std::string> kv;
    auto real = [&](const std::string& k, double v) { kv[k] = shortest_double(v); };
    auto count = [&](const std::string& k, std::uint64_t v) { kv[k] = std::to_string(v); };

    kv["objective.kind"] = objective_name(c.objective);
    switch (c.objective) {
    case ObjectiveKind::isotropic_quadratic: count("objective.dim", c.dim); break;
    case ObjectiveKind::matrix_quadratic:
        count("objective.rows", c.rows);
        count("objective.cols", c.cols);
        break;
    case ObjectiveKind::convex_quadratic:
        count("objective.dim", c.dim);
        real("objective.eig_min", c.eig_min);
        real("objective.eig_max", c.eig_max);
        count("objective.seed", c.objective_seed);
        break;
    case ObjectiveKind::least_squares:
        count("objective.dim", c.dim);
        count("objective.samples", c.samples);
        count("objective.seed", c.objective_seed);
        break;
    }

    kv["noise.kind"] = noise_name(c.noise.kind);
    if (c.noise.kind == NoiseKind::gaussian) {
        real("noise.sigma", c.noise.sigma);
    } else if (c.noise.kind == NoiseKind::pareto) {
        real("noise.tail_index", c.noise.tail_index);
        real("noise.scale", c.noise.scale);
    }

    kv["algorithm.name"] = c.algorithm.name();
    if (c.algorithm.family == AlgorithmFamily::sfw) {
        kv["constraint.kind"] = to_string(c.constraint);
        real("constraint.radius", c.radius);
    }

    if (c.preset) {
        const PresetConstants& p = c.preset_constants;
        kv["algorithm.preset"] = to_string(*c.preset);
        if (p.D) {
            real("preset.D", *p.D);
        }
        switch (*c.preset) {
        case PresetName::thm33:
        case PresetName::cor31:
            real("preset.gamma", p.gamma);
            real("preset.beta1", p.beta1);
            if (*c.preset == PresetName::thm33) {
                count("preset.batch", p.batch);
            }
            break;
        case PresetName::thm41: count("preset.batch", p.batch); break;
        case PresetName::cor42: break;
        case PresetName::thm43:
        case PresetName::thm44:
            if (p.L) {
                real("preset.L", *p.L);
            }
            if (p.G) {
                real("preset.G", *p.G);
            }
            if (p.sigma) {
                real("preset.sigma", *p.sigma);
            }
            real("preset.p", p.p);
            real("preset.delta", p.delta);
            count("preset.batch", p.batch);
            break;
        }
    } else {
        count("batch.size", c.batch_size);
        if (c.batch_initial) {
            count("batch.initial", *c.batch_initial);
        }
        const std::string step = step_key(c);
        real("algorithm." + step, c.eta);
        kv["algorithm.schedule"] = c.schedule == ScheduleKind::constant ? "constant" : "cosine";
        if (c.schedule == ScheduleKind::cosine) {
            real("algorithm." + step + "_min", c.eta_min);
        }
        if (c.algorithm.clip) {
            real("algorithm.clip", c.clip);
        }
        switch (c.algorithm.family) {
        case AlgorithmFamily::sfw:
            real("algorithm.gamma", c.gamma);
            real("algorithm.beta1", c.beta1);
            break;
        case AlgorithmFamily::lion:
            real("algorithm.beta1", c.beta1);
            real("algorithm.beta2", c.beta2);
            real("algorithm.weight_decay", c.weight_decay);
            break;
        case AlgorithmFamily::muon:
            real("algorithm.momentum", c.momentum);
            real("algorithm.weight_decay", c.weight_decay);
            kv["algorithm.orthogonalizer"] = to_string(c.orthogonalizer);
            if (c.orthogonalizer == Orthogonalizer::newton_schulz) {
                count("algorithm.ns_iters", c.ns_iters);
            }
            break;
        }
    }

    count("run.T", c.horizon);
    count("run.runs", c.runs);
    count("run.seed", c.seed);
    count("run.gap_every", c.gap_every);
    kv["run.output"] = c.output;

    kv["start.kind"] = start_name(c.start);
    if (c.start == StartKind::constant || c.start == StartKind::gaussian) {
        real("start.value", c.start_value);
    }
    if (c.start == StartKind::gaussian) {
        count("start.seed", c.start_seed);
    }
    return kv;
}

// Library-level validation of the assembled configuration; every failure
// is rethrown as a ConfigError under the section it belongs to.
void validate(const ExperimentConfig& c) {
    c.noise.validate();
    ConstraintSet set = [&] {
        try {
            return make_constraint(c);
        } catch (const DimensionError& e) {
            bad(c.algorithm.family == AlgorithmFamily::sfw ? "constraint.kind" : "algorithm.name", e.what());
        }
    }();
    (void)set;
    try {
        switch (c.algorithm.family) {
        case AlgorithmFamily::sfw: {
            SfwParams p = make_sfw_params(c);
            p.validate_at(1);
            p.validate_at(c.horizon);
            break;
        }
        case AlgorithmFamily::lion: make_lion_params(c).validate(); break;
        case AlgorithmFamily::muon: make_muon_params(c).validate(); break;
        }
    } catch (const StepSizeError& e) {
        bad(c.preset ? "algorithm.preset" : (c.algorithm.family == AlgorithmFamily::sfw ? "algorithm.eta" : "algorithm.lr"),
            e.what());
    } catch (const Error& e) {
        const std::string what = e.what();
        const char* key = "algorithm";
        if (c.preset) {
            key = "algorithm.preset";
        } else if (what.find("beta") != std::string::npos) {
            key = "algorithm.beta1";
        } else if (what.find("gamma") != std::string::npos) {
            key = "algorithm.gamma";
        } else if (what.find("momentum") != std::string::npos) {
            key = "algorithm.momentum";
        } else if (what.find("clip") != std::string::npos) {
            key = "algorithm.clip";
        }
        bad(key, what);
    }
}

} // namespace

std::string AlgorithmId::name() const {
    switch (family) {
    case AlgorithmFamily::sfw:
        return std::string("sfw") + (clip ? "_clip" : "") + (variance_reduction ? "_vr" : "");
    case AlgorithmFamily::lion: return std::string("lion") + (clip ? "+" : "") + (variance_reduction ? "+" : "");
    case AlgorithmFamily::muon: return std::string("muon") + (clip ? "+" : "") + (variance_reduction ? "+" : "");
    }
    return "?";
}

AlgorithmId AlgorithmId::parse(const std::string& name) {
    static const std::pair<const char*, AlgorithmId> options[] = {
        {"sfw", {AlgorithmFamily::sfw, false, false}},
        {"sfw_vr", {AlgorithmFamily::sfw, false, true}},
        {"sfw_clip", {AlgorithmFamily::sfw, true, false}},
        {"sfw_clip_vr", {AlgorithmFamily::sfw, true, true}},
        {"lion", {AlgorithmFamily::lion, false, false}},
        {"lion+", {AlgorithmFamily::lion, true, false}},
        {"lion++", {AlgorithmFamily::lion, true, true}},
        {"muon", {AlgorithmFamily::muon, false, false}},
        {"muon+", {AlgorithmFamily::muon, true, false}},
        {"muon++", {AlgorithmFamily::muon, true, true}},
    };
    return pick("algorithm.name", name, options);
}

std::string ExperimentConfig::tag() const {
    return preset ? algorithm.name() + "/" + to_string(*preset) : algorithm.name();
}

std::string shortest_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError(key + ": duplicate key (line " + std::to_string(line_no) + ")");
        }
    }
    return kv;
}

ExperimentConfig parse_config(const std::string& text) {
    Reader r(parse_key_values(text));
    ExperimentConfig c;

    static const std::pair<const char*, ObjectiveKind> objectives[] = {
        {"isotropic_quadratic", ObjectiveKind::isotropic_quadratic},
        {"convex_quadratic", ObjectiveKind::convex_quadratic},
        {"matrix_quadratic", ObjectiveKind::matrix_quadratic},
        {"least_squares", ObjectiveKind::least_squares},
    };
    c.objective = pick("objective.kind", r.text("objective.kind", "isotropic_quadratic"), objectives);
    if (is_matrix_objective(c.objective)) {
        c.rows = r.integer<std::size_t>("objective.rows", c.rows);
        c.cols = r.integer<std::size_t>("objective.cols", c.cols);
        require_positive_count("objective.rows", c.rows);
        require_positive_count("objective.cols", c.cols);
    } else {
        c.dim = r.integer<std::size_t>("objective.dim", c.dim);
        require_positive_count("objective.dim", c.dim);
    }
    if (c.objective == ObjectiveKind::convex_quadratic) {
        c.eig_min = r.real("objective.eig_min", c.eig_min);
        c.eig_max = r.real("objective.eig_max", c.eig_max);
        require_positive("objective.eig_min", c.eig_min);
        require_positive("objective.eig_max", c.eig_max);
        if (c.eig_min > c.eig_max) {
            bad("objective.eig_min", "must not exceed objective.eig_max");
        }
    }
    if (c.objective == ObjectiveKind::least_squares) {
        c.samples = r.integer<std::size_t>("objective.samples", c.samples);
        require_positive_count("objective.samples", c.samples);
    }
    if (c.objective == ObjectiveKind::convex_quadratic || c.objective == ObjectiveKind::least_squares) {
        c.objective_seed = r.integer<std::uint64_t>("objective.seed", c.objective_seed);
    }

    static const std::pair<const char*, NoiseKind> noises[] = {
        {"none", NoiseKind::none},
        {"gaussian", NoiseKind::gaussian},
        {"pareto", NoiseKind::pareto},
    };
    c.noise.kind = pick("noise.kind", r.text("noise.kind", "none"), noises);
    if (c.noise.kind == NoiseKind::gaussian) {
        c.noise.sigma = r.real("noise.sigma", c.noise.sigma);
    } else if (c.noise.kind == NoiseKind::pareto) {
        c.noise.tail_index = r.real("noise.tail_index", c.noise.tail_index);
        c.noise.scale = r.real("noise.scale", c.noise.scale);
    }

    c.algorithm = AlgorithmId::parse(r.text("algorithm.name", "sfw"));
    const bool sfw = c.algorithm.family == AlgorithmFamily::sfw;
    if (sfw) {
        static const std::pair<const char*, BallKind> balls[] = {
            {"linf", BallKind::linf},
            {"l2", BallKind::l2},
            {"spectral", BallKind::spectral},
        };
        c.constraint = pick("constraint.kind", r.text("constraint.kind", is_matrix_objective(c.objective) ? "spectral" : "linf"), balls);
        c.radius = r.real("constraint.radius", c.radius);
        require_positive("constraint.radius", c.radius);
    }

    if (auto preset = r.raw("algorithm.preset")) {
        if (!sfw || c.algorithm.clip || c.algorithm.variance_reduction) {
            bad("algorithm.preset", "presets choose clipping and variance reduction themselves; use algorithm.name = sfw");
        }
        try {
            c.preset = parse_preset_name(*preset);
        } catch (const ConfigError& e) {
            bad("algorithm.preset", e.what());
        }
        PresetConstants& p = c.preset_constants;
        p.D = r.opt_real("preset.D");
        switch (*c.preset) {
        case PresetName::thm33:
        case PresetName::cor31:
            p.gamma = r.real("preset.gamma", p.gamma);
            p.beta1 = r.real("preset.beta1", p.beta1);
            if (*c.preset == PresetName::thm33) {
                p.batch = r.integer<std::size_t>("preset.batch", p.batch);
            }
            break;
        case PresetName::thm41: p.batch = r.integer<std::size_t>("preset.batch", p.batch); break;
        case PresetName::cor42: break;
        case PresetName::thm43:
        case PresetName::thm44:
            p.L = r.opt_real("preset.L");
            p.G = r.opt_real("preset.G");
            p.sigma = r.opt_real("preset.sigma");
            p.p = r.real("preset.p", p.p);
            p.delta = r.real("preset.delta", p.delta);
            p.batch = r.integer<std::size_t>("preset.batch", p.batch);
            break;
        }
    } else {
        c.batch_size = r.integer<std::size_t>("batch.size", c.batch_size);
        require_positive_count("batch.size", c.batch_size);
        c.batch_initial = r.opt_integer<std::size_t>("batch.initial");
        if (c.batch_initial) {
            require_positive_count("batch.initial", *c.batch_initial);
        }

        const std::string step = step_key(c);
        switch (c.algorithm.family) {
        case AlgorithmFamily::sfw: break;
        case AlgorithmFamily::lion:
            c.eta = 1e-4;
            c.beta1 = 0.9;
            break;
        case AlgorithmFamily::muon: c.eta = 0.02; break;
        }
        c.eta = r.real("algorithm." + step, c.eta);
        static const std::pair<const char*, ScheduleKind> schedules[] = {
            {"constant", ScheduleKind::constant},
            {"cosine", ScheduleKind::cosine},
        };
        c.schedule = pick("algorithm.schedule", r.text("algorithm.schedule", "constant"), schedules);
        if (c.schedule == ScheduleKind::cosine) {
            c.eta_min = r.real("algorithm." + step + "_min", c.eta_min);
            if (!(c.eta_min >= 0.0 && c.eta_min <= c.eta)) {
                bad("algorithm." + step + "_min", "must lie in [0, algorithm." + step + "]");
            }
        }
        if (c.algorithm.clip) {
            c.clip = r.real("algorithm.clip", c.clip);
            require_positive("algorithm.clip", c.clip);
        }
        switch (c.algorithm.family) {
        case AlgorithmFamily::sfw:
            c.gamma = r.real("algorithm.gamma", c.gamma);
            c.beta1 = r.real("algorithm.beta1", c.beta1);
            break;
        case AlgorithmFamily::lion:
            c.beta1 = r.real("algorithm.beta1", c.beta1);
            c.beta2 = r.real("algorithm.beta2", c.beta2);
            c.weight_decay = r.real("algorithm.weight_decay", c.weight_decay);
            require_positive("algorithm.weight_decay", c.weight_decay);
            break;
        case AlgorithmFamily::muon: {
            c.momentum = r.real("algorithm.momentum", c.momentum);
            c.weight_decay = r.real("algorithm.weight_decay", c.weight_decay);
            require_positive("algorithm.weight_decay", c.weight_decay);
            static const std::pair<const char*, Orthogonalizer> orthos[] = {
                {"exact", Orthogonalizer::exact},
                {"newton_schulz", Orthogonalizer::newton_schulz},
            };
            c.orthogonalizer = pick("algorithm.orthogonalizer", r.text("algorithm.orthogonalizer", "exact"), orthos);
            if (c.orthogonalizer == Orthogonalizer::newton_schulz) {
                c.ns_iters = r.integer<std::size_t>("algorithm.ns_iters", c.ns_iters);
                require_positive_count("algorithm.ns_iters", c.ns_iters);
            }
            break;
        }
        }
    }

    c.horizon = r.integer<std::size_t>("run.T", c.horizon);
    require_positive_count("run.T", c.horizon);
    c.runs = r.integer<std::size_t>("run.runs", c.runs);
    require_positive_count("run.runs", c.runs);
    c.seed = r.integer<std::uint64_t>("run.seed", c.seed);
    c.gap_every = r.integer<std::size_t>("run.gap_every", c.gap_every);
    require_positive_count("run.gap_every", c.gap_every);
    c.output = r.text("run.output", c.output);

    static const std::pair<const char*, StartKind> starts[] = {
        {"zeros", StartKind::zeros},
        {"constant", StartKind::constant},
        {"gaussian", StartKind::gaussian},
    };
    c.start = pick("start.kind", r.text("start.kind", "zeros"), starts);
    if (c.start == StartKind::constant || c.start == StartKind::gaussian) {
        c.start_value = r.real("start.value", c.start == StartKind::gaussian ? 1.0 : c.start_value);
        if (!std::isfinite(c.start_value)) {
            bad("start.value", "must be finite");
        }
    }
    if (c.start == StartKind::gaussian) {
        c.start_seed = r.integer<std::uint64_t>("start.seed", c.start_seed);
    }

    r.finish();
    validate(c);
    if (c.preset) {
        resolve_preset(c);
    }
    return c;
}

std::string serialize_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, value] : to_key_values(config)) {
        out += key + " = " + value + "\n";
    }
    return out;
}

Objective make_objective(const ExperimentConfig& c) {
    switch (c.objective) {
    case ObjectiveKind::isotropic_quadratic: return Objective::isotropic_quadratic(c.dim);
    case ObjectiveKind::matrix_quadratic: return Objective::matrix_quadratic(c.rows, c.cols);
    case ObjectiveKind::convex_quadratic:
        return Objective::random_convex_quadratic(c.dim, c.eig_min, c.eig_max, c.objective_seed);
    case ObjectiveKind::least_squares: return Objective::random_least_squares(c.samples, c.dim, c.objective_seed);
    }
    throw ConfigError("objective.kind: unsupported");
}

ConstraintSet make_constraint(const ExperimentConfig& c) {
    const Shape shape = is_matrix_objective(c.objective) ? Shape::matrix_of(c.rows, c.cols) : Shape::vector(c.dim);
    switch (c.algorithm.family) {
    case AlgorithmFamily::sfw: return ConstraintSet(c.constraint, c.radius, shape);
    case AlgorithmFamily::lion:
        if (shape.matrix) {
            throw DimensionError("lion needs a vector objective");
        }
        return ConstraintSet(BallKind::linf, 1.0 / c.weight_decay, shape);
    case AlgorithmFamily::muon:
        if (!shape.matrix) {
            throw DimensionError("muon needs a matrix objective");
        }
        return ConstraintSet(BallKind::spectral, 1.0 / c.weight_decay, shape);
    }
    throw ConfigError("algorithm.name: unsupported");
}

Preset resolve_preset(const ExperimentConfig& c) {
    if (!c.preset) {
        throw ConfigError("algorithm.preset: not set");
    }
    PresetConstants p = c.preset_constants;
    const ConstraintSet set = make_constraint(c);
    if (!p.D) {
        p.D = diameter(set);
    }
    if (*c.preset == PresetName::thm43 || *c.preset == PresetName::thm44) {
        const Objective obj = make_objective(c);
        if (!p.L) {
            p.L = obj.smoothness();
        }
        if (!p.G) {
            p.G = euclidean_norm(obj.grad(ParamPoint::zeros(obj.shape()))) + *p.L * *p.D / 2.0;
        }
        if (!p.sigma) {
            if (c.objective == ObjectiveKind::least_squares) {
                bad("preset.sigma", "required for least-squares objectives");
            }
            switch (c.noise.kind) {
            case NoiseKind::none: p.sigma = 0.0; break;
            case NoiseKind::gaussian:
                p.sigma = c.noise.sigma * std::sqrt(static_cast<double>(obj.shape().size()));
                break;
            case NoiseKind::pareto: bad("preset.sigma", "required with pareto noise");
            }
        }
    }
    return make_preset(*c.preset, c.horizon, p);
}

BatchSchedule make_batch(const ExperimentConfig& c) {
    if (c.preset) {
        return resolve_preset(c).batch;
    }
    if (c.batch_initial) {
        return BatchSchedule::warm_start(*c.batch_initial, c.batch_size);
    }
    return BatchSchedule::constant(c.batch_size);
}

namespace {

Schedule step_schedule(const ExperimentConfig& c) {
    if (c.schedule == ScheduleKind::cosine) {
        return Schedule::cosine(c.eta, c.eta_min, c.horizon);
    }
    return Schedule::constant(c.eta);
}

std::optional<double> clip_of(const ExperimentConfig& c) {
    return c.algorithm.clip ? std::optional<double>(c.clip) : std::nullopt;
}

} // namespace

SfwParams make_sfw_params(const ExperimentConfig& c) {
    if (c.algorithm.family != AlgorithmFamily::sfw) {
        throw ConfigError("algorithm.name: not a Frank-Wolfe configuration");
    }
    if (c.preset) {
        return resolve_preset(c).params();
    }
    SfwParams p;
    p.eta = step_schedule(c);
    p.gamma = Schedule::constant(c.gamma);
    p.beta1 = Schedule::constant(c.beta1);
    p.clip = clip_of(c);
    p.variance_reduction = c.algorithm.variance_reduction;
    return p;
}

LionParams make_lion_params(const ExperimentConfig& c) {
    if (c.algorithm.family != AlgorithmFamily::lion) {
        throw ConfigError("algorithm.name: not a Lion configuration");
    }
    LionParams p;
    p.beta1 = c.beta1;
    p.beta2 = c.beta2;
    p.lr = step_schedule(c);
    p.weight_decay = c.weight_decay;
    p.clip = clip_of(c);
    p.variance_reduction = c.algorithm.variance_reduction;
    return p;
}

MuonParams make_muon_params(const ExperimentConfig& c) {
    if (c.algorithm.family != AlgorithmFamily::muon) {
        throw ConfigError("algorithm.name: not a Muon configuration");
    }
    MuonParams p;
    p.momentum = c.momentum;
    p.lr = step_schedule(c);
    p.weight_decay = c.weight_decay;
    p.clip = clip_of(c);
    p.variance_reduction = c.algorithm.variance_reduction;
    p.orthogonalizer = c.orthogonalizer;
    p.ns_iters = c.ns_iters;
    return p;
}

ParamPoint make_start(const ExperimentConfig& c) {
    const Shape shape = is_matrix_objective(c.objective) ? Shape::matrix_of(c.rows, c.cols) : Shape::vector(c.dim);
    ParamPoint x = ParamPoint::zeros(shape);
    switch (c.start) {
    case StartKind::zeros: break;
    case StartKind::constant:
        for (double& v : x.values()) {
            v = c.start_value;
        }
        break;
    case StartKind::gaussian: {
        const CounterRng rng(c.start_seed);
        auto values = x.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = c.start_value * rng.normal(0, i);
        }
        break;
    }
    }
    return x;
}

} // namespace fwopt
