#include "evoro/config.hpp"

#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "evoro/csv.hpp"
#include "evoro/util.hpp"

namespace evoro {

void ExperimentConfig::validate() const {
    evo.validate();
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (out_dir.empty()) throw std::invalid_argument("output directory must be set");
}

namespace {

struct TomlValue {
    enum class Kind { Str, Int, Float, Bool } kind = Kind::Str;
    std::string s;
    long long i = 0;
    double f = 0.0;
    bool b = false;
    int line = 0;
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

TomlValue parse_value(std::string raw, int line) {
    TomlValue v;
    v.line = line;
    raw = trim(raw);
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') {
        std::size_t close = raw.find('"', 1);
        if (close == std::string::npos) fail(line, "unterminated string");
        if (!trim(raw.substr(close + 1)).empty()) fail(line, "junk after string value");
        v.kind = TomlValue::Kind::Str;
        v.s = raw.substr(1, close - 1);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::Bool;
        v.b = (raw == "true");
        return v;
    }
    char* end = nullptr;
    long long i = std::strtoll(raw.c_str(), &end, 10);
    if (end && *end == '\0') {
        v.kind = TomlValue::Kind::Int;
        v.i = i;
        return v;
    }
    double f = std::strtod(raw.c_str(), &end);
    if (end && *end == '\0') {
        v.kind = TomlValue::Kind::Float;
        v.f = f;
        return v;
    }
    fail(line, "cannot parse value: " + raw);
}

// Strip a trailing comment, respecting a single quoted string on the line.
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

using KeyMap = std::map<std::string, TomlValue>;

KeyMap parse_toml_subset(const std::string& text) {
    KeyMap out;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(lineno, "empty section name");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(lineno, "empty key");
        std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full)) fail(lineno, "duplicate key " + full);
        out[full] = parse_value(line.substr(eq + 1), lineno);
    }
    return out;
}

double take_float(KeyMap& m, const std::string& key, double fallback) {
    auto it = m.find(key);
    if (it == m.end()) return fallback;
    TomlValue v = it->second;
    m.erase(it);
    if (v.kind == TomlValue::Kind::Float) return v.f;
    if (v.kind == TomlValue::Kind::Int) return static_cast<double>(v.i);
    fail(v.line, key + " must be a number");
}

long long take_int(KeyMap& m, const std::string& key, long long fallback) {
    auto it = m.find(key);
    if (it == m.end()) return fallback;
    TomlValue v = it->second;
    m.erase(it);
    if (v.kind != TomlValue::Kind::Int) fail(v.line, key + " must be an integer");
    return v.i;
}

std::string take_string(KeyMap& m, const std::string& key, const std::string& fallback) {
    auto it = m.find(key);
    if (it == m.end()) return fallback;
    TomlValue v = it->second;
    m.erase(it);
    if (v.kind != TomlValue::Kind::Str) fail(v.line, key + " must be a quoted string");
    return v.s;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    KeyMap keys = parse_toml_subset(text);
    ExperimentConfig cfg;
    EvoParams& e = cfg.evo;

    e.mu = static_cast<int>(take_int(keys, "evolution.population", e.mu));
    e.lambda = static_cast<int>(take_int(keys, "evolution.offspring", e.lambda));
    e.generations = static_cast<int>(take_int(keys, "evolution.generations", e.generations));
    e.tournament = static_cast<int>(take_int(keys, "evolution.tournament", e.tournament));
    e.mutation_prob = take_float(keys, "evolution.mutation_prob", e.mutation_prob);
    e.crossover_prob = take_float(keys, "evolution.crossover_prob", e.crossover_prob);
    e.mode = mode_from_name(take_string(keys, "evolution.mode", mode_name(e.mode)));
    e.seed = static_cast<std::uint64_t>(
        take_int(keys, "evolution.seed", static_cast<long long>(e.seed)));
    e.threads = static_cast<int>(take_int(keys, "evolution.threads", e.threads));

    LearnerParams& l = e.learner;
    l.population = static_cast<int>(take_int(keys, "learner.population", l.population));
    l.scale = take_float(keys, "learner.scale", l.scale);
    l.crossover_p = take_float(keys, "learner.crossover_p", l.crossover_p);
    l.neighbors = static_cast<int>(take_int(keys, "learner.neighbors", l.neighbors));
    l.iterations = static_cast<int>(take_int(keys, "learner.iterations", l.iterations));
    l.init_sigma = take_float(keys, "learner.init_sigma", l.init_sigma);

    SimConfig& s = e.sim;
    s.duration = take_float(keys, "simulation.duration", s.duration);
    s.sample_interval = take_float(keys, "simulation.sample_interval", s.sample_interval);
    s.control_step = take_float(keys, "simulation.control_step", s.control_step);
    s.dt = take_float(keys, "simulation.dt", s.dt);
    s.thrust_coeff = take_float(keys, "simulation.thrust_coeff", s.thrust_coeff);
    s.turn_coeff = take_float(keys, "simulation.turn_coeff", s.turn_coeff);
    s.target_distance = take_float(keys, "simulation.target_distance", s.target_distance);

    cfg.repetitions =
        static_cast<int>(take_int(keys, "experiment.repetitions", cfg.repetitions));
    cfg.out_dir = take_string(keys, "experiment.out", cfg.out_dir);

    if (!keys.empty()) {
        const auto& [key, value] = *keys.begin();
        fail(value.line, "unknown key " + key);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_file(path));
}

std::string config_toml(const ExperimentConfig& cfg) {
    const EvoParams& e = cfg.evo;
    std::string out;
    out += "[evolution]\n";
    out += "population = " + std::to_string(e.mu) + "\n";
    out += "offspring = " + std::to_string(e.lambda) + "\n";
    out += "generations = " + std::to_string(e.generations) + "\n";
    out += "tournament = " + std::to_string(e.tournament) + "\n";
    out += "mutation_prob = " + format_double(e.mutation_prob) + "\n";
    out += "crossover_prob = " + format_double(e.crossover_prob) + "\n";
    out += "mode = \"" + mode_name(e.mode) + "\"\n";
    out += "seed = " + std::to_string(e.seed) + "\n\n";
    out += "[learner]\n";
    out += "population = " + std::to_string(e.learner.population) + "\n";
    out += "scale = " + format_double(e.learner.scale) + "\n";
    out += "crossover_p = " + format_double(e.learner.crossover_p) + "\n";
    out += "neighbors = " + std::to_string(e.learner.neighbors) + "\n";
    out += "iterations = " + std::to_string(e.learner.iterations) + "\n";
    out += "init_sigma = " + format_double(e.learner.init_sigma) + "\n\n";
    out += "[simulation]\n";
    out += "duration = " + format_double(e.sim.duration) + "\n";
    out += "sample_interval = " + format_double(e.sim.sample_interval) + "\n";
    out += "control_step = " + format_double(e.sim.control_step) + "\n";
    out += "dt = " + format_double(e.sim.dt) + "\n";
    out += "thrust_coeff = " + format_double(e.sim.thrust_coeff) + "\n";
    out += "turn_coeff = " + format_double(e.sim.turn_coeff) + "\n";
    out += "target_distance = " + format_double(e.sim.target_distance) + "\n\n";
    out += "[experiment]\n";
    out += "repetitions = " + std::to_string(cfg.repetitions) + "\n";
    // The destination directory is where this echo lives; writing it into
    // the file would make otherwise identical runs compare unequal.
    return out;
}

}  // namespace evoro
