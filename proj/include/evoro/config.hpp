#pragma once

#include <string>

#include "evoro/evolution.hpp"

namespace evoro {

struct ExperimentConfig {
    EvoParams evo;
    int repetitions = 1;
    std::string out_dir = "runs/out";

    void validate() const;
};

// Minimal TOML reader covering what experiment files use: [section] headers,
// key = value lines with strings, integers, floats and booleans, and '#'
// comments. Unknown sections or keys are an error, so a typo cannot pass as
// a default silently. Errors carry the line number.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// The config back as TOML, for echoing the effective settings into run dirs.
std::string config_toml(const ExperimentConfig& cfg);

}  // namespace evoro
