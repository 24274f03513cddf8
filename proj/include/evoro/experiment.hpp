#pragma once

#include <string>

#include "evoro/config.hpp"

namespace evoro {

// Runs every repetition of the experiment (repetition r uses seed + r) and
// writes, under cfg.out_dir:
//   config.toml            effective settings
//   rep<r>/stats.csv       one row per generation
//   rep<r>/individuals.csv one row per robot ever evaluated
//   rep<r>/genealogy.dot   lineage graph
//   rep<r>/trajectory_td{0,120,240}.csv   best robot's paths
//   rep<r>/checkpoint.json rewritten after every generation
//   summary.json           cross-repetition statistics
// With resume=true a repetition restarts from its checkpoint when one
// exists. stop_after >= 0 ends each run after that many generations (the
// checkpoint stays valid; this is how resumption is tested).
void run_experiment(const ExperimentConfig& cfg, bool resume = false,
                    int stop_after = -1);

// Reads a finished run directory and writes <dir>/analysis/: per-generation
// descriptor means and the learning-delta curve across repetitions, binned
// fitness landscapes over descriptor pairs, and a trajectory density grid.
void analyze_run(const std::string& dir, int bins = 20);

}  // namespace evoro
