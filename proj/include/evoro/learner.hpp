#pragma once

#include <functional>
#include <tuple>
#include <vector>

#include "evoro/morphology.hpp"
#include "evoro/rng.hpp"

namespace evoro {

struct LearnerParams {
    int population = 10;      // X, candidate vectors kept between iterations
    double scale = 0.5;       // F, differential step size
    double crossover_p = 0.9; // per-dimension chance to take the donor value
    int neighbors = 3;        // K, archive neighbors averaged by the surrogate
    int iterations = 10;      // g
    double init_sigma = 0.5;  // noise around the inherited weights at init

    void validate() const;  // throws std::invalid_argument
};

struct ArchiveEntry {
    std::vector<double> weights;
    double fitness = 0.0;  // always from a real evaluation, never the surrogate
};

using Archive = std::vector<ArchiveEntry>;

// Reversible triplet transform:
//   y1 = xi + F (xj - xk);  y2 = xj + F (xk - y1);  y3 = xk + F (y1 - y2).
// No clamping here; that happens after crossover. Throws on length mismatch.
std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>
revde_triplet(const std::vector<double>& xi, const std::vector<double>& xj,
              const std::vector<double>& xk, double scale);

// Per-dimension Bernoulli(p) choice of donor y over base x, clamped to [-1,1].
std::vector<double> uniform_crossover(const std::vector<double>& donor,
                                      const std::vector<double>& base, double p,
                                      Rng& rng);

// Mean fitness of the K archive entries nearest the candidate in weight
// space (all of them when the archive is smaller); distance ties keep the
// earlier entry. Throws on an empty archive.
double knn_predict(const Archive& archive, const std::vector<double>& candidate,
                   int k);

struct LearnTracePoint {
    int iteration = 0;        // 0 is the init population
    double best_real = 0.0;   // best real fitness seen so far
    double pred_error = 0.0;  // mean |predicted - real| this iteration, 0 at init
};

struct LearnResult {
    std::vector<double> best_weights;
    double best_fitness = 0.0;
    int best_index = 0;  // archive slot of the best entry
    double delta = 0.0;  // best_fitness minus the inherited brain's fitness
    int evals_used = 0;  // real evaluations, X * (iterations + 1) for a mobile body
    Archive archive;     // evaluation order, inherited brain first
    std::vector<LearnTracePoint> trace;
};

using Evaluator = std::function<double(const std::vector<double>&)>;

// Lifetime weight learning for one body. Starts from the inherited brain
// plus population-1 Gaussian mutants, then iterates: sample triplets from
// the current population, build 3X candidates (triplet transform + crossover
// with the producing triplet member), keep the X the surrogate ranks best,
// evaluate those for real, and keep the best X of old and new by real
// fitness. The inherited brain is archived first, so delta is never
// negative. A body without joints learns nothing and spends no evaluations.
LearnResult learn(const Morphology& m, const std::vector<double>& inherited,
                  const LearnerParams& params, const Evaluator& evaluate, Rng& rng);

// CSV block for the trace: iteration,best_real,pred_error.
std::string learn_trace_csv(const std::vector<LearnTracePoint>& trace);

}  // namespace evoro
