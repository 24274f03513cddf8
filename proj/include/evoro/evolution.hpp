#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "evoro/cppn.hpp"
#include "evoro/fitness.hpp"
#include "evoro/learner.hpp"
#include "evoro/morphology.hpp"
#include "evoro/rng.hpp"
#include "evoro/simulation.hpp"

namespace evoro {

enum class Mode { EvolutionOnly, EvolutionPlusLearning };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct EvoParams {
    int mu = 100;          // population size
    int lambda = 50;       // offspring per generation
    int generations = 30;
    int tournament = 2;
    double mutation_prob = 0.8;
    double crossover_prob = 0.8;
    Mode mode = Mode::EvolutionOnly;
    LearnerParams learner;
    SimConfig sim;
    std::uint64_t seed = 1;
    int threads = 1;  // execution knob only; results are thread-count
                      // independent, so it is never serialized

    void validate() const;
    nlohmann::json to_json() const;
    static EvoParams from_json(const nlohmann::json& j);
};

struct Individual {
    int id = 0;
    std::vector<int> parents;  // empty for founders; one entry when both
                               // tournament picks landed on the same parent
    CppnGenome body_genome;
    CppnGenome brain_genome;
    std::vector<double> inherited_weights;
    std::vector<double> learned_weights;  // equals inherited without learning
    double fitness_before = 0.0;
    double fitness_after = 0.0;
    double displacement = 0.0;  // mean displacement velocity over the three
                                // directions, measured with the final brain
    int born = 0;

    // Phenotype caches, rebuilt after deserialization.
    Morphology body;
    MorphDescriptors descriptors;
};

struct GenStats {
    int generation = 0;
    double mean_fitness = 0.0;  // fitness_after across the population
    double max_fitness = 0.0;
    double mean_delta = 0.0;    // fitness_after - fitness_before
    double mean_size = 0.0;
    double mean_proportion = 0.0;
    double mean_bricks = 0.0;
    double mean_rel_limbs = 0.0;
    double mean_symmetry = 0.0;
    double mean_branching = 0.0;
    double mean_displacement = 0.0;
    double max_displacement = 0.0;
    long long evals = 0;  // cumulative single-direction simulations
};

// One line per robot ever created: lineage for the DOT export plus the
// measurements the landscape analysis bins, since most robots do not
// survive to the final population.
struct GenealogyRecord {
    int id = 0;
    std::vector<int> parents;
    int born = 0;
    double fitness = 0.0;  // after learning, the selection currency
    double fitness_before = 0.0;
    double displacement = 0.0;
    MorphDescriptors descriptors;
};

// Everything a run needs to continue: population, innovation registries,
// live rng streams, and the artifacts accumulated so far.
struct RunState {
    EvoParams params;
    int generation = 0;  // completed generations (0 after init)
    long long evals = 0;
    int next_id = 0;
    std::vector<Individual> population;
    InnovationRegistry body_registry;
    InnovationRegistry brain_registry;
    Rng rng_init{0};
    Rng rng_variation{0};
    std::vector<GenStats> stats;
    std::vector<GenealogyRecord> genealogy;

    nlohmann::json to_json() const;
    static RunState from_json(const nlohmann::json& j);
};

// Binary-tournament parent pairs (indices into pop); selection compares
// fitness_after, ties prefer the lower id.
std::vector<std::pair<int, int>> select_parents(const std::vector<Individual>& pop,
                                                int pairs, int tournament_size,
                                                Rng& rng);

// One child: crossover of both genomes (fitter parent's topology leads),
// then mutation, then the inherited brain built on the child's own body.
Individual reproduce(const Individual& parent_a, const Individual& parent_b,
                     const EvoParams& params, InnovationRegistry& body_registry,
                     InnovationRegistry& brain_registry, Rng& rng, int id, int born);

// Top mu - lambda parents by fitness (ties to lower id) plus every
// offspring; result sorted by id.
std::vector<Individual> select_survivors(const std::vector<Individual>& parents,
                                         const std::vector<Individual>& offspring,
                                         int mu);

// Decodes the body, measures fitness with the inherited brain, and in
// learning mode runs the weight learner (seeded from the root seed and this
// individual's id, so results do not depend on thread scheduling). Returns
// the number of single-direction simulations spent.
long long evaluate_individual(Individual& ind, const EvoParams& params);

RunState init_run(const EvoParams& params);
void advance_generation(RunState& st);

// Full run; stop_after (when >= 0) ends the loop early with a valid state,
// which is how resumption gets exercised.
RunState run_evolution(const EvoParams& params, int stop_after = -1);
void resume_run(RunState& st, int stop_after = -1);

std::string stats_csv(const std::vector<GenStats>& stats);
std::string genealogy_dot(const std::vector<GenealogyRecord>& records);

}  // namespace evoro
