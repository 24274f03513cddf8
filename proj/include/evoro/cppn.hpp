#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoro/rng.hpp"

namespace evoro {

enum class Activation { Linear, Tanh, Sine, Gaussian, Sigmoid, Abs };

double apply_activation(Activation a, double x);
std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct NodeGene {
    int id = 0;
    Activation activation = Activation::Linear;
    double bias = 0.0;
};

struct LinkGene {
    int source = 0;
    int target = 0;
    double weight = 0.0;
    int innovation = 0;
    bool enabled = true;
};

// Hands out innovation numbers and hidden-node ids for one run, so that
// structurally identical links in different genomes align under crossover.
class InnovationRegistry {
public:
    int link_innovation(int source, int target);
    int node_for_split(int link_innovation);
    // Unconditionally new id, for the rare split whose cached id is taken.
    int fresh_node_id() { return next_node_id_++; }

    nlohmann::json to_json() const;
    static InnovationRegistry from_json(const nlohmann::json& j);

    // Reserves ids below `first_free` for fixed input/output nodes.
    void reserve_node_ids(int first_free);

private:
    std::map<std::pair<int, int>, int> link_ids_;
    std::map<int, int> split_nodes_;
    int next_innovation_ = 0;
    int next_node_id_ = 0;
};

// Feed-forward compositional pattern producing network. Inputs occupy node
// ids [0, input_count), outputs [input_count, input_count + output_count).
// Value-semantic and immutable in normal use: variation returns new genomes.
struct CppnGenome {
    int input_count = 0;
    int output_count = 0;
    std::vector<NodeGene> nodes;
    std::vector<LinkGene> links;

    bool is_input(int node_id) const { return node_id < input_count; }
    bool is_output(int node_id) const {
        return node_id >= input_count && node_id < input_count + output_count;
    }

    // Throws std::invalid_argument describing the first violated invariant
    // (dangling link endpoint, duplicate innovation, cycle, ...).
    void validate() const;

    nlohmann::json to_json() const;
    static CppnGenome from_json(const nlohmann::json& j);
};

// Feed-forward evaluation in topological order. Throws on arity mismatch.
std::vector<double> cppn_eval(const CppnGenome& genome,
                              const std::vector<double>& inputs);

// Minimal genome: all inputs connected to all outputs, weights U[-1,1],
// linear inputs, tanh outputs, no hidden nodes.
CppnGenome random_genome(int input_count, int output_count,
                         InnovationRegistry& registry, Rng& rng);

struct MutationRates {
    double mutation_prob = 0.8;   // chance that any operator is applied
    double weight_prob = 0.8;     // operator mix, conditional on mutating
    double add_link_prob = 0.1;
    double add_node_prob = 0.1;
    double weight_sigma = 0.5;
};

// Low-level operators; mutate() composes them. Each returns a new genome.
CppnGenome mutate_weight(const CppnGenome& g, std::size_t link_index, double delta);
// Returns nullopt if the link would duplicate an existing one or close a cycle.
std::optional<CppnGenome> mutate_add_link(const CppnGenome& g, int source, int target,
                                          double weight, InnovationRegistry& registry);
CppnGenome mutate_add_node(const CppnGenome& g, std::size_t link_index,
                           Activation activation, InnovationRegistry& registry);

// With probability rates.mutation_prob applies exactly one operator
// (weight perturbation, add-link, or add-node); otherwise returns a copy.
// Add-link candidates are restricted to pairs that keep the network acyclic;
// if no such pair exists the operator falls back to a weight perturbation so
// an applied mutation always changes the genome.
CppnGenome mutate(const CppnGenome& g, const MutationRates& rates,
                  InnovationRegistry& registry, Rng& rng);

// With probability crossover_prob recombines: the child inherits parent_a's
// topology (a must be the fitter parent by the caller's ordering) and each
// link also present in parent_b takes its weight from a random parent.
// Otherwise returns a copy of parent_a. Throws on shape mismatch.
CppnGenome crossover(const CppnGenome& parent_a, const CppnGenome& parent_b,
                     Rng& rng, double crossover_prob = 0.8);

}  // namespace evoro
