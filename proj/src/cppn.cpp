#include "evoro/cppn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace evoro {

namespace {

// Operator mix for add-node; outputs always use tanh, inputs are linear.
constexpr Activation kHiddenActivations[] = {
    Activation::Sine, Activation::Gaussian, Activation::Sigmoid,
    Activation::Linear, Activation::Abs};

}  // namespace

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Linear:   return x;
        case Activation::Tanh:     return std::tanh(x);
        case Activation::Sine:     return std::sin(x);
        case Activation::Gaussian: return std::exp(-0.5 * x * x);
        case Activation::Sigmoid:  return 1.0 / (1.0 + std::exp(-x));
        case Activation::Abs:      return std::fabs(x);
    }
    throw std::logic_error("unknown activation");
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Linear:   return "linear";
        case Activation::Tanh:     return "tanh";
        case Activation::Sine:     return "sine";
        case Activation::Gaussian: return "gaussian";
        case Activation::Sigmoid:  return "sigmoid";
        case Activation::Abs:      return "abs";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sine") return Activation::Sine;
    if (name == "gaussian") return Activation::Gaussian;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "abs") return Activation::Abs;
    throw std::invalid_argument("unknown activation name: " + name);
}

// ---------------------------------------------------------------------------
// InnovationRegistry

int InnovationRegistry::link_innovation(int source, int target) {
    auto key = std::make_pair(source, target);
    auto it = link_ids_.find(key);
    if (it != link_ids_.end()) return it->second;
    int id = next_innovation_++;
    link_ids_.emplace(key, id);
    return id;
}

int InnovationRegistry::node_for_split(int link_innovation) {
    auto it = split_nodes_.find(link_innovation);
    if (it != split_nodes_.end()) return it->second;
    int id = next_node_id_++;
    split_nodes_.emplace(link_innovation, id);
    return id;
}

void InnovationRegistry::reserve_node_ids(int first_free) {
    next_node_id_ = std::max(next_node_id_, first_free);
}

nlohmann::json InnovationRegistry::to_json() const {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& [key, id] : link_ids_)
        links.push_back({key.first, key.second, id});
    nlohmann::json splits = nlohmann::json::array();
    for (const auto& [innov, node] : split_nodes_)
        splits.push_back({innov, node});
    return {{"links", links},
            {"splits", splits},
            {"next_innovation", next_innovation_},
            {"next_node_id", next_node_id_}};
}

InnovationRegistry InnovationRegistry::from_json(const nlohmann::json& j) {
    InnovationRegistry r;
    for (const auto& e : j.at("links"))
        r.link_ids_[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<int>();
    for (const auto& e : j.at("splits"))
        r.split_nodes_[e.at(0).get<int>()] = e.at(1).get<int>();
    r.next_innovation_ = j.at("next_innovation").get<int>();
    r.next_node_id_ = j.at("next_node_id").get<int>();
    return r;
}

// ---------------------------------------------------------------------------
// Genome invariants and evaluation

namespace {

// Topological order over the full link set, smallest node id first among
// ready nodes so the order is independent of container iteration quirks.
// Returns empty if the links contain a cycle.
std::vector<int> topological_order(const CppnGenome& g) {
    std::map<int, int> indegree;
    std::map<int, std::vector<int>> successors;
    for (const auto& n : g.nodes) indegree[n.id];
    for (const auto& l : g.links) {
        ++indegree[l.target];
        successors[l.source].push_back(l.target);
    }
    std::set<int> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.insert(id);
    std::vector<int> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        int id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (int next : successors[id])
            if (--indegree[next] == 0) ready.insert(next);
    }
    if (order.size() != g.nodes.size()) return {};
    return order;
}

}  // namespace

void CppnGenome::validate() const {
    if (input_count < 0 || output_count < 0)
        throw std::invalid_argument("negative node counts");
    std::set<int> node_ids;
    for (const auto& n : nodes)
        if (!node_ids.insert(n.id).second)
            throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
    for (int i = 0; i < input_count + output_count; ++i)
        if (!node_ids.count(i))
            throw std::invalid_argument("missing fixed node id " + std::to_string(i));
    std::set<int> innovations;
    std::set<std::pair<int, int>> endpoints;
    for (const auto& l : links) {
        if (!node_ids.count(l.source) || !node_ids.count(l.target))
            throw std::invalid_argument("link endpoint references missing node");
        if (is_input(l.target))
            throw std::invalid_argument("link targets an input node");
        if (l.source == l.target)
            throw std::invalid_argument("self-loop on node " + std::to_string(l.source));
        if (!innovations.insert(l.innovation).second)
            throw std::invalid_argument("duplicate innovation " + std::to_string(l.innovation));
        if (!endpoints.insert({l.source, l.target}).second)
            throw std::invalid_argument("parallel link between same nodes");
    }
    if (topological_order(*this).empty() && !nodes.empty())
        throw std::invalid_argument("link set contains a cycle");
}

std::vector<double> cppn_eval(const CppnGenome& genome,
                              const std::vector<double>& inputs) {
    if (static_cast<int>(inputs.size()) != genome.input_count)
        throw std::invalid_argument("expected " + std::to_string(genome.input_count) +
                                    " inputs, got " + std::to_string(inputs.size()));
    std::vector<int> order = topological_order(genome);
    if (order.empty() && !genome.nodes.empty())
        throw std::invalid_argument("genome contains a cycle");

    std::map<int, const NodeGene*> node_by_id;
    for (const auto& n : genome.nodes) node_by_id[n.id] = &n;
    std::map<int, std::vector<const LinkGene*>> incoming;
    for (const auto& l : genome.links)
        if (l.enabled) incoming[l.target].push_back(&l);

    std::map<int, double> value;
    for (int id : order) {
        if (genome.is_input(id)) {
            value[id] = inputs[static_cast<std::size_t>(id)];
            continue;
        }
        const NodeGene* n = node_by_id.at(id);
        double sum = n->bias;
        auto it = incoming.find(id);
        if (it != incoming.end())
            for (const LinkGene* l : it->second) sum += l->weight * value.at(l->source);
        value[id] = apply_activation(n->activation, sum);
    }

    std::vector<double> outputs(static_cast<std::size_t>(genome.output_count));
    for (int o = 0; o < genome.output_count; ++o)
        outputs[static_cast<std::size_t>(o)] = value.at(genome.input_count + o);
    return outputs;
}

// ---------------------------------------------------------------------------
// Construction and variation

CppnGenome random_genome(int input_count, int output_count,
                         InnovationRegistry& registry, Rng& rng) {
    registry.reserve_node_ids(input_count + output_count);
    CppnGenome g;
    g.input_count = input_count;
    g.output_count = output_count;
    for (int i = 0; i < input_count; ++i)
        g.nodes.push_back({i, Activation::Linear, 0.0});
    for (int o = 0; o < output_count; ++o)
        g.nodes.push_back({input_count + o, Activation::Tanh, 0.0});
    for (int i = 0; i < input_count; ++i)
        for (int o = 0; o < output_count; ++o) {
            LinkGene l;
            l.source = i;
            l.target = input_count + o;
            l.weight = rng.uniform(-1.0, 1.0);
            l.innovation = registry.link_innovation(l.source, l.target);
            g.links.push_back(l);
        }
    return g;
}

CppnGenome mutate_weight(const CppnGenome& g, std::size_t link_index, double delta) {
    if (link_index >= g.links.size())
        throw std::out_of_range("link index out of range");
    CppnGenome out = g;
    out.links[link_index].weight += delta;
    return out;
}

namespace {

// True if `from` can reach `to` along existing links (any enabled state),
// in which case adding to->from would close a cycle.
bool reaches(const CppnGenome& g, int from, int to) {
    std::map<int, std::vector<int>> successors;
    for (const auto& l : g.links) successors[l.source].push_back(l.target);
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        if (id == to) return true;
        for (int next : successors[id])
            if (seen.insert(next).second) stack.push_back(next);
    }
    return false;
}

}  // namespace

std::optional<CppnGenome> mutate_add_link(const CppnGenome& g, int source, int target,
                                          double weight, InnovationRegistry& registry) {
    if (source == target || g.is_input(target)) return std::nullopt;
    for (const auto& l : g.links)
        if (l.source == source && l.target == target) return std::nullopt;
    if (reaches(g, target, source)) return std::nullopt;
    CppnGenome out = g;
    LinkGene l;
    l.source = source;
    l.target = target;
    l.weight = weight;
    l.innovation = registry.link_innovation(source, target);
    out.links.push_back(l);
    return out;
}

CppnGenome mutate_add_node(const CppnGenome& g, std::size_t link_index,
                           Activation activation, InnovationRegistry& registry) {
    if (link_index >= g.links.size())
        throw std::out_of_range("link index out of range");
    CppnGenome out = g;
    LinkGene& split = out.links[link_index];
    split.enabled = false;

    int node_id = registry.node_for_split(split.innovation);
    // A crossover can re-enable a link that an ancestor already split, so the
    // registry's cached node id may collide with a node this genome carries.
    bool taken = std::any_of(out.nodes.begin(), out.nodes.end(),
                             [&](const NodeGene& n) { return n.id == node_id; });
    if (taken) node_id = registry.fresh_node_id();
    out.nodes.push_back({node_id, activation, 0.0});

    LinkGene in;
    in.source = split.source;
    in.target = node_id;
    in.weight = 1.0;
    in.innovation = registry.link_innovation(in.source, in.target);
    LinkGene down;
    down.source = node_id;
    down.target = split.target;
    down.weight = split.weight;
    down.innovation = registry.link_innovation(down.source, down.target);
    out.links.push_back(in);
    out.links.push_back(down);
    return out;
}

namespace {

std::vector<std::size_t> enabled_link_indices(const CppnGenome& g) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.links.size(); ++i)
        if (g.links[i].enabled) idx.push_back(i);
    return idx;
}

CppnGenome perturb_random_weight(const CppnGenome& g, double sigma, Rng& rng) {
    std::vector<std::size_t> idx = enabled_link_indices(g);
    if (idx.empty()) return g;
    std::size_t pick = idx[rng.uniform_int(idx.size())];
    return mutate_weight(g, pick, rng.normal(0.0, sigma));
}

}  // namespace

CppnGenome mutate(const CppnGenome& g, const MutationRates& rates,
                  InnovationRegistry& registry, Rng& rng) {
    if (!rng.bernoulli(rates.mutation_prob)) return g;

    double total = rates.weight_prob + rates.add_link_prob + rates.add_node_prob;
    double roll = rng.uniform() * total;

    if (roll < rates.weight_prob) {
        return perturb_random_weight(g, rates.weight_sigma, rng);
    }
    if (roll < rates.weight_prob + rates.add_link_prob) {
        // Enumerate pairs that would keep the network a DAG; node order is
        // fixed by the genome's node list so the choice is reproducible.
        std::vector<std::pair<int, int>> candidates;
        for (const auto& a : g.nodes)
            for (const auto& b : g.nodes) {
                if (a.id == b.id || g.is_input(b.id)) continue;
                bool exists = false;
                for (const auto& l : g.links)
                    if (l.source == a.id && l.target == b.id) { exists = true; break; }
                if (exists || reaches(g, b.id, a.id)) continue;
                candidates.emplace_back(a.id, b.id);
            }
        if (candidates.empty()) return perturb_random_weight(g, rates.weight_sigma, rng);
        auto [src, tgt] = candidates[rng.uniform_int(candidates.size())];
        double weight = rng.uniform(-1.0, 1.0);
        auto out = mutate_add_link(g, src, tgt, weight, registry);
        return out ? *out : g;
    }

    std::vector<std::size_t> idx = enabled_link_indices(g);
    if (idx.empty()) return g;
    std::size_t pick = idx[rng.uniform_int(idx.size())];
    Activation act = kHiddenActivations[rng.uniform_int(std::size(kHiddenActivations))];
    return mutate_add_node(g, pick, act, registry);
}

CppnGenome crossover(const CppnGenome& parent_a, const CppnGenome& parent_b,
                     Rng& rng, double crossover_prob) {
    if (parent_a.input_count != parent_b.input_count ||
        parent_a.output_count != parent_b.output_count)
        throw std::invalid_argument("crossover between different genome shapes");
    if (!rng.bernoulli(crossover_prob)) return parent_a;

    std::map<int, const LinkGene*> b_by_innovation;
    for (const auto& l : parent_b.links) b_by_innovation[l.innovation] = &l;

    CppnGenome child = parent_a;
    for (auto& l : child.links) {
        auto it = b_by_innovation.find(l.innovation);
        if (it == b_by_innovation.end()) continue;
        if (rng.bernoulli(0.5)) {
            l.weight = it->second->weight;
            l.enabled = it->second->enabled;
        }
    }
    return child;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json CppnGenome::to_json() const {
    nlohmann::json nodes_j = nlohmann::json::array();
    for (const auto& n : nodes)
        nodes_j.push_back({{"id", n.id},
                           {"activation", activation_name(n.activation)},
                           {"bias", n.bias}});
    nlohmann::json links_j = nlohmann::json::array();
    for (const auto& l : links)
        links_j.push_back({{"source", l.source},
                           {"target", l.target},
                           {"weight", l.weight},
                           {"innovation", l.innovation},
                           {"enabled", l.enabled}});
    return {{"input_count", input_count},
            {"output_count", output_count},
            {"nodes", nodes_j},
            {"links", links_j}};
}

CppnGenome CppnGenome::from_json(const nlohmann::json& j) {
    CppnGenome g;
    g.input_count = j.at("input_count").get<int>();
    g.output_count = j.at("output_count").get<int>();
    for (const auto& n : j.at("nodes"))
        g.nodes.push_back({n.at("id").get<int>(),
                           activation_from_name(n.at("activation").get<std::string>()),
                           n.at("bias").get<double>()});
    for (const auto& l : j.at("links")) {
        LinkGene lg;
        lg.source = l.at("source").get<int>();
        lg.target = l.at("target").get<int>();
        lg.weight = l.at("weight").get<double>();
        lg.innovation = l.at("innovation").get<int>();
        lg.enabled = l.at("enabled").get<bool>();
        g.links.push_back(lg);
    }
    g.validate();
    return g;
}

}  // namespace evoro
