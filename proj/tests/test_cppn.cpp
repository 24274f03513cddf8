#include <cmath>
#include <set>

#include "doctest.h"

#include "evoro/cppn.hpp"

using namespace evoro;

namespace {

// One linear input wired straight to one linear output, weight 1.
CppnGenome identity_genome() {
    CppnGenome g;
    g.input_count = 1;
    g.output_count = 1;
    g.nodes = {{0, Activation::Linear, 0.0}, {1, Activation::Linear, 0.0}};
    g.links = {{0, 1, 1.0, 0, true}};
    g.validate();
    return g;
}

}  // namespace

TEST_CASE("a weight-1 linear chain passes its input through") {
    CppnGenome g = identity_genome();
    CHECK(cppn_eval(g, {0.5})[0] == 0.5);
    CHECK(cppn_eval(g, {-0.25})[0] == -0.25);
}

TEST_CASE("an output with no enabled links produces its bias through the activation") {
    CppnGenome g = identity_genome();
    g.links[0].enabled = false;
    g.nodes[1].bias = 0.75;
    CHECK(cppn_eval(g, {123.0})[0] == 0.75);
    g.nodes[1].activation = Activation::Tanh;
    CHECK(cppn_eval(g, {123.0})[0] == doctest::Approx(std::tanh(0.75)).epsilon(1e-12));
}

TEST_CASE("evaluation rejects the wrong number of inputs") {
    CppnGenome g = identity_genome();
    CHECK_THROWS(cppn_eval(g, {}));
    CHECK_THROWS(cppn_eval(g, {1.0, 2.0}));
}

TEST_CASE("fresh genomes fully connect inputs to outputs") {
    InnovationRegistry reg;
    Rng rng(1, Stream::Init);
    CppnGenome body = random_genome(4, 5, reg, rng);
    CHECK(body.links.size() == 20);
    CHECK(body.nodes.size() == 9);
    body.validate();

    CppnGenome brain = random_genome(6, 1, reg, rng);
    CHECK(brain.links.size() == 6);
    for (const LinkGene& l : brain.links) {
        CHECK(l.weight >= -1.0);
        CHECK(l.weight <= 1.0);
    }
}

TEST_CASE("same seed builds byte-identical genomes") {
    InnovationRegistry reg_a, reg_b;
    Rng a(17, Stream::Init), b(17, Stream::Init);
    CppnGenome ga = random_genome(4, 5, reg_a, a);
    CppnGenome gb = random_genome(4, 5, reg_b, b);
    CHECK(ga.to_json().dump() == gb.to_json().dump());
}

TEST_CASE("the registry hands out one innovation id per directed pair") {
    InnovationRegistry reg;
    int ab = reg.link_innovation(3, 9);
    CHECK(reg.link_innovation(3, 9) == ab);
    CHECK(reg.link_innovation(9, 3) != ab);
    int split = reg.node_for_split(ab);
    CHECK(reg.node_for_split(ab) == split);

    InnovationRegistry back = InnovationRegistry::from_json(reg.to_json());
    CHECK(back.link_innovation(3, 9) == ab);
    CHECK(back.node_for_split(ab) == split);
}

TEST_CASE("splitting a link with a linear node preserves the function exactly") {
    InnovationRegistry reg;
    reg.reserve_node_ids(2);
    CppnGenome g = identity_genome();
    g.links[0].weight = -0.625;
    g.links[0].innovation = reg.link_innovation(0, 1);
    CppnGenome split = mutate_add_node(g, 0, Activation::Linear, reg);
    split.validate();
    CHECK(split.nodes.size() == 3);
    CHECK(split.links.size() == 3);  // the split link stays, disabled
    int enabled = 0;
    for (const LinkGene& l : split.links) enabled += l.enabled ? 1 : 0;
    CHECK(enabled == 2);
    for (double x : {0.0, 0.5, -1.25, 3.0})
        CHECK(cppn_eval(split, {x})[0] == cppn_eval(g, {x})[0]);
}

TEST_CASE("add-link refuses duplicates and cycles") {
    InnovationRegistry reg;
    Rng rng(2, Stream::Init);
    CppnGenome g = random_genome(2, 1, reg, rng);
    CHECK_FALSE(mutate_add_link(g, 0, 2, 0.5, reg).has_value());  // already present
    CppnGenome split = mutate_add_node(g, 0, Activation::Sine, reg);
    int hidden = split.nodes.back().id;
    CHECK_FALSE(mutate_add_link(split, hidden, hidden, 0.5, reg).has_value());
    CHECK_FALSE(mutate_add_link(split, 2, hidden, 0.5, reg).has_value());  // output feeds hidden: cycle back
}

TEST_CASE("validation rejects malformed genomes") {
    CppnGenome g = identity_genome();

    CppnGenome into_input = g;
    into_input.links.push_back({1, 0, 0.5, 1, true});
    CHECK_THROWS(into_input.validate());

    CppnGenome dup_innovation = g;
    dup_innovation.nodes.push_back({2, Activation::Sine, 0.0});
    dup_innovation.links.push_back({0, 2, 0.5, 0, true});
    CHECK_THROWS(dup_innovation.validate());

    CppnGenome cycle = g;
    cycle.nodes.push_back({2, Activation::Sine, 0.0});
    cycle.nodes.push_back({3, Activation::Sine, 0.0});
    cycle.links.push_back({2, 3, 0.5, 1, true});
    cycle.links.push_back({3, 2, 0.5, 2, true});
    cycle.links.push_back({0, 2, 0.5, 3, true});
    cycle.links.push_back({3, 1, 0.5, 4, true});
    CHECK_THROWS(cycle.validate());

    CppnGenome dangling = g;
    dangling.links.push_back({0, 42, 0.5, 1, true});
    CHECK_THROWS(dangling.validate());
}

TEST_CASE("crossover keeps the fitter parent's topology and mixes matching weights") {
    CppnGenome a;
    a.input_count = 2;
    a.output_count = 1;
    a.nodes = {{0, Activation::Linear, 0.0},
               {1, Activation::Linear, 0.0},
               {2, Activation::Tanh, 0.0}};
    a.links = {{0, 2, 0.25, 1, true}, {1, 2, 0.5, 2, true}};
    CppnGenome b = a;
    b.links[0].weight = -0.75;
    b.links[1].innovation = 7;  // disjoint from a's link 2
    b.links[1].weight = 0.9;

    Rng rng(5, Stream::Variation);
    std::set<double> matched_weights;
    for (int i = 0; i < 200; ++i) {
        CppnGenome child = crossover(a, b, rng, 1.0);
        child.validate();
        REQUIRE(child.links.size() == 2);
        CHECK(child.links[0].innovation == 1);
        CHECK(child.links[1].innovation == 2);       // b's disjoint link 7 never appears
        CHECK(child.links[1].weight == 0.5);         // unmatched genes come from a
        matched_weights.insert(child.links[0].weight);
    }
    CHECK(matched_weights == std::set<double>{-0.75, 0.25});
}

TEST_CASE("crossover of a genome with itself is the identity") {
    InnovationRegistry reg;
    Rng rng(8, Stream::Init);
    CppnGenome g = random_genome(4, 5, reg, rng);
    CppnGenome child = crossover(g, g, rng, 1.0);
    CHECK(child.to_json().dump() == g.to_json().dump());
}

TEST_CASE("the mutation gate fires at its configured rate") {
    InnovationRegistry reg;
    Rng rng(13, Stream::Variation);
    CppnGenome g = random_genome(4, 5, reg, rng);
    MutationRates rates;  // mutation_prob 0.8
    int changed = 0;
    for (int i = 0; i < 1000; ++i) {
        CppnGenome mutant = mutate(g, rates, reg, rng);
        if (mutant.to_json().dump() != g.to_json().dump()) ++changed;
    }
    // Binomial(1000, 0.8) is within 50 of its mean beyond 4 sigma.
    CHECK(changed > 750);
    CHECK(changed < 850);
}

TEST_CASE("ten thousand mutation steps never break genome invariants") {
    InnovationRegistry reg;
    Rng rng(99, Stream::Variation);
    MutationRates rates;
    for (int genome_round = 0; genome_round < 100; ++genome_round) {
        CppnGenome g = random_genome(4, 5, reg, rng);
        for (int step = 0; step < 100; ++step) {
            g = mutate(g, rates, reg, rng);
            g.validate();
        }
        std::vector<double> out =
            cppn_eval(g, {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3),
                          rng.uniform(-3, 3)});
        REQUIRE(out.size() == 5);
        for (double v : out) CHECK(std::isfinite(v));
    }
}

TEST_CASE("genomes survive a JSON round-trip") {
    InnovationRegistry reg;
    Rng rng(21, Stream::Init);
    CppnGenome g = random_genome(4, 5, reg, rng);
    MutationRates rates;
    for (int i = 0; i < 50; ++i) g = mutate(g, rates, reg, rng);
    CppnGenome back = CppnGenome::from_json(g.to_json());
    CHECK(back.to_json().dump() == g.to_json().dump());
}
