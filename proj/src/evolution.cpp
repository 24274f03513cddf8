#include "evoro/evolution.hpp"

#include <algorithm>
#include <stdexcept>

#include "evoro/cpg.hpp"
#include "evoro/parallel.hpp"
#include "evoro/util.hpp"

namespace evoro {

std::string mode_name(Mode m) {
    return m == Mode::EvolutionOnly ? "evolution-only" : "learning";
}

Mode mode_from_name(const std::string& name) {
    if (name == "evolution-only") return Mode::EvolutionOnly;
    if (name == "learning") return Mode::EvolutionPlusLearning;
    throw std::invalid_argument("unknown mode: " + name +
                                " (expected evolution-only or learning)");
}

void EvoParams::validate() const {
    if (mu < 1) throw std::invalid_argument("population size must be at least 1");
    if (lambda < 1 || lambda > mu)
        throw std::invalid_argument("offspring count must be in [1, population]");
    if (generations < 0) throw std::invalid_argument("generations must be non-negative");
    if (tournament < 1) throw std::invalid_argument("tournament size must be at least 1");
    if (mutation_prob < 0.0 || mutation_prob > 1.0)
        throw std::invalid_argument("mutation probability must be in [0,1]");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw std::invalid_argument("crossover probability must be in [0,1]");
    if (threads < 1) throw std::invalid_argument("thread count must be at least 1");
    learner.validate();
    sim.validate();
}

// ---------------------------------------------------------------------------
// Selection and variation

namespace {

// Higher fitness wins; equal fitness prefers the older (lower) id.
bool fitter(const Individual& a, const Individual& b) {
    if (a.fitness_after != b.fitness_after) return a.fitness_after > b.fitness_after;
    return a.id < b.id;
}

int tournament_pick(const std::vector<Individual>& pop, int size, Rng& rng) {
    int best = static_cast<int>(rng.uniform_int(pop.size()));
    for (int t = 1; t < size; ++t) {
        int c = static_cast<int>(rng.uniform_int(pop.size()));
        if (fitter(pop[static_cast<std::size_t>(c)], pop[static_cast<std::size_t>(best)]))
            best = c;
    }
    return best;
}

}  // namespace

std::vector<std::pair<int, int>> select_parents(const std::vector<Individual>& pop,
                                                int pairs, int tournament_size,
                                                Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(pairs));
    for (int i = 0; i < pairs; ++i) {
        int a = tournament_pick(pop, tournament_size, rng);
        int b = tournament_pick(pop, tournament_size, rng);
        out.push_back({a, b});
    }
    return out;
}

Individual reproduce(const Individual& parent_a, const Individual& parent_b,
                     const EvoParams& params, InnovationRegistry& body_registry,
                     InnovationRegistry& brain_registry, Rng& rng, int id, int born) {
    // Crossover keeps the fitter parent's topology, so order the pair first.
    const Individual& lead = fitter(parent_a, parent_b) ? parent_a : parent_b;
    const Individual& other = (&lead == &parent_a) ? parent_b : parent_a;

    MutationRates rates;
    rates.mutation_prob = params.mutation_prob;

    Individual child;
    child.id = id;
    child.born = born;
    child.parents = (parent_a.id == parent_b.id)
                        ? std::vector<int>{parent_a.id}
                        : std::vector<int>{parent_a.id, parent_b.id};
    child.body_genome =
        mutate(crossover(lead.body_genome, other.body_genome, rng, params.crossover_prob),
               rates, body_registry, rng);
    child.brain_genome =
        mutate(crossover(lead.brain_genome, other.brain_genome, rng, params.crossover_prob),
               rates, brain_registry, rng);
    child.body = decode_body(child.body_genome);
    child.descriptors = compute_descriptors(child.body);
    child.inherited_weights = build_cpg(child.body, child.brain_genome).weights();
    return child;
}

std::vector<Individual> select_survivors(const std::vector<Individual>& parents,
                                         const std::vector<Individual>& offspring,
                                         int mu) {
    if (offspring.size() > static_cast<std::size_t>(mu))
        throw std::invalid_argument("more offspring than population slots");
    std::vector<Individual> ranked = parents;
    std::sort(ranked.begin(), ranked.end(), fitter);
    std::size_t keep = static_cast<std::size_t>(mu) - offspring.size();
    std::vector<Individual> next(ranked.begin(),
                                 ranked.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(keep, ranked.size())));
    next.insert(next.end(), offspring.begin(), offspring.end());
    std::sort(next.begin(), next.end(),
              [](const Individual& a, const Individual& b) { return a.id < b.id; });
    return next;
}

// ---------------------------------------------------------------------------
// Evaluation

long long evaluate_individual(Individual& ind, const EvoParams& params) {
    ind.body = decode_body(ind.body_genome);
    ind.descriptors = compute_descriptors(ind.body);
    bool mobile = cpg_topology(ind.body).weight_count() > 0;

    long long evals = 0;
    auto eval_brain = [&](const std::vector<double>& w, double* disp_out) {
        double fsum = 0.0, dsum = 0.0;
        for (double td : kTargetDirections) {
            Trajectory tr = simulate(ind.body, w, td, params.sim);
            fsum += fitness(fitness_components(tr, td));
            dsum += displacement_velocity(tr);
        }
        evals += 3;
        if (disp_out) *disp_out = dsum / 3.0;
        return fsum / 3.0;
    };

    if (params.mode == Mode::EvolutionOnly || !mobile) {
        double disp = 0.0;
        ind.fitness_before = eval_brain(ind.inherited_weights, &disp);
        ind.fitness_after = ind.fitness_before;
        ind.learned_weights = ind.inherited_weights;
        ind.displacement = disp;
        return evals;
    }

    // Lifetime learning. Its rng is keyed by individual id so the outcome is
    // the same no matter which thread runs it; displacement per evaluation
    // is logged so the best brain's value can be looked up instead of
    // re-simulated.
    std::vector<double> disp_log;
    Evaluator evaluator = [&](const std::vector<double>& w) {
        double d = 0.0;
        double f = eval_brain(w, &d);
        disp_log.push_back(d);
        return f;
    };
    Rng lrng(params.seed, Stream::Learner, static_cast<std::uint64_t>(ind.id));
    LearnResult lr = learn(ind.body, ind.inherited_weights, params.learner, evaluator, lrng);
    ind.fitness_before = lr.archive.front().fitness;
    ind.fitness_after = lr.best_fitness;
    ind.learned_weights = lr.best_weights;
    ind.displacement = disp_log[static_cast<std::size_t>(lr.best_index)];
    return evals;
}

namespace {

void evaluate_group(RunState& st, std::vector<Individual>& group) {
    std::vector<long long> counts(group.size(), 0);
    parallel_for(group.size(), st.params.threads, [&](std::size_t i) {
        counts[i] = evaluate_individual(group[i], st.params);
    });
    for (long long c : counts) st.evals += c;
}

GenealogyRecord make_record(const Individual& ind) {
    GenealogyRecord r;
    r.id = ind.id;
    r.parents = ind.parents;
    r.born = ind.born;
    r.fitness = ind.fitness_after;
    r.fitness_before = ind.fitness_before;
    r.displacement = ind.displacement;
    r.descriptors = ind.descriptors;
    return r;
}

GenStats compute_stats(int generation, const std::vector<Individual>& pop,
                       long long evals) {
    GenStats s;
    s.generation = generation;
    s.evals = evals;
    if (pop.empty()) return s;
    double n = static_cast<double>(pop.size());
    for (const Individual& ind : pop) {
        s.mean_fitness += ind.fitness_after;
        s.max_fitness = std::max(s.max_fitness, ind.fitness_after);
        s.mean_delta += ind.fitness_after - ind.fitness_before;
        s.mean_size += ind.descriptors.absolute_size;
        s.mean_proportion += ind.descriptors.proportion;
        s.mean_bricks += ind.descriptors.num_bricks;
        s.mean_rel_limbs += ind.descriptors.rel_limbs;
        s.mean_symmetry += ind.descriptors.symmetry;
        s.mean_branching += ind.descriptors.branching;
        s.mean_displacement += ind.displacement;
        s.max_displacement = std::max(s.max_displacement, ind.displacement);
    }
    s.mean_fitness /= n;
    s.mean_delta /= n;
    s.mean_size /= n;
    s.mean_proportion /= n;
    s.mean_bricks /= n;
    s.mean_rel_limbs /= n;
    s.mean_symmetry /= n;
    s.mean_branching /= n;
    s.mean_displacement /= n;
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Run loop

RunState init_run(const EvoParams& params) {
    params.validate();
    RunState st;
    st.params = params;
    st.rng_init = Rng(params.seed, Stream::Init);
    st.rng_variation = Rng(params.seed, Stream::Variation);

    for (int i = 0; i < params.mu; ++i) {
        Individual ind;
        ind.id = st.next_id++;
        ind.born = 0;
        ind.body_genome = random_genome(4, 5, st.body_registry, st.rng_init);
        ind.brain_genome = random_genome(6, 1, st.brain_registry, st.rng_init);
        ind.body = decode_body(ind.body_genome);
        ind.inherited_weights = build_cpg(ind.body, ind.brain_genome).weights();
        st.population.push_back(std::move(ind));
    }
    evaluate_group(st, st.population);
    for (const Individual& ind : st.population)
        st.genealogy.push_back(make_record(ind));
    st.stats.push_back(compute_stats(0, st.population, st.evals));
    return st;
}

void advance_generation(RunState& st) {
    const EvoParams& p = st.params;
    auto pairs = select_parents(st.population, p.lambda, p.tournament, st.rng_variation);

    std::vector<Individual> offspring;
    offspring.reserve(pairs.size());
    for (auto [a, b] : pairs)
        offspring.push_back(reproduce(st.population[static_cast<std::size_t>(a)],
                                      st.population[static_cast<std::size_t>(b)], p,
                                      st.body_registry, st.brain_registry,
                                      st.rng_variation, st.next_id++,
                                      st.generation + 1));

    evaluate_group(st, offspring);
    for (const Individual& ind : offspring)
        st.genealogy.push_back(make_record(ind));

    st.population = select_survivors(st.population, offspring, p.mu);
    st.generation += 1;
    st.stats.push_back(compute_stats(st.generation, st.population, st.evals));
}

RunState run_evolution(const EvoParams& params, int stop_after) {
    RunState st = init_run(params);
    resume_run(st, stop_after);
    return st;
}

void resume_run(RunState& st, int stop_after) {
    while (st.generation < st.params.generations &&
           (stop_after < 0 || st.generation < stop_after))
        advance_generation(st);
}

// ---------------------------------------------------------------------------
// Exports

std::string stats_csv(const std::vector<GenStats>& stats) {
    std::string out =
        "# schema=stats-v1\n"
        "generation,mean_fitness,max_fitness,mean_delta,mean_size,mean_proportion,"
        "mean_bricks,mean_rel_limbs,mean_symmetry,mean_branching,"
        "mean_displacement,max_displacement,evals\n";
    for (const GenStats& s : stats) {
        out += std::to_string(s.generation);
        for (double v : {s.mean_fitness, s.max_fitness, s.mean_delta, s.mean_size,
                         s.mean_proportion, s.mean_bricks, s.mean_rel_limbs,
                         s.mean_symmetry, s.mean_branching, s.mean_displacement,
                         s.max_displacement}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += std::to_string(s.evals);
        out += '\n';
    }
    return out;
}

std::string genealogy_dot(const std::vector<GenealogyRecord>& records) {
    double lo = 0.0, hi = 0.0;
    for (const GenealogyRecord& r : records) {
        lo = std::min(lo, r.fitness);
        hi = std::max(hi, r.fitness);
    }
    std::string out = "digraph genealogy {\n  node [style=filled];\n";
    for (const GenealogyRecord& r : records) {
        // Heat color: low fitness blue (hue 2/3), high fitness red (hue 0).
        double norm = hi > lo ? (r.fitness - lo) / (hi - lo) : 0.0;
        double hue = (2.0 / 3.0) * (1.0 - norm);
        out += "  r" + std::to_string(r.id) + " [label=\"" + std::to_string(r.id) +
               "\" color=\"" + format_double(hue) + " 0.6 0.9\" fitness=\"" +
               format_double(r.fitness) + "\" generation=\"" + std::to_string(r.born) +
               "\"];\n";
    }
    for (const GenealogyRecord& r : records)
        for (int p : r.parents)
            out += "  r" + std::to_string(p) + " -> r" + std::to_string(r.id) + ";\n";
    out += "}\n";
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json EvoParams::to_json() const {
    return {{"mu", mu},
            {"lambda", lambda},
            {"generations", generations},
            {"tournament", tournament},
            {"mutation_prob", mutation_prob},
            {"crossover_prob", crossover_prob},
            {"mode", mode_name(mode)},
            {"learner",
             {{"population", learner.population},
              {"scale", learner.scale},
              {"crossover_p", learner.crossover_p},
              {"neighbors", learner.neighbors},
              {"iterations", learner.iterations},
              {"init_sigma", learner.init_sigma}}},
            {"sim",
             {{"duration", sim.duration},
              {"sample_interval", sim.sample_interval},
              {"control_step", sim.control_step},
              {"dt", sim.dt},
              {"thrust_coeff", sim.thrust_coeff},
              {"turn_coeff", sim.turn_coeff},
              {"target_distance", sim.target_distance}}},
            {"seed", seed}};
}

EvoParams EvoParams::from_json(const nlohmann::json& j) {
    EvoParams p;
    p.mu = j.at("mu").get<int>();
    p.lambda = j.at("lambda").get<int>();
    p.generations = j.at("generations").get<int>();
    p.tournament = j.at("tournament").get<int>();
    p.mutation_prob = j.at("mutation_prob").get<double>();
    p.crossover_prob = j.at("crossover_prob").get<double>();
    p.mode = mode_from_name(j.at("mode").get<std::string>());
    const nlohmann::json& l = j.at("learner");
    p.learner.population = l.at("population").get<int>();
    p.learner.scale = l.at("scale").get<double>();
    p.learner.crossover_p = l.at("crossover_p").get<double>();
    p.learner.neighbors = l.at("neighbors").get<int>();
    p.learner.iterations = l.at("iterations").get<int>();
    p.learner.init_sigma = l.at("init_sigma").get<double>();
    const nlohmann::json& s = j.at("sim");
    p.sim.duration = s.at("duration").get<double>();
    p.sim.sample_interval = s.at("sample_interval").get<double>();
    p.sim.control_step = s.at("control_step").get<double>();
    p.sim.dt = s.at("dt").get<double>();
    p.sim.thrust_coeff = s.at("thrust_coeff").get<double>();
    p.sim.turn_coeff = s.at("turn_coeff").get<double>();
    p.sim.target_distance = s.at("target_distance").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

namespace {

nlohmann::json individual_to_json(const Individual& ind) {
    return {{"id", ind.id},
            {"parents", ind.parents},
            {"body_genome", ind.body_genome.to_json()},
            {"brain_genome", ind.brain_genome.to_json()},
            {"inherited_weights", ind.inherited_weights},
            {"learned_weights", ind.learned_weights},
            {"fitness_before", ind.fitness_before},
            {"fitness_after", ind.fitness_after},
            {"displacement", ind.displacement},
            {"born", ind.born}};
}

Individual individual_from_json(const nlohmann::json& j) {
    Individual ind;
    ind.id = j.at("id").get<int>();
    ind.parents = j.at("parents").get<std::vector<int>>();
    ind.body_genome = CppnGenome::from_json(j.at("body_genome"));
    ind.brain_genome = CppnGenome::from_json(j.at("brain_genome"));
    ind.inherited_weights = j.at("inherited_weights").get<std::vector<double>>();
    ind.learned_weights = j.at("learned_weights").get<std::vector<double>>();
    ind.fitness_before = j.at("fitness_before").get<double>();
    ind.fitness_after = j.at("fitness_after").get<double>();
    ind.displacement = j.at("displacement").get<double>();
    ind.born = j.at("born").get<int>();
    ind.body = decode_body(ind.body_genome);
    ind.descriptors = compute_descriptors(ind.body);
    return ind;
}

nlohmann::json stats_to_json(const GenStats& s) {
    return {{"generation", s.generation},
            {"mean_fitness", s.mean_fitness},
            {"max_fitness", s.max_fitness},
            {"mean_delta", s.mean_delta},
            {"mean_size", s.mean_size},
            {"mean_proportion", s.mean_proportion},
            {"mean_bricks", s.mean_bricks},
            {"mean_rel_limbs", s.mean_rel_limbs},
            {"mean_symmetry", s.mean_symmetry},
            {"mean_branching", s.mean_branching},
            {"mean_displacement", s.mean_displacement},
            {"max_displacement", s.max_displacement},
            {"evals", s.evals}};
}

GenStats stats_from_json(const nlohmann::json& j) {
    GenStats s;
    s.generation = j.at("generation").get<int>();
    s.mean_fitness = j.at("mean_fitness").get<double>();
    s.max_fitness = j.at("max_fitness").get<double>();
    s.mean_delta = j.at("mean_delta").get<double>();
    s.mean_size = j.at("mean_size").get<double>();
    s.mean_proportion = j.at("mean_proportion").get<double>();
    s.mean_bricks = j.at("mean_bricks").get<double>();
    s.mean_rel_limbs = j.at("mean_rel_limbs").get<double>();
    s.mean_symmetry = j.at("mean_symmetry").get<double>();
    s.mean_branching = j.at("mean_branching").get<double>();
    s.mean_displacement = j.at("mean_displacement").get<double>();
    s.max_displacement = j.at("max_displacement").get<double>();
    s.evals = j.at("evals").get<long long>();
    return s;
}

}  // namespace

nlohmann::json RunState::to_json() const {
    nlohmann::json pop = nlohmann::json::array();
    for (const Individual& ind : population) pop.push_back(individual_to_json(ind));
    nlohmann::json stats_j = nlohmann::json::array();
    for (const GenStats& s : stats) stats_j.push_back(stats_to_json(s));
    nlohmann::json gen_j = nlohmann::json::array();
    for (const GenealogyRecord& r : genealogy)
        gen_j.push_back({{"id", r.id},
                         {"parents", r.parents},
                         {"born", r.born},
                         {"fitness", r.fitness},
                         {"fitness_before", r.fitness_before},
                         {"displacement", r.displacement},
                         {"size", r.descriptors.absolute_size},
                         {"proportion", r.descriptors.proportion},
                         {"bricks", r.descriptors.num_bricks},
                         {"rel_limbs", r.descriptors.rel_limbs},
                         {"symmetry", r.descriptors.symmetry},
                         {"branching", r.descriptors.branching}});
    return {{"params", params.to_json()},
            {"generation", generation},
            {"evals", evals},
            {"next_id", next_id},
            {"population", pop},
            {"body_registry", body_registry.to_json()},
            {"brain_registry", brain_registry.to_json()},
            {"rng_init", rng_init.save_state()},
            {"rng_variation", rng_variation.save_state()},
            {"stats", stats_j},
            {"genealogy", gen_j}};
}

RunState RunState::from_json(const nlohmann::json& j) {
    RunState st;
    st.params = EvoParams::from_json(j.at("params"));
    st.generation = j.at("generation").get<int>();
    st.evals = j.at("evals").get<long long>();
    st.next_id = j.at("next_id").get<int>();
    for (const auto& e : j.at("population"))
        st.population.push_back(individual_from_json(e));
    st.body_registry = InnovationRegistry::from_json(j.at("body_registry"));
    st.brain_registry = InnovationRegistry::from_json(j.at("brain_registry"));
    st.rng_init.load_state(j.at("rng_init").get<std::string>());
    st.rng_variation.load_state(j.at("rng_variation").get<std::string>());
    for (const auto& e : j.at("stats")) st.stats.push_back(stats_from_json(e));
    for (const auto& e : j.at("genealogy")) {
        GenealogyRecord r;
        r.id = e.at("id").get<int>();
        r.parents = e.at("parents").get<std::vector<int>>();
        r.born = e.at("born").get<int>();
        r.fitness = e.at("fitness").get<double>();
        r.fitness_before = e.at("fitness_before").get<double>();
        r.displacement = e.at("displacement").get<double>();
        r.descriptors.absolute_size = e.at("size").get<int>();
        r.descriptors.proportion = e.at("proportion").get<double>();
        r.descriptors.num_bricks = e.at("bricks").get<int>();
        r.descriptors.rel_limbs = e.at("rel_limbs").get<double>();
        r.descriptors.symmetry = e.at("symmetry").get<double>();
        r.descriptors.branching = e.at("branching").get<double>();
        st.genealogy.push_back(r);
    }
    return st;
}

}  // namespace evoro
