#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "evoro/config.hpp"
#include "evoro/csv.hpp"
#include "evoro/experiment.hpp"
#include "evoro/fitness.hpp"
#include "evoro/learner.hpp"
#include "evoro/util.hpp"

namespace {

int cmd_learn(const std::string& body_path, const std::string& brain_path,
              evoro::LearnerParams params, std::uint64_t seed, double duration,
              const std::string& trace_path, bool flat_eval) {
    evoro::Morphology body =
        evoro::Morphology::from_json(nlohmann::json::parse(evoro::read_file(body_path)));
    evoro::CpgNetwork net = evoro::cpg_topology(body);
    std::vector<double> inherited(net.weight_count(), 0.0);
    if (!brain_path.empty()) {
        inherited = evoro::brain_weights_from_json(
            nlohmann::json::parse(evoro::read_file(brain_path)));
        if (inherited.size() != net.weight_count())
            throw std::invalid_argument("brain file has " + std::to_string(inherited.size()) +
                                        " weights, body needs " +
                                        std::to_string(net.weight_count()));
    }

    evoro::SimConfig sim;
    sim.duration = duration;
    sim.validate();
    evoro::Evaluator evaluate;
    if (flat_eval) {
        evaluate = [](const std::vector<double>&) { return 0.0; };
    } else {
        evaluate = [&](const std::vector<double>& w) {
            double f[3];
            for (int i = 0; i < 3; ++i) {
                double td = evoro::kTargetDirections[i];
                f[i] = evoro::fitness(evoro::fitness_components(
                    evoro::simulate(body, w, td, sim), td));
            }
            return evoro::aggregate_fitness(f[0], f[1], f[2]);
        };
    }

    evoro::Rng rng(seed, evoro::Stream::Learner);
    evoro::LearnResult res = evoro::learn(body, inherited, params, evaluate, rng);
    if (!trace_path.empty()) evoro::write_file(trace_path, evoro::learn_trace_csv(res.trace));

    std::cout << "joints: " << net.joint_count() << "\n"
              << "weights: " << net.weight_count() << "\n"
              << "evals: " << res.evals_used << "\n"
              << "best_fitness: " << evoro::format_double(res.best_fitness) << "\n"
              << "delta: " << evoro::format_double(res.delta) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evoro: evolves modular robot bodies and brains for targeted "
                 "locomotion, with optional per-robot brain learning"};
    app.require_subcommand(1);

    // evolve
    std::string config_path;
    std::string mode_str;
    std::string out_dir;
    int generations = 0, mu = 0, lambda = 0, repetitions = 0, threads = 0;
    std::uint64_t seed = 0;
    bool resume = false;
    int stop_after = -1;
    CLI::App* evolve = app.add_subcommand("evolve", "run an evolution experiment");
    evolve->add_option("--config", config_path, "TOML config file");
    evolve->add_option("--mode", mode_str, "evolution-only or learning");
    evolve->add_option("--generations", generations);
    evolve->add_option("--population", mu);
    evolve->add_option("--offspring", lambda);
    evolve->add_option("--seed", seed);
    evolve->add_option("--repetitions", repetitions);
    evolve->add_option("--threads", threads);
    evolve->add_option("--out", out_dir, "output directory");
    evolve->add_flag("--resume", resume, "continue from rep<k>/checkpoint.json");
    evolve->add_option("--stop-after-generation", stop_after)->group("");

    // learn
    std::string body_path, brain_path, trace_path;
    evoro::LearnerParams lp;
    std::uint64_t learn_seed = 1;
    double learn_duration = 50.0;
    bool flat_eval = false;
    CLI::App* learn = app.add_subcommand("learn", "run brain learning on one body");
    learn->add_option("--body", body_path, "morphology JSON file")->required();
    learn->add_option("--brain", brain_path, "initial brain weights JSON file");
    learn->add_option("--learn-pop", lp.population);
    learn->add_option("--scale", lp.scale);
    learn->add_option("--crossover-p", lp.crossover_p);
    learn->add_option("--neighbors", lp.neighbors);
    learn->add_option("--iterations", lp.iterations);
    learn->add_option("--init-sigma", lp.init_sigma);
    learn->add_option("--seed", learn_seed);
    learn->add_option("--duration", learn_duration, "seconds per simulation");
    learn->add_option("--trace", trace_path, "write per-iteration trace CSV here");
    learn->add_flag("--flat-eval", flat_eval,
                    "score every brain 0 instead of simulating (plumbing checks)");

    // analyze
    std::string dir;
    int bins = 20;
    CLI::App* analyze = app.add_subcommand("analyze", "summarize a finished run directory");
    analyze->add_option("--dir", dir, "run directory written by evolve")->required();
    analyze->add_option("--bins", bins, "landscape and density grid resolution");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve->parsed()) {
            // Flags override the config file.
            evoro::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = evoro::parse_config_file(config_path);
            if (evolve->count("--mode")) cfg.evo.mode = evoro::mode_from_name(mode_str);
            if (evolve->count("--generations")) cfg.evo.generations = generations;
            if (evolve->count("--population")) cfg.evo.mu = mu;
            if (evolve->count("--offspring")) cfg.evo.lambda = lambda;
            if (evolve->count("--seed")) cfg.evo.seed = seed;
            if (evolve->count("--repetitions")) cfg.repetitions = repetitions;
            if (evolve->count("--threads")) cfg.evo.threads = threads;
            if (evolve->count("--out")) cfg.out_dir = out_dir;
            cfg.validate();
            evoro::run_experiment(cfg, resume, stop_after);
            std::cout << "wrote " << cfg.out_dir << "\n";
            return 0;
        }
        if (learn->parsed())
            return cmd_learn(body_path, brain_path, lp, learn_seed, learn_duration,
                             trace_path, flat_eval);
        if (analyze->parsed()) {
            evoro::analyze_run(dir, bins);
            std::cout << "wrote " << dir << "/analysis\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
