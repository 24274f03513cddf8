#include "evoro/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "json.hpp"

#include "evoro/csv.hpp"
#include "evoro/util.hpp"

namespace fs = std::filesystem;

namespace evoro {

namespace {

std::string join_parents(const std::vector<int>& parents) {
    std::string out;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(parents[i]);
    }
    return out;
}

std::string individuals_csv(const std::vector<GenealogyRecord>& records) {
    std::string out =
        "# schema=individuals-v1\n"
        "id,parents,born,fitness_before,fitness_after,displacement,"
        "size,proportion,bricks,rel_limbs,symmetry,branching\n";
    for (const GenealogyRecord& r : records) {
        out += std::to_string(r.id) + ',' + join_parents(r.parents) + ',' +
               std::to_string(r.born) + ',' + format_double(r.fitness_before) + ',' +
               format_double(r.fitness) + ',' + format_double(r.displacement) + ',' +
               std::to_string(r.descriptors.absolute_size) + ',' +
               format_double(r.descriptors.proportion) + ',' +
               std::to_string(r.descriptors.num_bricks) + ',' +
               format_double(r.descriptors.rel_limbs) + ',' +
               format_double(r.descriptors.symmetry) + ',' +
               format_double(r.descriptors.branching) + '\n';
    }
    return out;
}

void write_best_trajectories(const RunState& st, const std::string& rep_dir) {
    if (st.population.empty()) return;
    const Individual* best = &st.population.front();
    for (const Individual& ind : st.population)
        if (ind.fitness_after > best->fitness_after ||
            (ind.fitness_after == best->fitness_after && ind.id < best->id))
            best = &ind;
    const int labels[3] = {0, 120, 240};
    for (int i = 0; i < 3; ++i) {
        Trajectory tr = simulate(best->body, best->learned_weights,
                                 kTargetDirections[i], st.params.sim);
        write_file(rep_dir + "/trajectory_td" + std::to_string(labels[i]) + ".csv",
                   trajectory_csv(tr));
    }
}

void write_rep_artifacts(const RunState& st, const std::string& rep_dir) {
    write_file(rep_dir + "/stats.csv", stats_csv(st.stats));
    write_file(rep_dir + "/individuals.csv", individuals_csv(st.genealogy));
    write_file(rep_dir + "/genealogy.dot", genealogy_dot(st.genealogy));
    write_best_trajectories(st, rep_dir);
}

// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return {mean, std::sqrt(var)};
}

nlohmann::json across_rep_curves(const std::vector<std::vector<GenStats>>& all,
                                 double GenStats::*field) {
    std::size_t gens = 0;
    for (const auto& s : all) gens = std::max(gens, s.size());
    nlohmann::json means = nlohmann::json::array();
    nlohmann::json stds = nlohmann::json::array();
    for (std::size_t g = 0; g < gens; ++g) {
        std::vector<double> vals;
        for (const auto& s : all)
            if (g < s.size()) vals.push_back(s[g].*field);
        auto [m, sd] = mean_std(vals);
        means.push_back(m);
        stds.push_back(sd);
    }
    return {{"mean", means}, {"std", stds}};
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, bool resume, int stop_after) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir + "/config.toml", config_toml(cfg));

    std::vector<std::vector<GenStats>> all_stats;
    std::vector<long long> rep_evals;
    nlohmann::json per_rep = nlohmann::json::array();

    for (int r = 0; r < cfg.repetitions; ++r) {
        EvoParams p = cfg.evo;
        p.seed = cfg.evo.seed + static_cast<std::uint64_t>(r);
        std::string rep_dir = cfg.out_dir + "/rep" + std::to_string(r);
        fs::create_directories(rep_dir);
        std::string ckpt_path = rep_dir + "/checkpoint.json";

        RunState st;
        if (resume && fs::exists(ckpt_path)) {
            st = RunState::from_json(nlohmann::json::parse(read_file(ckpt_path)));
        } else {
            st = init_run(p);
            write_file(ckpt_path, st.to_json().dump());
        }
        while (st.generation < st.params.generations &&
               (stop_after < 0 || st.generation < stop_after)) {
            advance_generation(st);
            write_file(ckpt_path, st.to_json().dump());
        }
        write_rep_artifacts(st, rep_dir);

        all_stats.push_back(st.stats);
        rep_evals.push_back(st.evals);
        per_rep.push_back({{"rep", r},
                           {"seed", st.params.seed},
                           {"generations", st.generation},
                           {"evals", st.evals},
                           {"final_mean_fitness", st.stats.back().mean_fitness},
                           {"final_max_fitness", st.stats.back().max_fitness}});
    }

    // Evaluation accounting, reported two ways: counting every robot, and
    // counting only the offspring the generational arithmetic usually quotes.
    const EvoParams& e = cfg.evo;
    long long per_robot = (e.mode == Mode::EvolutionPlusLearning)
                              ? 3LL * e.learner.population * (e.learner.iterations + 1)
                              : 3LL;
    long long expected_all = (e.mu + static_cast<long long>(e.lambda) * e.generations) * per_robot;
    long long expected_offspring =
        (e.lambda + static_cast<long long>(e.lambda) * e.generations) * per_robot;
    long long actual_total = 0;
    for (long long v : rep_evals) actual_total += v;

    nlohmann::json summary = {
        {"schema", "summary-v1"},
        {"config", cfg.evo.to_json()},
        {"repetitions", cfg.repetitions},
        {"per_generation",
         {{"mean_fitness", across_rep_curves(all_stats, &GenStats::mean_fitness)},
          {"max_fitness", across_rep_curves(all_stats, &GenStats::max_fitness)},
          {"mean_delta", across_rep_curves(all_stats, &GenStats::mean_delta)}}},
        {"per_rep", per_rep},
        {"evaluations",
         {{"actual_total", actual_total},
          {"actual_per_rep", rep_evals},
          {"expected_per_run_all_individuals", expected_all},
          {"expected_per_run_offspring_accounting", expected_offspring}}}};
    write_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Analysis

namespace {

struct Landscape {
    int bins;
    std::vector<long long> count;
    std::vector<double> sum;

    explicit Landscape(int b) : bins(b), count(static_cast<std::size_t>(b) * b, 0),
                                sum(static_cast<std::size_t>(b) * b, 0.0) {}

    // v in [0,1] mapped to a bin, top edge included in the last bin.
    std::size_t bin_of(double v) const {
        int b = static_cast<int>(std::floor(v * bins));
        return static_cast<std::size_t>(std::clamp(b, 0, bins - 1));
    }

    void add(double x, double y, double fitness) {
        std::size_t idx = bin_of(y) * static_cast<std::size_t>(bins) + bin_of(x);
        count[idx] += 1;
        sum[idx] += fitness;
    }

    std::string csv(const std::string& x_name, const std::string& y_name) const {
        std::string out = "# schema=landscape-v1\n# x=" + x_name + " y=" + y_name +
                          " range=[0,1]\nx_bin,y_bin,x_center,y_center,count,mean_fitness\n";
        double w = 1.0 / bins;
        for (int yb = 0; yb < bins; ++yb)
            for (int xb = 0; xb < bins; ++xb) {
                std::size_t idx = static_cast<std::size_t>(yb) * bins + xb;
                double mean = count[idx] ? sum[idx] / static_cast<double>(count[idx]) : 0.0;
                out += std::to_string(xb) + ',' + std::to_string(yb) + ',' +
                       format_double((xb + 0.5) * w) + ',' + format_double((yb + 0.5) * w) +
                       ',' + std::to_string(count[idx]) + ',' + format_double(mean) + '\n';
            }
        return out;
    }
};

std::vector<std::string> rep_dirs(const std::string& dir) {
    std::vector<std::string> out;
    for (int r = 0;; ++r) {
        std::string rep = dir + "/rep" + std::to_string(r);
        if (!fs::is_directory(rep)) break;
        out.push_back(rep);
    }
    return out;
}

}  // namespace

void analyze_run(const std::string& dir, int bins) {
    if (bins < 1) throw std::invalid_argument("bins must be at least 1");
    std::vector<std::string> reps = rep_dirs(dir);
    if (reps.empty())
        throw std::runtime_error(
            "no repetition directories under " + dir +
            "; expected rep<k>/stats.csv, rep<k>/individuals.csv and "
            "rep<k>/trajectory_td{0,120,240}.csv as written by an evolve run");

    std::string analysis = dir + "/analysis";
    fs::create_directories(analysis);

    // Per-generation curves across repetitions, from the stats tables.
    std::vector<CsvTable> stats;
    for (const std::string& rep : reps) {
        std::string path = rep + "/stats.csv";
        if (!fs::exists(path)) throw std::runtime_error("missing " + path);
        stats.push_back(parse_csv(read_file(path)));
    }
    std::size_t gens = 0;
    for (const CsvTable& t : stats) gens = std::max(gens, t.rows.size());

    const char* desc_cols[6] = {"mean_size",     "mean_proportion", "mean_bricks",
                                "mean_rel_limbs", "mean_symmetry",   "mean_branching"};
    std::string desc_out = "# schema=descriptor-means-v1\ngeneration";
    for (const char* c : desc_cols) {
        desc_out += std::string(",") + c;
        desc_out += std::string(",std_") + (c + 5);  // strip the "mean_" prefix
    }
    desc_out += '\n';
    std::string delta_out = "# schema=delta-curve-v1\ngeneration,mean_delta,std_delta\n";
    for (std::size_t g = 0; g < gens; ++g) {
        desc_out += std::to_string(g);
        for (const char* c : desc_cols) {
            std::vector<double> vals;
            for (const CsvTable& t : stats)
                if (g < t.rows.size()) vals.push_back(t.number(g, t.column(c)));
            auto [m, sd] = mean_std(vals);
            desc_out += ',' + format_double(m) + ',' + format_double(sd);
        }
        desc_out += '\n';
        std::vector<double> deltas;
        for (const CsvTable& t : stats)
            if (g < t.rows.size()) deltas.push_back(t.number(g, t.column("mean_delta")));
        auto [dm, dsd] = mean_std(deltas);
        delta_out += std::to_string(g) + ',' + format_double(dm) + ',' + format_double(dsd) + '\n';
    }
    write_file(analysis + "/descriptor_means.csv", desc_out);
    write_file(analysis + "/delta_curve.csv", delta_out);

    // Fitness landscapes over descriptor pairs, pooled over every robot of
    // every repetition. Counts are normalized into [0,1]: bricks out of the
    // 9 a ten-module body can hold, size out of the ten-module cap.
    Landscape bricks_limbs(bins);
    Landscape size_symmetry(bins);
    for (const std::string& rep : reps) {
        std::string path = rep + "/individuals.csv";
        if (!fs::exists(path)) throw std::runtime_error("missing " + path);
        CsvTable t = parse_csv(read_file(path));
        std::size_t c_fit = t.column("fitness_after");
        std::size_t c_bricks = t.column("bricks");
        std::size_t c_limbs = t.column("rel_limbs");
        std::size_t c_size = t.column("size");
        std::size_t c_sym = t.column("symmetry");
        for (std::size_t row = 0; row < t.rows.size(); ++row) {
            double fit = t.number(row, c_fit);
            bricks_limbs.add(t.number(row, c_bricks) / 9.0, t.number(row, c_limbs), fit);
            size_symmetry.add(t.number(row, c_size) / 10.0, t.number(row, c_sym), fit);
        }
    }
    write_file(analysis + "/landscape_bricks_rel_limbs.csv",
               bricks_limbs.csv("bricks/9", "rel_limbs"));
    write_file(analysis + "/landscape_size_symmetry.csv",
               size_symmetry.csv("size/10", "symmetry"));

    // Trajectory density over the best robots' sampled positions.
    std::vector<std::pair<double, double>> points;
    for (const std::string& rep : reps)
        for (int td : {0, 120, 240}) {
            std::string path = rep + "/trajectory_td" + std::to_string(td) + ".csv";
            if (!fs::exists(path)) throw std::runtime_error("missing " + path);
            CsvTable t = parse_csv(read_file(path));
            std::size_t cx = t.column("x");
            std::size_t cy = t.column("y");
            for (std::size_t row = 0; row < t.rows.size(); ++row)
                points.push_back({t.number(row, cx), t.number(row, cy)});
        }
    double extent = 0.1;
    for (auto [x, y] : points) extent = std::max({extent, std::fabs(x), std::fabs(y)});
    std::vector<long long> density(static_cast<std::size_t>(bins) * bins, 0);
    for (auto [x, y] : points) {
        auto bin = [&](double v) {
            int b = static_cast<int>(std::floor((v + extent) / (2.0 * extent) * bins));
            return static_cast<std::size_t>(std::clamp(b, 0, bins - 1));
        };
        density[bin(y) * static_cast<std::size_t>(bins) + bin(x)] += 1;
    }
    std::string dens_out = "# schema=trajectory-density-v1\n# extent=" +
                           format_double(extent) + "\nx_bin,y_bin,x_center,y_center,count\n";
    double w = 2.0 * extent / bins;
    for (int yb = 0; yb < bins; ++yb)
        for (int xb = 0; xb < bins; ++xb) {
            dens_out += std::to_string(xb) + ',' + std::to_string(yb) + ',' +
                        format_double(-extent + (xb + 0.5) * w) + ',' +
                        format_double(-extent + (yb + 0.5) * w) + ',' +
                        std::to_string(density[static_cast<std::size_t>(yb) * bins + xb]) +
                        '\n';
        }
    write_file(analysis + "/trajectory_density.csv", dens_out);
}

}  // namespace evoro
