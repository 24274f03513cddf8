#include "evoro/learner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "evoro/cpg.hpp"
#include "evoro/util.hpp"

namespace evoro {

void LearnerParams::validate() const {
    if (population < 4)
        throw std::invalid_argument("learner population must be at least 4");
    if (scale <= 0.0) throw std::invalid_argument("scale factor must be positive");
    if (crossover_p < 0.0 || crossover_p > 1.0)
        throw std::invalid_argument("crossover probability must be in [0,1]");
    if (neighbors < 1) throw std::invalid_argument("neighbor count must be at least 1");
    if (iterations < 1) throw std::invalid_argument("iteration count must be at least 1");
    if (init_sigma < 0.0) throw std::invalid_argument("init noise must be non-negative");
}

std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>
revde_triplet(const std::vector<double>& xi, const std::vector<double>& xj,
              const std::vector<double>& xk, double scale) {
    if (xi.size() != xj.size() || xj.size() != xk.size())
        throw std::invalid_argument("triplet vectors differ in length");
    std::size_t n = xi.size();
    std::vector<double> y1(n), y2(n), y3(n);
    for (std::size_t d = 0; d < n; ++d) {
        y1[d] = xi[d] + scale * (xj[d] - xk[d]);
        y2[d] = xj[d] + scale * (xk[d] - y1[d]);
        y3[d] = xk[d] + scale * (y1[d] - y2[d]);
    }
    return {y1, y2, y3};
}

std::vector<double> uniform_crossover(const std::vector<double>& donor,
                                      const std::vector<double>& base, double p,
                                      Rng& rng) {
    if (donor.size() != base.size())
        throw std::invalid_argument("crossover vectors differ in length");
    std::vector<double> out(donor.size());
    for (std::size_t d = 0; d < donor.size(); ++d)
        out[d] = clamp_unit(rng.bernoulli(p) ? donor[d] : base[d]);
    return out;
}

double knn_predict(const Archive& archive, const std::vector<double>& candidate,
                   int k) {
    if (archive.empty()) throw std::invalid_argument("archive is empty");
    if (k < 1) throw std::invalid_argument("neighbor count must be at least 1");

    // Squared distances order identically to Euclidean ones; stable sort
    // keeps the earlier archive entry on ties.
    std::vector<std::pair<double, std::size_t>> by_dist;
    by_dist.reserve(archive.size());
    for (std::size_t i = 0; i < archive.size(); ++i) {
        const std::vector<double>& w = archive[i].weights;
        if (w.size() != candidate.size())
            throw std::invalid_argument("archive entry dimension mismatch");
        double d2 = 0.0;
        for (std::size_t d = 0; d < w.size(); ++d) {
            double diff = w[d] - candidate[d];
            d2 += diff * diff;
        }
        by_dist.push_back({d2, i});
    }
    std::stable_sort(by_dist.begin(), by_dist.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), by_dist.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += archive[by_dist[i].second].fitness;
    return sum / static_cast<double>(take);
}

namespace {

// Three indices, distinct within the triplet, uniform over [0, n).
std::array<std::size_t, 3> distinct_triplet(std::size_t n, Rng& rng) {
    std::array<std::size_t, 3> t{};
    t[0] = rng.uniform_int(n);
    do { t[1] = rng.uniform_int(n); } while (t[1] == t[0]);
    do { t[2] = rng.uniform_int(n); } while (t[2] == t[0] || t[2] == t[1]);
    return t;
}

}  // namespace

LearnResult learn(const Morphology& m, const std::vector<double>& inherited,
                  const LearnerParams& params, const Evaluator& evaluate, Rng& rng) {
    params.validate();

    LearnResult res;
    if (cpg_topology(m).weight_count() == 0) {
        res.best_weights = inherited;
        return res;  // nothing to learn without joints
    }
    if (inherited.size() != cpg_topology(m).weight_count())
        throw std::invalid_argument("inherited weights do not fit this body");

    const std::size_t x_pop = static_cast<std::size_t>(params.population);

    // Initial population: the inherited brain itself plus Gaussian mutants.
    std::vector<std::vector<double>> pop;
    std::vector<double> pop_fitness;
    pop.push_back(inherited);
    for (std::size_t i = 1; i < x_pop; ++i) {
        std::vector<double> w = inherited;
        for (double& v : w) v = clamp_unit(v + rng.normal(0.0, params.init_sigma));
        pop.push_back(std::move(w));
    }
    for (const std::vector<double>& w : pop) {
        double f = evaluate(w);
        res.archive.push_back({w, f});
        pop_fitness.push_back(f);
        res.evals_used += 1;
    }

    double best_so_far = res.archive[0].fitness;
    for (const ArchiveEntry& e : res.archive) best_so_far = std::max(best_so_far, e.fitness);
    res.trace.push_back({0, best_so_far, 0.0});

    for (int it = 1; it <= params.iterations; ++it) {
        // 3X candidates from X sampled triplets, each candidate crossed with
        // the triplet member it came from.
        std::vector<std::vector<double>> candidates;
        candidates.reserve(3 * x_pop);
        for (std::size_t t = 0; t < x_pop; ++t) {
            auto [i, j, k] = distinct_triplet(pop.size(), rng);
            auto [y1, y2, y3] = revde_triplet(pop[i], pop[j], pop[k], params.scale);
            candidates.push_back(uniform_crossover(y1, pop[i], params.crossover_p, rng));
            candidates.push_back(uniform_crossover(y2, pop[j], params.crossover_p, rng));
            candidates.push_back(uniform_crossover(y3, pop[k], params.crossover_p, rng));
        }

        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(candidates.size());
        for (std::size_t c = 0; c < candidates.size(); ++c)
            ranked.push_back({knn_predict(res.archive, candidates[c], params.neighbors), c});
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });

        // Real evaluations only for the X the surrogate ranks best.
        double abs_err_sum = 0.0;
        std::vector<std::size_t> fresh;  // archive indices of this iteration
        for (std::size_t c = 0; c < x_pop; ++c) {
            const std::vector<double>& w = candidates[ranked[c].second];
            double f = evaluate(w);
            abs_err_sum += std::fabs(ranked[c].first - f);
            fresh.push_back(res.archive.size());
            res.archive.push_back({w, f});
            res.evals_used += 1;
            best_so_far = std::max(best_so_far, f);
        }

        // Elitist survivor rule on real fitness over old and new together;
        // stable sort keeps the earlier vector on ties.
        std::vector<std::pair<double, std::size_t>> pool;  // fitness, pool slot
        std::vector<std::vector<double>> pool_w;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            pool.push_back({pop_fitness[i], pool.size()});
            pool_w.push_back(pop[i]);
        }
        for (std::size_t idx : fresh) {
            pool.push_back({res.archive[idx].fitness, pool.size()});
            pool_w.push_back(res.archive[idx].weights);
        }
        std::stable_sort(pool.begin(), pool.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        pop.clear();
        pop_fitness.clear();
        for (std::size_t i = 0; i < x_pop; ++i) {
            pop.push_back(pool_w[pool[i].second]);
            pop_fitness.push_back(pool[i].first);
        }

        res.trace.push_back({it, best_so_far, abs_err_sum / static_cast<double>(x_pop)});
    }

    // Best archived entry wins; earlier insertion wins ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.archive.size(); ++i)
        if (res.archive[i].fitness > res.archive[best].fitness) best = i;
    res.best_index = static_cast<int>(best);
    res.best_weights = res.archive[best].weights;
    res.best_fitness = res.archive[best].fitness;
    res.delta = res.best_fitness - res.archive[0].fitness;
    return res;
}

std::string learn_trace_csv(const std::vector<LearnTracePoint>& trace) {
    std::string out = "# schema=learn-trace-v1\niteration,best_real,pred_error\n";
    for (const LearnTracePoint& p : trace) {
        out += std::to_string(p.iteration);
        out += ',';
        out += format_double(p.best_real);
        out += ',';
        out += format_double(p.pred_error);
        out += '\n';
    }
    return out;
}

}  // namespace evoro
