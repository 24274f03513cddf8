#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace evoro {

// Stream tags so every consumer of randomness hangs off the root seed
// through a named, collision-free derivation.
enum class Stream : std::uint64_t {
    Init = 1,
    Variation = 2,
    Learner = 3,
    Evaluation = 4,
    Test = 99,
};

std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic random source. All samplers are implemented on top of the
// raw 64-bit output so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t root_seed, Stream stream, std::uint64_t key = 0);

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double uniform();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in [0, n-1]; n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);
    bool bernoulli(double p);
    // Box-Muller; no spare caching so the state is the engine state alone.
    double normal(double mean, double stddev);

    std::string save_state() const;
    void load_state(const std::string& s);

private:
    std::mt19937_64 engine_;
};

}  // namespace evoro
