#include "evoro/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "evoro/util.hpp"

namespace evoro {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t root_seed, Stream stream, std::uint64_t key) {
    // Mix root, stream tag and key through splitmix so nearby seeds and
    // nearby keys give unrelated engine states.
    std::uint64_t s = root_seed;
    std::uint64_t a = splitmix64(s);
    s ^= static_cast<std::uint64_t>(stream) * 0xd6e8feb86659fd93ULL;
    std::uint64_t b = splitmix64(s);
    s ^= key * 0xa3b195354a39b70dULL;
    std::uint64_t c = splitmix64(s);
    engine_.seed(a ^ (b << 1) ^ (c << 2));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
    // Rejection sampling on the top bits; unbiased and portable.
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal(double mean, double stddev) {
    // Box-Muller, first variate only.
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(kTwoPi * u2);
}

std::string Rng::save_state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Rng::load_state(const std::string& s) {
    std::istringstream is(s);
    is >> engine_;
    if (!is) throw std::runtime_error("Rng::load_state: malformed state string");
}

}  // namespace evoro
