#include <cmath>

#include "doctest.h"

#include "evoro/fitness.hpp"
#include "evoro/rng.hpp"

using namespace evoro;

namespace {

Trajectory end_at(double ex, double ey, double path) {
    Trajectory tr;
    tr.samples = {{0.0, 0.0, 0.0, 0.0}, {50.0, ex, ey, 0.0}};
    tr.path_length = path;
    tr.final_direction = wrap_2pi(std::atan2(ey, ex));
    return tr;
}

}  // namespace

TEST_CASE("deviation angle takes the short way around the circle") {
    CHECK(deviation_angle(1.2, 1.2) == 0.0);
    CHECK(deviation_angle(deg_to_rad(350.0), 0.0) ==
          doctest::Approx(deg_to_rad(10.0)).epsilon(1e-12));
    CHECK(deviation_angle(0.0, deg_to_rad(350.0)) ==
          doctest::Approx(deg_to_rad(10.0)).epsilon(1e-12));
    CHECK(deviation_angle(1.0 + kPi, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(deviation_angle(deg_to_rad(90.0), deg_to_rad(330.0)) ==
          doctest::Approx(deg_to_rad(120.0)).epsilon(1e-12));
}

TEST_CASE("components decompose the end point against the target bearing") {
    FitnessComponents ahead = fitness_components(end_at(10.0, 0.0, 12.0), 0.0);
    CHECK(ahead.gamma == 10.0);
    CHECK(ahead.theta == 0.0);
    CHECK(ahead.alpha == 0.0);
    CHECK(ahead.beta == 10.0);
    CHECK(ahead.path_length == 12.0);

    FitnessComponents behind = fitness_components(end_at(-5.0, 0.0, 5.0), 0.0);
    CHECK(behind.gamma == 5.0);
    CHECK(behind.theta == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(behind.alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(behind.beta == doctest::Approx(-5.0).epsilon(1e-9));

    FitnessComponents sideways = fitness_components(end_at(0.0, 7.0, 9.0), 0.0);
    CHECK(sideways.gamma == 7.0);
    CHECK(sideways.theta == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(sideways.alpha == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(sideways.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(std::fabs(sideways.beta) <= sideways.gamma);
}

TEST_CASE("score substitution table") {
    FitnessComponents straight;
    straight.gamma = 10.0;
    straight.beta = 10.0;
    straight.path_length = 10.0;
    CHECK(fitness(straight) == doctest::Approx(10.0).epsilon(1e-9));

    FitnessComponents crawl = straight;
    crawl.beta = 0.05;
    CHECK(fitness(crawl) == 0.0);

    FitnessComponents backwards = fitness_components(end_at(-5.0, 0.0, 5.0), 0.0);
    CHECK(fitness_raw(backwards) == doctest::Approx(-5.0 / (kPi + 1.0)).epsilon(1e-6));
    CHECK(fitness(backwards) == 0.0);
}

TEST_CASE("the minimum-progress rule cuts strictly below a tenth of a meter") {
    FitnessComponents c;
    c.gamma = 1.0;
    c.path_length = 1.0;
    c.beta = 0.1;
    CHECK(fitness(c) == fitness_raw(c));
    c.beta = std::nextafter(0.1, 0.0);
    CHECK(fitness(c) == 0.0);
}

TEST_CASE("straight paths reduce the score to progress squared over path") {
    Rng rng(23, Stream::Test);
    for (int i = 0; i < 100; ++i) {
        FitnessComponents c;
        c.beta = rng.uniform(0.2, 3.0);
        c.gamma = c.beta;
        c.path_length = c.beta * rng.uniform(1.0, 3.0);
        CHECK(fitness(c) ==
              doctest::Approx(c.beta * c.beta / c.path_length).epsilon(1e-9));
        c.path_length = c.beta;
        CHECK(fitness(c) == doctest::Approx(c.beta).epsilon(1e-9));
    }
}

TEST_CASE("score rises with progress and falls with path, deviation and drift") {
    Rng rng(42, Stream::Test);
    const double h = 1e-3;
    for (int i = 0; i < 10000; ++i) {
        FitnessComponents c;
        c.gamma = rng.uniform(0.15, 2.5);
        double theta_max = std::acos(0.13 / c.gamma);
        c.theta = rng.uniform(0.0, theta_max);
        c.alpha = c.gamma * std::sin(c.theta);
        c.beta = c.gamma * std::cos(c.theta);  // at least 0.13, rule never fires
        c.path_length = c.gamma * rng.uniform(1.0, 3.0);
        double base = fitness(c);
        REQUIRE(base == fitness_raw(c));

        FitnessComponents probe = c;
        probe.beta += h;
        REQUIRE(fitness(probe) > base);
        probe = c;
        probe.path_length += h;
        REQUIRE(fitness(probe) < base);
        probe = c;
        probe.theta += h;
        REQUIRE(fitness(probe) < base);
        probe = c;
        probe.alpha += h;
        REQUIRE(fitness(probe) < base);
    }
}

TEST_CASE("aggregation is the plain mean of the three directions") {
    CHECK(aggregate_fitness(10.0, 10.0, 10.0) == 10.0);
    CHECK(aggregate_fitness(0.0, 0.0, 0.0) == 0.0);
    CHECK(aggregate_fitness(3.0, 0.0, 6.0) == 3.0);
    CHECK(kTargetDirections[0] == 0.0);
    CHECK(kTargetDirections[1] == doctest::Approx(deg_to_rad(120.0)).epsilon(1e-15));
    CHECK(kTargetDirections[2] == doctest::Approx(deg_to_rad(240.0)).epsilon(1e-15));
}
