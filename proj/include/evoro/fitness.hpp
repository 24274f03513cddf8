#pragma once

#include "evoro/simulation.hpp"
#include "evoro/util.hpp"

namespace evoro {

inline constexpr double kDeviationPenalty = 0.01;   // weight on lateral deviation
inline constexpr double kPathEpsilon = 1e-10;       // guards the path-length division
inline constexpr double kMinProgress = 0.1;         // meters toward the target, else 0

struct FitnessComponents {
    double gamma = 0.0;        // start-to-end distance
    double theta = 0.0;        // deviation angle in [0, pi]
    double alpha = 0.0;        // lateral deviation, gamma * sin(theta)
    double beta = 0.0;         // signed progress toward the target, gamma * cos(theta)
    double path_length = 0.0;
};

// Smallest angle between the travel direction and the target direction,
// both taken in [0, 2pi); result in [0, pi].
double deviation_angle(double delta, double target_dir);

FitnessComponents fitness_components(const Trajectory& tr, double target_dir);

// Score before the minimum-progress rule:
//   (|beta| / (path_length + eps)) * (beta / (theta + 1) - penalty * alpha)
double fitness_raw(const FitnessComponents& c);

// fitness_raw, clamped to 0 when progress beta falls under kMinProgress.
double fitness(const FitnessComponents& c);

// Three fixed target directions, evenly spread: 0, 120, 240 degrees.
inline constexpr double kTargetDirections[3] = {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0};

// Mean over the three per-direction scores.
double aggregate_fitness(double f1, double f2, double f3);

}  // namespace evoro
