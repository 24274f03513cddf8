#include "evoro/fitness.hpp"

#include <cmath>

namespace evoro {

double deviation_angle(double delta, double target_dir) {
    double d = std::fabs(wrap_2pi(delta) - wrap_2pi(target_dir));
    return d > kPi ? kTwoPi - d : d;
}

FitnessComponents fitness_components(const Trajectory& tr, double target_dir) {
    FitnessComponents c;
    const TrajectorySample& end = tr.samples.back();
    c.gamma = std::hypot(end.x, end.y);
    c.theta = deviation_angle(tr.final_direction, target_dir);
    c.alpha = c.gamma * std::sin(c.theta);
    // cos(theta) goes negative past a right angle, which is exactly the sign
    // the progress term needs; no separate sign factor required.
    c.beta = c.gamma * std::cos(c.theta);
    c.path_length = tr.path_length;
    return c;
}

double fitness_raw(const FitnessComponents& c) {
    return std::fabs(c.beta) / (c.path_length + kPathEpsilon) *
           (c.beta / (c.theta + 1.0) - kDeviationPenalty * c.alpha);
}

double fitness(const FitnessComponents& c) {
    if (c.beta < kMinProgress) return 0.0;
    return fitness_raw(c);
}

double aggregate_fitness(double f1, double f2, double f3) {
    return (f1 + f2 + f3) / 3.0;
}

}  // namespace evoro
