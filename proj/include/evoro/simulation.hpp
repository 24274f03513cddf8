#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evoro/cpg.hpp"
#include "evoro/morphology.hpp"

namespace evoro {

struct SimConfig {
    double duration = 50.0;         // seconds of simulated time
    double sample_interval = 0.2;   // trajectory sampling period
    double control_step = 0.2;      // steering/motion update period
    double dt = 0.005;              // CPG integration step
    double thrust_coeff = 0.05;     // m/s of forward speed per unit activity
    double turn_coeff = 2.0;        // rad/s of turning per unit asymmetry
    double target_distance = 10.0;  // target point distance from the origin

    // Hidden test seam: when set, the steering angle is pinned to this value
    // every control step instead of being derived from the pose.
    std::optional<double> fixed_theta;

    void validate() const;  // throws std::invalid_argument on a bad timing grid
};

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // first at t=0, position (0,0)
    double path_length = 0.0;               // sum of per-dt displacements
    double final_direction = 0.0;           // atan2 of the net displacement, [0, 2pi)
};

// Deterministic stand-in for a physics simulator, shaped like a differential
// drive: joint oscillation produces thrust, left/right activity asymmetry
// turns. The robot starts at the origin facing the target, which sits
// target_distance out along target_dir. Each control step recomputes the
// deviation angle theta, steers the joint signals, measures per-side
// activity as the mean absolute signal change across the step (center
// joints count half on each side), then advances the pose dt by dt at
//   speed   v    = thrust_coeff * min(1, (A_left + A_right) / 2)
//   turning rate = turn_coeff * (A_right - A_left)
// so that slowing one side turns the robot toward that side.
Trajectory simulate(const Morphology& m, const std::vector<double>& brain_weights,
                    double target_dir, const SimConfig& cfg);

// Straight-line start-to-end distance over elapsed time, path ignored.
// Throws std::invalid_argument on fewer than two samples.
double displacement_velocity(const Trajectory& tr);

// CSV block with a schema comment and header: t,x,y,heading.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace evoro
