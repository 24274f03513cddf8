#pragma once

#include <utility>
#include <vector>

#include "json.hpp"

#include "evoro/morphology.hpp"

namespace evoro {

enum class Side { Left, Right, Center };

std::string side_name(Side s);

struct Joint {
    int id = 0;  // dense index; also this joint's slot in the weight vector
    GridPos pos{0, 0, 0};
    Side side = Side::Center;
};

// Coupled oscillators, one per active hinge. Each joint i carries a state
// pair (x_i, y_i) driven by
//   dx_i = w_i * y_i + sum over neighbors j of w(j->i) * x_j
//   dy_i = -w_i * x_i
// Storage is one scalar per joint (w_i) and one per coupled pair (i<j)
// holding w(i->j); the reverse direction is its negation, which keeps both
// reconstructed weight matrices skew-symmetric.
struct CpgNetwork {
    std::vector<Joint> joints;
    std::vector<std::pair<int, int>> pairs;  // coupled (i, j) with i < j, sorted
    std::vector<double> intra;               // w_i per joint, in [-1, 1]
    std::vector<double> coupling;            // w(i->j) per pairs entry, in [-1, 1]
    std::vector<double> x, y;                // oscillator states

    // Per-joint list of (neighbor index, signed weight), derived from
    // coupling; rebuilt by build_cpg and set_weights.
    std::vector<std::vector<std::pair<int, double>>> neighbors;

    std::size_t joint_count() const { return joints.size(); }
    std::size_t weight_count() const { return intra.size() + coupling.size(); }

    void reset_states();  // every x_i = y_i = sqrt(2)/2
    void rebuild_adjacency();

    // Flat weight vector: all w_i in joint order, then all w(i->j) in pair
    // order. This is the learner's search space.
    std::vector<double> weights() const;
    void set_weights(const std::vector<double>& w);  // clamps to [-1, 1]
};

// Flat weights plus a human-readable ordering descriptor, so a saved brain
// states which slot is which.
nlohmann::json brain_weights_to_json(const CpgNetwork& net,
                                     const std::vector<double>& weights);
std::vector<double> brain_weights_from_json(const nlohmann::json& j);

// One oscillator per hinge, joints at Manhattan distance <= 2 coupled, all
// weights zero. The weight slots define the canonical flat-vector layout.
CpgNetwork cpg_topology(const Morphology& m);

// Topology plus weights from the brain genome: w_i queries it with joint i's
// grid coordinates twice; w(i->j) with the lower-index joint's coordinates
// first. Outputs clamped to [-1, 1].
CpgNetwork build_cpg(const Morphology& m, const CppnGenome& brain);

// One RK4 step of size dt over all oscillator states.
void step_cpg(CpgNetwork& net, double dt);

// Joint output in (-1, 1): 2 / (1 + e^(-2x)) - 1.
double output_signal(double x);

// Attenuation magnitude ((pi - |theta|) / pi)^n for deviation angle theta.
double steering_gain(double theta, int n = 7);

// Slows the side the target is on, like the inner track of a turning tank:
// left joints when the target is to the left (theta < 0), right joints when
// it is to the right (theta >= 0). Center joints pass through.
double apply_steering(double out, double theta, Side side);

}  // namespace evoro
