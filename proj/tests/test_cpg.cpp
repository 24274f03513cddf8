#include <cmath>

#include "doctest.h"

#include "evoro/cpg.hpp"
#include "evoro/util.hpp"

using namespace evoro;

namespace {

Morphology hinge_chain(int hinges) {
    Morphology m;
    m.modules.push_back({{0, 0, 0}, ModuleType::Core, 0, -1, Face::Front});
    for (int i = 1; i <= hinges; ++i)
        m.modules.push_back(
            {{0, i, 0}, ModuleType::ActiveHinge, 0, i - 1, Face::Front});
    m.validate();
    return m;
}

}  // namespace

TEST_CASE("a single oscillator with unit weight traces sin(t + pi/4)") {
    CpgNetwork net = cpg_topology(hinge_chain(1));
    REQUIRE(net.joint_count() == 1);
    REQUIRE(net.weight_count() == 1);
    net.set_weights({1.0});

    const double dt = 0.005;
    double t = 0.0;
    double worst = 0.0, worst_energy = 0.0;
    while (t < 50.0) {
        step_cpg(net, dt);
        t += dt;
        worst = std::max(worst, std::fabs(net.x[0] - std::sin(t + kPi / 4.0)));
        worst_energy =
            std::max(worst_energy, std::fabs(net.x[0] * net.x[0] + net.y[0] * net.y[0] - 1.0));
    }
    CHECK(worst < 1e-3);
    CHECK(worst_energy < 1e-6 * 50.0);
}

TEST_CASE("states start at sqrt(2)/2 and freeze when all weights are zero") {
    CpgNetwork net = cpg_topology(hinge_chain(3));
    const double half_sqrt2 = std::sqrt(2.0) / 2.0;
    for (std::size_t i = 0; i < net.joint_count(); ++i) {
        CHECK(net.x[i] == half_sqrt2);
        CHECK(net.y[i] == half_sqrt2);
    }
    for (double w : net.weights()) CHECK(w == 0.0);
    for (int s = 0; s < 1000; ++s) step_cpg(net, 0.005);
    for (std::size_t i = 0; i < net.joint_count(); ++i) {
        CHECK(net.x[i] == half_sqrt2);
        CHECK(net.y[i] == half_sqrt2);
    }
}

TEST_CASE("coupling joins joints up to Manhattan distance two") {
    CpgNetwork net = cpg_topology(hinge_chain(4));  // joints at y = 1,2,3,4
    REQUIRE(net.joint_count() == 4);
    std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    CHECK(net.pairs == expected);
    CHECK(net.weight_count() == 9);
}

TEST_CASE("a coupled pair rotates with conserved norm and skew-symmetric pull") {
    CpgNetwork net = cpg_topology(hinge_chain(2));
    REQUIRE(net.pairs.size() == 1);
    const double w = 0.8;
    net.set_weights({0.0, 0.0, w});  // intra silent, coupling only

    // dx0 = -w x1, dx1 = +w x0: z = x0 + i x1 spins at rate w from both
    // states at sqrt(2)/2, so x0(t) = cos(w t + pi/4).
    const double dt = 0.005;
    double t = 0.0;
    step_cpg(net, dt);
    t += dt;
    CHECK(net.x[1] > std::sqrt(2.0) / 2.0);  // x1 rises first, per the sign convention
    for (int s = 0; s < 4000; ++s) {
        step_cpg(net, dt);
        t += dt;
        double expect0 = std::cos(w * t + kPi / 4.0);
        double norm = net.x[0] * net.x[0] + net.x[1] * net.x[1];
        REQUIRE(std::fabs(net.x[0] - expect0) < 1e-3);
        REQUIRE(std::fabs(norm - 1.0) < 1e-6);
    }
}

TEST_CASE("joint sides follow the sign of the grid x coordinate") {
    Morphology m;
    m.modules.push_back({{0, 0, 0}, ModuleType::Core, 0, -1, Face::Front});
    m.modules.push_back({{-1, 0, 0}, ModuleType::ActiveHinge, 0, 0, Face::Left});
    m.modules.push_back({{1, 0, 0}, ModuleType::ActiveHinge, 0, 0, Face::Right});
    m.modules.push_back({{0, 1, 0}, ModuleType::ActiveHinge, 0, 0, Face::Front});
    m.validate();
    CpgNetwork net = cpg_topology(m);
    REQUIRE(net.joint_count() == 3);
    CHECK(net.joints[0].side == Side::Left);
    CHECK(net.joints[1].side == Side::Right);
    CHECK(net.joints[2].side == Side::Center);
}

TEST_CASE("set_weights clamps into [-1, 1] and round-trips through weights()") {
    CpgNetwork net = cpg_topology(hinge_chain(2));
    net.set_weights({2.0, -3.0, 0.25});
    CHECK(net.weights() == std::vector<double>{1.0, -1.0, 0.25});
    CHECK_THROWS(net.set_weights({1.0}));  // wrong length
}

TEST_CASE("genome-built weights are deterministic and bounded") {
    InnovationRegistry reg;
    Rng rng(3, Stream::Init);
    CppnGenome brain = random_genome(6, 1, reg, rng);
    Morphology m = hinge_chain(4);
    CpgNetwork a = build_cpg(m, brain);
    CpgNetwork b = build_cpg(m, brain);
    CHECK(a.weights() == b.weights());
    for (double w : a.weights()) {
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("saved brains round-trip through JSON") {
    InnovationRegistry reg;
    Rng rng(4, Stream::Init);
    CpgNetwork net = build_cpg(hinge_chain(3), random_genome(6, 1, reg, rng));
    nlohmann::json j = brain_weights_to_json(net, net.weights());
    CHECK(brain_weights_from_json(j) == net.weights());
}

TEST_CASE("joint output is the bipolar sigmoid") {
    CHECK(output_signal(0.0) == 0.0);
    for (double x : {-3.0, -0.7, 0.1, 2.5}) {
        CHECK(output_signal(x) == doctest::Approx(std::tanh(x)).epsilon(1e-12));
        CHECK(output_signal(x) > -1.0);
        CHECK(output_signal(x) < 1.0);
    }
}

TEST_CASE("steering gain hits its landmark values exactly") {
    CHECK(steering_gain(0.0) == 1.0);
    CHECK(steering_gain(kPi) == 0.0);
    CHECK(steering_gain(-kPi) == 0.0);
    CHECK(steering_gain(kPi / 2.0) == 0.0078125);
    CHECK(steering_gain(-kPi / 2.0) == 0.0078125);
}

TEST_CASE("steering slows exactly the side the target is on") {
    const double out = 0.8;
    CHECK(apply_steering(out, -kPi / 2.0, Side::Left) == 0.00625);
    CHECK(apply_steering(out, -kPi / 2.0, Side::Right) == out);
    CHECK(apply_steering(out, kPi / 2.0, Side::Right) == 0.00625);
    CHECK(apply_steering(out, kPi / 2.0, Side::Left) == out);
    CHECK(apply_steering(out, 0.0, Side::Right) == out);  // gain 1 at zero deviation
    CHECK(apply_steering(out, kPi / 2.0, Side::Center) == out);
    CHECK(apply_steering(out, -kPi / 2.0, Side::Center) == out);
}

TEST_CASE("attenuation never amplifies") {
    Rng rng(6, Stream::Test);
    for (int i = 0; i < 10000; ++i) {
        double out = rng.uniform(-1, 1);
        double theta = rng.uniform(-kPi, kPi);
        Side side = static_cast<Side>(rng.uniform_int(3));
        CHECK(std::fabs(apply_steering(out, theta, side)) <= std::fabs(out));
    }
}
