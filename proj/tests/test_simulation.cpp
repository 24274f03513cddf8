#include <cmath>

#include "doctest.h"

#include "evoro/simulation.hpp"
#include "evoro/util.hpp"

using namespace evoro;

namespace {

Morphology center_chain(int hinges) {
    Morphology m;
    m.modules.push_back({{0, 0, 0}, ModuleType::Core, 0, -1, Face::Front});
    for (int i = 1; i <= hinges; ++i)
        m.modules.push_back(
            {{0, i, 0}, ModuleType::ActiveHinge, 0, i - 1, Face::Front});
    m.validate();
    return m;
}

// One hinge on each side of the core plus one in front.
Morphology two_sided() {
    Morphology m;
    m.modules.push_back({{0, 0, 0}, ModuleType::Core, 0, -1, Face::Front});
    m.modules.push_back({{-1, 0, 0}, ModuleType::ActiveHinge, 0, 0, Face::Left});
    m.modules.push_back({{1, 0, 0}, ModuleType::ActiveHinge, 0, 0, Face::Right});
    m.modules.push_back({{0, 1, 0}, ModuleType::ActiveHinge, 0, 0, Face::Front});
    m.validate();
    return m;
}

SimConfig short_sim() {
    SimConfig cfg;
    cfg.duration = 10.0;
    return cfg;
}

std::vector<double> ramp_weights(const Morphology& m) {
    CpgNetwork net = cpg_topology(m);
    std::vector<double> w(net.weight_count());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = 0.3 + 0.1 * static_cast<double>(i % 7);
    return w;
}

}  // namespace

TEST_CASE("simulation starts at the origin facing the target") {
    Morphology m = center_chain(2);
    Trajectory tr = simulate(m, ramp_weights(m), 1.25, short_sim());
    REQUIRE(!tr.samples.empty());
    CHECK(tr.samples[0].t == 0.0);
    CHECK(tr.samples[0].x == 0.0);
    CHECK(tr.samples[0].y == 0.0);
    CHECK(tr.samples[0].heading == 1.25);
    CHECK(tr.samples.size() == 51);  // 10 s at one sample per 0.2 s, plus the start
    CHECK(tr.samples[1].t == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("identical inputs give byte-identical trajectories") {
    Morphology m = two_sided();
    std::vector<double> w = ramp_weights(m);
    Trajectory a = simulate(m, w, 0.7, short_sim());
    Trajectory b = simulate(m, w, 0.7, short_sim());
    CHECK(trajectory_csv(a) == trajectory_csv(b));
}

TEST_CASE("a silent brain goes nowhere") {
    Morphology m = two_sided();
    std::vector<double> w(cpg_topology(m).weight_count(), 0.0);
    Trajectory tr = simulate(m, w, 0.0, short_sim());
    CHECK(tr.path_length == 0.0);
    CHECK(tr.samples.back().x == 0.0);
    CHECK(tr.samples.back().y == 0.0);
}

TEST_CASE("center-only bodies drive straight at the target bearing") {
    Morphology m = center_chain(3);
    const double dir = 0.9;
    Trajectory tr = simulate(m, ramp_weights(m), dir, short_sim());
    const TrajectorySample& end = tr.samples.back();
    double gamma = std::hypot(end.x, end.y);
    CHECK(gamma > 0.05);
    CHECK(end.heading == dir);  // no left/right asymmetry, heading never changes
    CHECK(std::fabs(gamma - tr.path_length) < 1e-6);
    CHECK(tr.final_direction == doctest::Approx(wrap_2pi(dir)).epsilon(1e-9));
}

TEST_CASE("displacement cannot exceed path length or top speed") {
    Morphology m = two_sided();
    SimConfig cfg = short_sim();
    Trajectory tr = simulate(m, ramp_weights(m), 0.3, cfg);
    const TrajectorySample& end = tr.samples.back();
    double gamma = std::hypot(end.x, end.y);
    CHECK(gamma <= tr.path_length + 1e-12);
    CHECK(tr.path_length <= cfg.thrust_coeff * cfg.duration + 1e-12);
}

TEST_CASE("attenuating the right side turns the robot rightward") {
    Morphology m = two_sided();
    std::vector<double> w = ramp_weights(m);
    SimConfig baseline = short_sim();
    baseline.fixed_theta = 0.0;  // gain 1 everywhere: steering disabled
    SimConfig attenuated = short_sim();
    attenuated.fixed_theta = kPi / 2.0;  // deviation pinned to the right

    double end_base = simulate(m, w, 0.0, baseline).samples.back().heading;
    double end_att = simulate(m, w, 0.0, attenuated).samples.back().heading;
    CHECK(end_att < end_base);
}

TEST_CASE("rotating the target rotates the whole trajectory") {
    Morphology m = two_sided();
    std::vector<double> w = ramp_weights(m);
    const double phi = 2.0 * kPi / 3.0;
    Trajectory base = simulate(m, w, 0.0, short_sim());
    Trajectory rot = simulate(m, w, phi, short_sim());
    REQUIRE(base.samples.size() == rot.samples.size());
    double c = std::cos(phi), s = std::sin(phi);
    for (std::size_t i = 0; i < base.samples.size(); ++i) {
        CHECK(std::fabs(rot.samples[i].x - (c * base.samples[i].x - s * base.samples[i].y)) < 1e-9);
        CHECK(std::fabs(rot.samples[i].y - (s * base.samples[i].x + c * base.samples[i].y)) < 1e-9);
        CHECK(std::fabs(rot.samples[i].heading - (base.samples[i].heading + phi)) < 1e-9);
    }
    CHECK(std::fabs(rot.path_length - base.path_length) < 1e-12);
}

TEST_CASE("config validation rejects non-nesting intervals") {
    SimConfig cfg;
    cfg.dt = 0.003;  // control step 0.2 is not a multiple
    CHECK_THROWS(cfg.validate());
    cfg = SimConfig{};
    cfg.duration = 10.1;  // not a multiple of the 0.2 s sample interval
    CHECK_THROWS(cfg.validate());
    cfg = SimConfig{};
    cfg.sample_interval = 0.3;  // not a multiple of the control step
    CHECK_THROWS(cfg.validate());
    cfg = SimConfig{};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("displacement velocity is crow-flight distance over elapsed time") {
    Trajectory tr;
    tr.samples = {{0.0, 0.0, 0.0, 0.0}, {2.0, 3.0, 4.0, 0.0}};
    CHECK(displacement_velocity(tr) == doctest::Approx(2.5).epsilon(1e-12));
    Trajectory tiny;
    tiny.samples = {{0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS(displacement_velocity(tiny));
}

TEST_CASE("trajectory CSV carries its schema and one row per sample") {
    Morphology m = center_chain(1);
    Trajectory tr = simulate(m, ramp_weights(m), 0.0, short_sim());
    std::string csv = trajectory_csv(tr);
    CHECK(csv.rfind("# schema=trajectory-v1\nt,x,y,heading\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == tr.samples.size() + 2);
}
