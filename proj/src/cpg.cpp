#include "evoro/cpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evoro/util.hpp"

namespace evoro {

std::string side_name(Side s) {
    switch (s) {
        case Side::Left:   return "left";
        case Side::Right:  return "right";
        case Side::Center: return "center";
    }
    throw std::logic_error("unknown side");
}

void CpgNetwork::reset_states() {
    const double init = std::sqrt(2.0) / 2.0;
    x.assign(joints.size(), init);
    y.assign(joints.size(), init);
}

void CpgNetwork::rebuild_adjacency() {
    neighbors.assign(joints.size(), {});
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [i, j] = pairs[p];
        double w = coupling[p];  // w(i->j); the reverse direction flips sign
        neighbors[static_cast<std::size_t>(j)].push_back({i, w});
        neighbors[static_cast<std::size_t>(i)].push_back({j, -w});
    }
}

std::vector<double> CpgNetwork::weights() const {
    std::vector<double> w = intra;
    w.insert(w.end(), coupling.begin(), coupling.end());
    return w;
}

void CpgNetwork::set_weights(const std::vector<double>& w) {
    if (w.size() != weight_count())
        throw std::invalid_argument("weight vector length " + std::to_string(w.size()) +
                                    " does not match network size " +
                                    std::to_string(weight_count()));
    for (std::size_t i = 0; i < intra.size(); ++i) intra[i] = clamp_unit(w[i]);
    for (std::size_t p = 0; p < coupling.size(); ++p)
        coupling[p] = clamp_unit(w[intra.size() + p]);
    rebuild_adjacency();
}

CpgNetwork cpg_topology(const Morphology& m) {
    CpgNetwork net;
    for (const Module& mod : m.modules) {
        if (mod.type != ModuleType::ActiveHinge) continue;
        Joint j;
        j.id = static_cast<int>(net.joints.size());
        j.pos = mod.pos;
        j.side = (mod.pos[0] < 0) ? Side::Left
                                  : (mod.pos[0] > 0 ? Side::Right : Side::Center);
        net.joints.push_back(j);
    }
    for (std::size_t a = 0; a < net.joints.size(); ++a)
        for (std::size_t b = a + 1; b < net.joints.size(); ++b) {
            const GridPos& pa = net.joints[a].pos;
            const GridPos& pb = net.joints[b].pos;
            int dist = std::abs(pa[0] - pb[0]) + std::abs(pa[1] - pb[1]) +
                       std::abs(pa[2] - pb[2]);
            if (dist <= 2) net.pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
        }
    net.intra.assign(net.joints.size(), 0.0);
    net.coupling.assign(net.pairs.size(), 0.0);
    net.reset_states();
    net.rebuild_adjacency();
    return net;
}

CpgNetwork build_cpg(const Morphology& m, const CppnGenome& brain) {
    if (brain.input_count != 6 || brain.output_count != 1)
        throw std::invalid_argument("brain genome must have 6 inputs and 1 output");

    CpgNetwork net = cpg_topology(m);
    for (const Joint& j : net.joints) {
        double xi = static_cast<double>(j.pos[0]);
        double yi = static_cast<double>(j.pos[1]);
        double zi = static_cast<double>(j.pos[2]);
        double w = cppn_eval(brain, {xi, yi, zi, xi, yi, zi})[0];
        net.intra[static_cast<std::size_t>(j.id)] = clamp_unit(w);
    }
    for (std::size_t p = 0; p < net.pairs.size(); ++p) {
        const GridPos& pa = net.joints[static_cast<std::size_t>(net.pairs[p].first)].pos;
        const GridPos& pb = net.joints[static_cast<std::size_t>(net.pairs[p].second)].pos;
        double w = cppn_eval(brain, {static_cast<double>(pa[0]),
                                     static_cast<double>(pa[1]),
                                     static_cast<double>(pa[2]),
                                     static_cast<double>(pb[0]),
                                     static_cast<double>(pb[1]),
                                     static_cast<double>(pb[2])})[0];
        net.coupling[p] = clamp_unit(w);
    }
    net.rebuild_adjacency();
    return net;
}

namespace {

// Oscillator derivatives into (dx, dy). Kept free of allocation: step_cpg
// runs tens of thousands of times per simulated robot.
void derivatives(const CpgNetwork& net, const double* x, const double* y,
                 double* dx, double* dy) {
    std::size_t n = net.joints.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = net.intra[i] * y[i];
        for (const auto& [j, w] : net.neighbors[i]) acc += w * x[static_cast<std::size_t>(j)];
        dx[i] = acc;
        dy[i] = -net.intra[i] * x[i];
    }
}

}  // namespace

void step_cpg(CpgNetwork& net, double dt) {
    std::size_t n = net.joints.size();
    if (n == 0) return;
    if (n > kMaxModules) throw std::logic_error("joint count exceeds module cap");

    double k1x[kMaxModules], k1y[kMaxModules], k2x[kMaxModules], k2y[kMaxModules];
    double k3x[kMaxModules], k3y[kMaxModules], k4x[kMaxModules], k4y[kMaxModules];
    double tx[kMaxModules], ty[kMaxModules];

    const double* x0 = net.x.data();
    const double* y0 = net.y.data();

    derivatives(net, x0, y0, k1x, k1y);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = x0[i] + 0.5 * dt * k1x[i];
        ty[i] = y0[i] + 0.5 * dt * k1y[i];
    }
    derivatives(net, tx, ty, k2x, k2y);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = x0[i] + 0.5 * dt * k2x[i];
        ty[i] = y0[i] + 0.5 * dt * k2y[i];
    }
    derivatives(net, tx, ty, k3x, k3y);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = x0[i] + dt * k3x[i];
        ty[i] = y0[i] + dt * k3y[i];
    }
    derivatives(net, tx, ty, k4x, k4y);
    for (std::size_t i = 0; i < n; ++i) {
        net.x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        net.y[i] += dt / 6.0 * (k1y[i] + 2.0 * k2y[i] + 2.0 * k3y[i] + k4y[i]);
    }
}

double output_signal(double x) { return 2.0 / (1.0 + std::exp(-2.0 * x)) - 1.0; }

double steering_gain(double theta, int n) {
    return ipow((kPi - std::fabs(theta)) / kPi, n);
}

double apply_steering(double out, double theta, Side side) {
    if (side == Side::Left && theta < 0.0) return steering_gain(theta) * out;
    if (side == Side::Right && theta >= 0.0) return steering_gain(theta) * out;
    return out;
}

nlohmann::json brain_weights_to_json(const CpgNetwork& net,
                                     const std::vector<double>& weights) {
    if (weights.size() != net.weight_count())
        throw std::invalid_argument("weight vector does not match network");
    nlohmann::json order = nlohmann::json::array();
    for (const Joint& j : net.joints)
        order.push_back("intra:" + std::to_string(j.id));
    for (const auto& [i, j] : net.pairs)
        order.push_back("pair:" + std::to_string(i) + ":" + std::to_string(j));
    return {{"order", order}, {"values", weights}};
}

std::vector<double> brain_weights_from_json(const nlohmann::json& j) {
    std::vector<double> w = j.at("values").get<std::vector<double>>();
    if (j.contains("order") && j.at("order").size() != w.size())
        throw std::invalid_argument("weight values do not match their ordering descriptor");
    return w;
}

}  // namespace evoro
