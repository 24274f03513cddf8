#include "evoro/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "evoro/util.hpp"

namespace evoro {

namespace {

// Rounds a / b to the nearest integer and checks it divides cleanly.
int exact_multiple(double a, double b, const char* what) {
    int k = static_cast<int>(std::llround(a / b));
    if (k < 1 || std::fabs(k * b - a) > 1e-9)
        throw std::invalid_argument(std::string(what) + " must be a positive integer multiple");
    return k;
}

}  // namespace

void SimConfig::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    exact_multiple(control_step, dt, "control_step over dt");
    exact_multiple(sample_interval, control_step, "sample_interval over control_step");
    exact_multiple(duration, sample_interval, "duration over sample_interval");
    if (thrust_coeff < 0.0 || turn_coeff < 0.0)
        throw std::invalid_argument("motion coefficients must be non-negative");
    if (target_distance <= 0.0)
        throw std::invalid_argument("target_distance must be positive");
}

Trajectory simulate(const Morphology& m, const std::vector<double>& brain_weights,
                    double target_dir, const SimConfig& cfg) {
    cfg.validate();
    CpgNetwork net = cpg_topology(m);
    net.set_weights(brain_weights);
    net.reset_states();

    const int ticks_per_ctrl = exact_multiple(cfg.control_step, cfg.dt, "control_step");
    const int ctrls_per_sample =
        exact_multiple(cfg.sample_interval, cfg.control_step, "sample_interval");
    const int sample_count = exact_multiple(cfg.duration, cfg.sample_interval, "duration");

    const double tx = cfg.target_distance * std::cos(target_dir);
    const double ty = cfg.target_distance * std::sin(target_dir);

    double px = 0.0, py = 0.0;
    double psi = target_dir;  // start facing the target

    Trajectory tr;
    tr.samples.push_back({0.0, 0.0, 0.0, psi});

    const std::size_t n = net.joint_count();
    std::vector<double> s_start(n), s_end(n);

    // Per-side averaging denominators; center joints count half on each side.
    double den_left = 0.0, den_right = 0.0;
    for (const Joint& j : net.joints) {
        if (j.side == Side::Left) den_left += 1.0;
        if (j.side == Side::Right) den_right += 1.0;
        if (j.side == Side::Center) {
            den_left += 0.5;
            den_right += 0.5;
        }
    }

    const int total_ctrl = sample_count * ctrls_per_sample;
    for (int c = 0; c < total_ctrl; ++c) {
        double theta = cfg.fixed_theta
                           ? *cfg.fixed_theta
                           : wrap_pi(psi - std::atan2(ty - py, tx - px));

        for (std::size_t j = 0; j < n; ++j)
            s_start[j] = apply_steering(output_signal(net.x[j]), theta, net.joints[j].side);
        for (int k = 0; k < ticks_per_ctrl; ++k) step_cpg(net, cfg.dt);
        for (std::size_t j = 0; j < n; ++j)
            s_end[j] = apply_steering(output_signal(net.x[j]), theta, net.joints[j].side);

        double sum_left = 0.0, sum_right = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double ds = std::fabs(s_end[j] - s_start[j]);
            switch (net.joints[j].side) {
                case Side::Left:   sum_left += ds; break;
                case Side::Right:  sum_right += ds; break;
                case Side::Center: sum_left += 0.5 * ds; sum_right += 0.5 * ds; break;
            }
        }
        double a_left = den_left > 0.0 ? sum_left / den_left : 0.0;
        double a_right = den_right > 0.0 ? sum_right / den_right : 0.0;

        double v = cfg.thrust_coeff * std::min(1.0, 0.5 * (a_left + a_right));
        double psi_dot = cfg.turn_coeff * (a_right - a_left);

        for (int k = 0; k < ticks_per_ctrl; ++k) {
            px += v * cfg.dt * std::cos(psi);
            py += v * cfg.dt * std::sin(psi);
            tr.path_length += v * cfg.dt;
            psi += psi_dot * cfg.dt;
        }

        if ((c + 1) % ctrls_per_sample == 0) {
            double t = static_cast<double>((c + 1) / ctrls_per_sample) * cfg.sample_interval;
            tr.samples.push_back({t, px, py, psi});
        }
    }

    tr.final_direction = wrap_2pi(std::atan2(py, px));
    return tr;
}

double displacement_velocity(const Trajectory& tr) {
    if (tr.samples.size() < 2)
        throw std::invalid_argument("trajectory needs at least two samples");
    const TrajectorySample& a = tr.samples.front();
    const TrajectorySample& b = tr.samples.back();
    return std::hypot(b.x - a.x, b.y - a.y) / (b.t - a.t);
}

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "# schema=trajectory-v1\nt,x,y,heading\n";
    for (const TrajectorySample& s : tr.samples) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.x);
        out += ',';
        out += format_double(s.y);
        out += ',';
        out += format_double(s.heading);
        out += '\n';
    }
    return out;
}

}  // namespace evoro
