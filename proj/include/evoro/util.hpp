#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace evoro {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wrap an angle into [-pi, pi).
inline double wrap_pi(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - kPi;
}

// Wrap an angle into [0, 2*pi).
inline double wrap_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

inline double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

inline double deg_to_rad(double d) { return d * kPi / 180.0; }

// x^n for small non-negative integer n, by repeated multiplication.
inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Shortest decimal string that round-trips the value; the one formatting
// used for every emitted file, so reruns diff byte-for-byte.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace evoro
