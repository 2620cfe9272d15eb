#pragma once

// Classical parameterizations of the preset surfaces, written in angle
// form and transcribed separately from src/presets.cpp. Defaults match
// the presets' default parameters.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "expinterp/shapes.hpp"

namespace shape_oracle {

using expinterp::Point;

struct Oracle {
    std::string name;
    std::function<Point(double, double)> f;
    double u_lo, u_hi, v_lo, v_hi;
};

inline double dist(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

inline std::vector<Oracle> surfaces() {
    constexpr double pi = std::numbers::pi;
    std::vector<Oracle> out;
    out.push_back({"roman",
                   [](double u, double v) {
                       const double r = 3.0;
                       return Point{r * r / 2 * std::cos(2 * pi * u) * std::sin(4 * pi * v),
                                    r * r / 2 * std::sin(2 * pi * u) * std::sin(4 * pi * v),
                                    r * r / 4 * std::sin(4 * pi * u) * (1 + std::cos(4 * pi * v))};
                   },
                   0, 1, 0, 1});
    out.push_back({"hyperbolic_paraboloid",
                   [](double u, double v) { return Point{4 * u * std::cosh(v), 4 * u * std::sinh(v), 8 * u * u}; },
                   -1, 1, -1, 1});
    out.push_back({"torus",
                   [](double u, double v) {
                       const double th = 2 * pi * u, ph = 2 * pi * v;
                       return Point{(2 + 0.75 * std::cos(ph)) * std::cos(th), (2 + 0.75 * std::cos(ph)) * std::sin(th),
                                    0.75 * std::sin(ph)};
                   },
                   0, 1, 0, 1});
    out.push_back({"figure8",
                   [](double u, double v) {
                       const double th = 2 * pi * u, ph = 2 * pi * v;
                       const double w = 2.5 + std::cos(th / 2) * std::sin(ph) - std::sin(th / 2) * std::sin(2 * ph);
                       return Point{w * std::cos(th), w * std::sin(th),
                                    std::sin(th / 2) * std::sin(ph) + std::cos(th / 2) * std::sin(2 * ph)};
                   },
                   0, 1, 0, 1});
    out.push_back({"helicoid",
                   [](double u, double v) {
                       const double th = 2 * pi * u;
                       return Point{v * std::cos(th), v * std::sin(th), u};
                   },
                   0, 1, -1, 1});
    out.push_back({"pinched_torus",
                   [](double u, double v) {
                       const double th = 2 * pi * u, ph = 2 * pi * v;
                       const double w = 2 + std::sin(th / 2) * std::cos(ph);
                       return Point{w * std::cos(th), w * std::sin(th), std::sin(th / 2) * std::sin(ph)};
                   },
                   0, 1, 0, 1});
    return out;
}

/// Largest model-to-oracle distance at `count` uniform random parameters.
inline double max_error(const expinterp::ShapeModel& model, const Oracle& o, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> du(o.u_lo, o.u_hi), dv(o.v_lo, o.v_hi);
    double worst = 0.0;
    for (int n = 0; n < count; ++n) {
        const double u = du(rng), v = dv(rng);
        worst = std::max(worst, dist(expinterp::evaluate(model, u, v), o.f(u, v)));
    }
    return worst;
}

}  // namespace shape_oracle
