#include <cmath>
#include <numbers>
#include <set>

#include "expinterp/error.hpp"
#include "expinterp/shapes.hpp"

namespace expinterp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

/// Reads named parameters with defaults and rejects names nobody asked for.
class ParamReader {
public:
    ParamReader(std::string shape, const ShapeParams& params) : shape_(std::move(shape)), params_(params) {}

    double real(const std::string& key, double fallback) {
        used_.insert(key);
        const auto it = params_.find(key);
        if (it == params_.end()) return fallback;
        if (!std::isfinite(it->second)) throw Error(ErrorCode::InvalidArgument, shape_ + ": " + key + " must be finite");
        return it->second;
    }

    int count(const std::string& key, int fallback, int minimum) {
        const double v = real(key, fallback);
        if (v != std::floor(v) || v < minimum || v > 4096) {
            throw Error(ErrorCode::InvalidArgument,
                        shape_ + ": " + key + " must be an integer >= " + std::to_string(minimum));
        }
        return static_cast<int>(v);
    }

    void finish() const {
        for (const auto& [key, value] : params_) {
            if (!used_.contains(key)) throw Error(ErrorCode::InvalidArgument, shape_ + ": unknown parameter " + key);
        }
    }

private:
    std::string shape_;
    const ShapeParams& params_;
    std::set<std::string> used_;
};

struct PresetAxis {
    RootVector roots;
    int density = 1;
    bool periodic = false;
    double lo = 0.0;
    double hi = 1.0;
};

struct Preset {
    AnalyticShape shape;
    std::vector<PresetAxis> axes;
};

// Frequencies (in cycles per unit parameter) -> roots +-2 pi i f / M.
RootVector trig_roots(std::initializer_list<double> frequencies, int density, bool with_zero) {
    std::vector<cplx> r;
    if (with_zero) r.emplace_back(0.0);
    for (double f : frequencies) {
        r.push_back(kI * (kTwoPi * f / density));
        r.push_back(-kI * (kTwoPi * f / density));
    }
    return RootVector(std::move(r));
}

RootVector zeros(int n) { return RootVector(std::vector<cplx>(static_cast<std::size_t>(n), 0.0)); }

PresetAxis periodic_axis(RootVector roots, int density) { return {std::move(roots), density, true, 0.0, 1.0}; }

PresetAxis open_axis(RootVector roots, int density, double lo, double hi) {
    return {std::move(roots), density, false, lo, hi};
}

Preset build_preset(const std::string& name, const ShapeParams& params) {
    ParamReader p(name, params);
    Preset out;
    AnalyticShape& s = out.shape;
    s.name = name;
    if (name == "circle") {
        const int m = p.count("M", 3, 3);
        const double r = p.real("radius", 1.0);
        const double cx = p.real("cx", 0.0);
        const double cy = p.real("cy", 0.0);
        s.dims = 1;
        s.point_dim = 2;
        s.fn = [=](double u, double) { return Point{cx + r * std::cos(kTwoPi * u), cy + r * std::sin(kTwoPi * u), 0.0}; };
        out.axes = {periodic_axis(ellipse_roots(m), m)};
    } else if (name == "ellipse") {
        const int m = p.count("M", 3, 3);
        const double a = p.real("a", 2.0);
        const double b = p.real("b", 1.0);
        const double angle = p.real("angle", 0.0);
        const double cx = p.real("cx", 0.0);
        const double cy = p.real("cy", 0.0);
        const double ca = std::cos(angle);
        const double sa = std::sin(angle);
        s.dims = 1;
        s.point_dim = 2;
        s.fn = [=](double u, double) {
            const double x = a * std::cos(kTwoPi * u);
            const double y = b * std::sin(kTwoPi * u);
            return Point{cx + ca * x - sa * y, cy + sa * x + ca * y, 0.0};
        };
        out.axes = {periodic_axis(ellipse_roots(m), m)};
    } else if (name == "roman") {
        const double r = p.real("r", 3.0);
        const int m1 = p.count("M1", 5, 3);
        const int m2 = p.count("M2", 5, 3);
        const double r2 = r * r;
        s.dims = 2;
        s.fn = [=](double u, double v) {
            const double cu = std::cos(kTwoPi * u);
            const double su = std::sin(kTwoPi * u);
            const double cv = std::cos(kTwoPi * v);
            return Point{0.5 * r2 * cu * std::sin(2.0 * kTwoPi * v), 0.5 * r2 * su * std::sin(2.0 * kTwoPi * v),
                         r2 * cu * su * cv * cv};
        };
        out.axes = {periodic_axis(trig_roots({1.0, 2.0}, m1, false), m1),
                    periodic_axis(trig_roots({2.0}, m2, true), m2)};
    } else if (name == "hyperbolic_paraboloid") {
        const double a = p.real("a", 4.0);
        const double b = p.real("b", 4.0);
        const double h = p.real("h", 8.0);
        const int m1 = p.count("M1", 3, 1);
        const int m2 = p.count("M2", 3, 1);
        s.dims = 2;
        s.lo = {-1.0, -1.0};
        s.hi = {1.0, 1.0};
        s.fn = [=](double u, double v) { return Point{a * u * std::cosh(v), b * u * std::sinh(v), h * u * u}; };
        const double rate = 1.0 / m2;
        out.axes = {open_axis(zeros(3), m1, -1.0, 1.0), open_axis(RootVector{0.0, rate, -rate}, m2, -1.0, 1.0)};
    } else if (name == "torus") {
        const double big = p.real("R", 2.0);
        const double rho = p.real("rho", 0.75);
        const int m1 = p.count("M1", 5, 3);
        const int m2 = p.count("M2", 5, 3);
        s.dims = 2;
        s.fn = [=](double u, double v) {
            const double ring = big + rho * std::cos(kTwoPi * v);
            return Point{ring * std::cos(kTwoPi * u), ring * std::sin(kTwoPi * u), rho * std::sin(kTwoPi * v)};
        };
        out.axes = {periodic_axis(ellipse_roots(m1), m1), periodic_axis(ellipse_roots(m2), m2)};
    } else if (name == "figure8") {
        const double a = p.real("a", 2.5);
        const int m1 = p.count("M1", 8, 1);
        const int m2 = p.count("M2", 6, 3);
        s.dims = 2;
        // Half-angle terms make u 2-periodic, so u is an open axis over one sheet.
        s.fn = [=](double u, double v) {
            const double ch = std::cos(kPi * u);
            const double sh = std::sin(kPi * u);
            const double s1 = std::sin(kTwoPi * v);
            const double s2 = std::sin(2.0 * kTwoPi * v);
            const double ring = a + ch * s1 - sh * s2;
            return Point{ring * std::cos(kTwoPi * u), ring * std::sin(kTwoPi * u), sh * s1 + ch * s2};
        };
        out.axes = {open_axis(trig_roots({0.5, 1.0, 1.5}, m1, true), m1, 0.0, 1.0),
                    periodic_axis(trig_roots({1.0, 2.0}, m2, true), m2)};
    } else if (name == "helicoid") {
        const double c = p.real("c", 1.0);
        const double h = p.real("h", 1.0);
        const int m1 = p.count("M1", 6, 1);
        const int m2 = p.count("M2", 3, 1);
        s.dims = 2;
        s.lo = {0.0, -1.0};
        s.hi = {1.0, 1.0};
        s.fn = [=](double u, double v) {
            return Point{v * std::cos(kTwoPi * c * u), v * std::sin(kTwoPi * c * u), h * u};
        };
        const cplx w = kI * (kTwoPi * c / m1);
        out.axes = {open_axis(RootVector{0.0, 0.0, w, -w}, m1, 0.0, 1.0), open_axis(zeros(3), m2, -1.0, 1.0)};
    } else if (name == "pinched_torus") {
        const double big = p.real("R", 2.0);
        const double rho = p.real("rho", 1.0);
        const int m1 = p.count("M1", 8, 1);
        const int m2 = p.count("M2", 5, 3);
        s.dims = 2;
        s.fn = [=](double u, double v) {
            const double sh = std::sin(kPi * u);
            const double ring = big + rho * sh * std::cos(kTwoPi * v);
            return Point{ring * std::cos(kTwoPi * u), ring * std::sin(kTwoPi * u), rho * sh * std::sin(kTwoPi * v)};
        };
        out.axes = {open_axis(trig_roots({0.5, 1.0, 1.5}, m1, true), m1, 0.0, 1.0),
                    periodic_axis(ellipse_roots(m2), m2)};
    } else {
        throw Error(ErrorCode::UnknownShape, "unknown shape preset: " + name);
    }
    p.finish();
    for (std::size_t a = 0; a < out.axes.size(); ++a) {
        s.lo[a] = out.axes[a].lo;
        s.hi[a] = out.axes[a].hi;
        s.periodic[a] = out.axes[a].periodic;
    }
    return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"circle", "ellipse", "roman", "hyperbolic_paraboloid",
                                                "torus", "figure8", "helicoid", "pinched_torus"};
    return names;
}

AnalyticShape analytic_shape(const std::string& name, const ShapeParams& params) {
    return build_preset(name, params).shape;
}

ShapeModel preset_shape(const std::string& name, const ShapeParams& params) {
    const Preset preset = build_preset(name, params);
    std::vector<AxisSpec> specs;
    std::array<std::int64_t, 2> first{0, 0};
    std::array<std::int64_t, 2> count{1, 1};
    for (std::size_t a = 0; a < preset.axes.size(); ++a) {
        const PresetAxis& axis = preset.axes[a];
        if (!axis.roots.is_riesz_admissible()) {
            throw Error(ErrorCode::InvalidArgument,
                        name + ": roots are not Riesz admissible for density " + std::to_string(axis.density));
        }
        AxisSpec spec;
        spec.roots = axis.roots;
        spec.density = axis.density;
        spec.periodic = axis.periodic;
        spec.domain_lo = axis.lo;
        spec.domain_hi = axis.hi;
        if (axis.periodic) {
            count[a] = axis.density;
        } else {
            // Pad past the domain so every parameter inside sees its full support.
            const std::int64_t pad = static_cast<std::int64_t>(axis.roots.order());
            first[a] = std::llround(axis.lo * axis.density) - pad;
            count[a] = std::llround(axis.hi * axis.density) + pad - first[a] + 1;
            spec.first = first[a];
        }
        specs.push_back(std::move(spec));
    }
    ControlNet net;
    net.point_dim = preset.shape.point_dim;
    net.size_u = count[0];
    net.size_v = count[1];
    net.points.reserve(static_cast<std::size_t>(count[0] * count[1]));
    const int d0 = preset.axes[0].density;
    const int d1 = preset.axes.size() > 1 ? preset.axes[1].density : 1;
    for (std::int64_t i = 0; i < count[0]; ++i) {
        for (std::int64_t j = 0; j < count[1]; ++j) {
            const double u = static_cast<double>(first[0] + i) / d0;
            const double v = static_cast<double>(first[1] + j) / d1;
            net.points.push_back(preset.shape(u, v));
        }
    }
    return make_model(name, std::move(specs), std::move(net));
}

}  // namespace expinterp
