#include "expinterp/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "expinterp/bspline.hpp"
#include "expinterp/error.hpp"
#include "expinterp/kernels.hpp"

namespace expinterp {

namespace {

std::int64_t wrap(std::int64_t k, std::int64_t n) { return ((k % n) + n) % n; }

}  // namespace

AxisBasis::AxisBasis(RootVector roots, int density, bool periodic, double domain_lo, double domain_hi,
                     std::int64_t first, std::int64_t count, std::int64_t scale, SampleBasis basis)
    : density_(density),
      periodic_(periodic),
      domain_lo_(periodic ? 0.0 : domain_lo),
      domain_hi_(periodic ? 1.0 : domain_hi),
      first_(periodic ? 0 : first),
      count_(count),
      scale_(scale),
      basis_(basis) {
    if (density < 1) throw Error(ErrorCode::InvalidArgument, "axis density must be positive");
    if (scale < 1) throw Error(ErrorCode::InvalidArgument, "axis scale must be positive");
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "axis needs at least one control point");
    if (periodic && count != static_cast<std::int64_t>(density) * scale) {
        throw Error(ErrorCode::InvalidArgument, "periodic axis must hold density * scale control points");
    }
    if (!periodic && !(domain_hi > domain_lo)) throw Error(ErrorCode::InvalidArgument, "empty axis domain");
    interp_ = std::make_shared<const Interpolator>(make_interpolator(roots));
    if (basis_ == SampleBasis::BSpline) {
        causal_ = std::make_shared<const CausalBSplineEvaluator>(
            CausalBSplineEvaluator(interp_->roots().scaled_down(static_cast<double>(scale_))));
    }
}

void AxisBasis::weights(double u, std::vector<std::pair<std::int64_t, double>>& out) const {
    out.clear();
    const double s = density_ * u;
    auto push = [&](std::int64_t index, double w) {
        if (w == 0.0) return;
        if (periodic_) {
            out.emplace_back(wrap(index, count_), w);
            return;
        }
        const std::int64_t slot = index - first_;
        if (slot >= 0 && slot < count_) out.emplace_back(slot, w);
    };
    if (basis_ == SampleBasis::Interpolator) {
        const int hw = interp_->support_halfwidth();
        const auto lo = static_cast<std::int64_t>(std::ceil(s - hw));
        const auto hi = static_cast<std::int64_t>(std::floor(s + hw));
        for (std::int64_t k = lo; k <= hi; ++k) push(k, (*interp_)(s - static_cast<double>(k)));
        return;
    }
    const int n0 = interp_->order();
    const double x = static_cast<double>(scale_) * (s + n0 - 1);
    const auto hi = static_cast<std::int64_t>(std::floor(x));
    for (std::int64_t l = hi - n0 + 1; l <= hi; ++l) push(l, (*causal_)(x - static_cast<double>(l)));
}

void AxisBasis::dense_weights(double u, std::span<double> row) const {
    if (static_cast<std::int64_t>(row.size()) != count_) {
        throw Error(ErrorCode::InvalidArgument, "weight row length must match the axis count");
    }
    std::fill(row.begin(), row.end(), 0.0);
    std::vector<std::pair<std::int64_t, double>> w;
    weights(u, w);
    // Small periodic nets can see the same slot twice through the fold.
    for (const auto& [slot, value] : w) row[static_cast<std::size_t>(slot)] += value;
}

std::pair<double, double> AxisBasis::influence(std::int64_t slot) const {
    const auto index = static_cast<double>(first_ + slot);
    if (basis_ == SampleBasis::Interpolator) {
        const int hw = interp_->support_halfwidth();
        return {(index - hw) / density_, (index + hw) / density_};
    }
    const int n0 = interp_->order();
    const auto scale = static_cast<double>(scale_);
    return {(index / scale - (n0 - 1)) / density_, ((index + n0) / scale - (n0 - 1)) / density_};
}

double AxisBasis::slot_parameter(std::int64_t slot) const {
    const auto index = static_cast<double>(first_ + slot);
    if (basis_ == SampleBasis::Interpolator) return index / density_;
    const int n0 = interp_->order();
    return ((index + 0.5 * n0) / static_cast<double>(scale_) - (n0 - 1)) / density_;
}

std::int64_t AxisBasis::spans() const { return std::llround(density_ * (domain_hi_ - domain_lo_)); }

SampleSequence AxisBasis::sequence(std::vector<std::vector<double>> channels) const {
    SampleSequence seq = SampleSequence::from_samples(std::move(channels), interp_->order(), periodic_, first_);
    seq.scale = scale_;
    seq.basis = basis_;
    return seq;
}

AxisBasis AxisBasis::refined(const SampleSequence& seq) const {
    AxisBasis out = *this;
    out.first_ = periodic_ ? 0 : seq.origin;
    out.count_ = seq.period();
    out.scale_ = seq.scale;
    out.basis_ = seq.basis;
    out.causal_ = std::make_shared<const CausalBSplineEvaluator>(
        CausalBSplineEvaluator(interp_->roots().scaled_down(static_cast<double>(seq.scale))));
    return out;
}

Point evaluate(const ShapeModel& model, double u, double v) {
    Point p{0.0, 0.0, 0.0};
    std::vector<std::pair<std::int64_t, double>> wu;
    model.axes[0].weights(u, wu);
    if (model.net.dims == 1) {
        for (const auto& [i, w] : wu) {
            const Point& q = model.net.at(i);
            for (int c = 0; c < 3; ++c) p[c] += w * q[c];
        }
        return p;
    }
    std::vector<std::pair<std::int64_t, double>> wv;
    model.axes[1].weights(v, wv);
    for (const auto& [i, a] : wu) {
        for (const auto& [j, b] : wv) {
            const Point& q = model.net.at(i, j);
            const double w = a * b;
            for (int c = 0; c < 3; ++c) p[c] += w * q[c];
        }
    }
    return p;
}

Point eval_curve(const ShapeModel& model, double u) {
    if (model.net.dims != 1) throw Error(ErrorCode::InvalidArgument, "eval_curve needs a curve model");
    return evaluate(model, u);
}

Point eval_surface(const ShapeModel& model, double u, double v) {
    if (model.net.dims != 2) throw Error(ErrorCode::InvalidArgument, "eval_surface needs a surface model");
    return evaluate(model, u, v);
}

ShapeModel make_model(std::string name, std::vector<AxisSpec> axes, ControlNet net) {
    if (axes.size() != 1 && axes.size() != 2) throw Error(ErrorCode::InvalidArgument, "a model has one or two axes");
    net.dims = static_cast<int>(axes.size());
    if (net.dims == 1) net.size_v = 1;
    if (net.size_u < 1 || net.size_v < 1 ||
        static_cast<std::int64_t>(net.points.size()) != net.size_u * net.size_v) {
        throw Error(ErrorCode::InvalidArgument, "control net size does not match its point count");
    }
    if (net.point_dim != 2 && net.point_dim != 3) throw Error(ErrorCode::InvalidArgument, "points must be 2D or 3D");
    net.periodic_u = axes[0].periodic;
    net.periodic_v = net.dims == 2 && axes[1].periodic;

    ShapeModel model;
    model.name = std::move(name);
    const std::array<std::int64_t, 2> counts{net.size_u, net.size_v};
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const AxisSpec& s = axes[a];
        if (s.periodic && counts[a] < 3) {
            throw Error(ErrorCode::InvalidArgument, "periodic axes need at least 3 control points");
        }
        int density = s.density;
        if (density <= 0) density = s.periodic ? static_cast<int>(counts[a]) : 1;
        double lo = s.domain_lo;
        double hi = s.domain_hi;
        if (!s.periodic && !(hi > lo)) {
            lo = static_cast<double>(s.first) / density;
            hi = static_cast<double>(s.first + counts[a] - 1) / density;
        }
        model.axes.emplace_back(s.roots, density, s.periodic, lo, hi, s.first, counts[a]);
    }
    model.net = std::move(net);
    return model;
}

ShapeModel move_control_point(const ShapeModel& model, std::int64_t i, std::int64_t j, const Point& position) {
    if (i < 0 || i >= model.net.size_u || j < 0 || j >= model.net.size_v) {
        throw Error(ErrorCode::IndexOutOfRange, "control point index out of range");
    }
    ShapeModel out = model;
    Point p = position;
    if (out.net.point_dim == 2) p[2] = 0.0;
    out.net.at(i, j) = p;
    return out;
}

DirtyWindow dirty_window(const ShapeModel& model, std::int64_t i, std::int64_t j) {
    if (i < 0 || i >= model.net.size_u || j < 0 || j >= model.net.size_v) {
        throw Error(ErrorCode::IndexOutOfRange, "control point index out of range");
    }
    DirtyWindow w;
    std::tie(w.lo[0], w.hi[0]) = model.axes[0].influence(i);
    if (model.net.dims == 2) std::tie(w.lo[1], w.hi[1]) = model.axes[1].influence(j);
    return w;
}

ShapeModel refine_model(const ShapeModel& model, int factor) {
    if (factor < 2) throw Error(ErrorCode::InvalidArgument, "refinement factor must be at least 2");
    for (const AxisBasis& axis : model.axes) {
        if (axis.basis() == SampleBasis::Interpolator && factor % 2 != 0) {
            throw Error(ErrorCode::OddFactor, "the first refinement of an axis needs an even factor");
        }
    }
    ShapeModel out = model;
    for (int a = 0; a < out.net.dims; ++a) {
        ControlNet& net = out.net;
        const AxisBasis& axis = out.axes[static_cast<std::size_t>(a)];
        const std::int64_t along = a == 0 ? net.size_u : net.size_v;
        const std::int64_t across = a == 0 ? net.size_v : net.size_u;

        // One channel per (line across the other axis, coordinate).
        std::vector<std::vector<double>> channels(static_cast<std::size_t>(across * 3),
                                                  std::vector<double>(static_cast<std::size_t>(along)));
        for (std::int64_t r = 0; r < across; ++r) {
            for (std::int64_t k = 0; k < along; ++k) {
                const Point& p = a == 0 ? net.at(k, r) : net.at(r, k);
                for (int c = 0; c < 3; ++c) channels[static_cast<std::size_t>(r * 3 + c)][static_cast<std::size_t>(k)] = p[c];
            }
        }
        const SampleSequence seq = axis.sequence(std::move(channels));
        ResolutionRecord record;
        record.axis = a;
        record.factor = factor;
        SampleSequence next;
        if (axis.basis() == SampleBasis::Interpolator) {
            next = change_of_basis(seq, pre_filter(axis.interpolator(), factor));
            record.kind = "prefilter";
        } else {
            next = refine_step(seq, axis.roots(), factor);
            record.kind = "refine";
        }
        record.scale_after = next.scale;

        const std::int64_t grown = next.period();
        ControlNet refined = net;
        if (a == 0) refined.size_u = grown; else refined.size_v = grown;
        refined.points.assign(static_cast<std::size_t>(refined.size_u * refined.size_v), Point{0.0, 0.0, 0.0});
        for (std::int64_t r = 0; r < across; ++r) {
            for (std::int64_t k = 0; k < grown; ++k) {
                Point& p = a == 0 ? refined.at(k, r) : refined.at(r, k);
                for (int c = 0; c < 3; ++c) p[c] = next.values[static_cast<std::size_t>(r * 3 + c)][static_cast<std::size_t>(k)];
            }
        }
        out.axes[static_cast<std::size_t>(a)] = axis.refined(next);
        out.net = std::move(refined);
        out.history.push_back(record);
    }
    return out;
}

double control_point_deviation(const ShapeModel& model, const AnalyticShape& shape) {
    constexpr double kSlack = 1e-12;
    auto inside = [&](int a, double t) {
        return shape.periodic[a] || (t >= shape.lo[a] - kSlack && t <= shape.hi[a] + kSlack);
    };
    double worst = 0.0;
    for (std::int64_t i = 0; i < model.net.size_u; ++i) {
        const double u = model.axes[0].slot_parameter(i);
        if (!inside(0, u)) continue;
        for (std::int64_t j = 0; j < model.net.size_v; ++j) {
            const double v = model.net.dims == 2 ? model.axes[1].slot_parameter(j) : 0.0;
            if (model.net.dims == 2 && !inside(1, v)) continue;
            const Point f = shape(u, v);
            const Point& p = model.net.at(i, j);
            worst = std::max(worst, std::hypot(p[0] - f[0], p[1] - f[1], p[2] - f[2]));
        }
    }
    return worst;
}

Mesh tessellate(const ShapeModel& model, int samples_per_span) {
    if (samples_per_span < 1) throw Error(ErrorCode::InvalidArgument, "samples per span must be positive");
    const int dims = model.net.dims;

    struct AxisGrid {
        std::int64_t vertices = 1;
        std::int64_t controls = 1;
        std::vector<double> weights;  // vertices x controls, row-major
    };
    auto grid_for = [&](const AxisBasis& axis) {
        AxisGrid g;
        const std::int64_t spans = axis.spans() * samples_per_span;
        g.vertices = axis.periodic() ? spans : spans + 1;
        g.controls = axis.count();
        g.weights.assign(static_cast<std::size_t>(g.vertices * g.controls), 0.0);
        const double step = 1.0 / (static_cast<double>(axis.density()) * samples_per_span);
        for (std::int64_t i = 0; i < g.vertices; ++i) {
            const double u = axis.domain_lo() + static_cast<double>(i) * step;
            axis.dense_weights(u, std::span<double>(g.weights).subspan(static_cast<std::size_t>(i * g.controls),
                                                                        static_cast<std::size_t>(g.controls)));
        }
        return g;
    };
    const AxisGrid gu = grid_for(model.axes[0]);
    AxisGrid gv;
    gv.weights = {1.0};
    if (dims == 2) gv = grid_for(model.axes[1]);

    Mesh mesh;
    mesh.count_u = gu.vertices;
    mesh.count_v = gv.vertices;
    mesh.vertices.assign(static_cast<std::size_t>(gu.vertices * gv.vertices), Point{0.0, 0.0, 0.0});

    // Separable evaluation per coordinate: T = P Wv^T, then V = Wu T.
    const auto cu = static_cast<std::size_t>(gu.controls);
    const auto cv = static_cast<std::size_t>(gv.controls);
    const auto nu = static_cast<std::size_t>(gu.vertices);
    const auto nv = static_cast<std::size_t>(gv.vertices);
    std::vector<double> plane(cu * cv);
    std::vector<double> partial(cu * nv);
    std::vector<double> out(nu * nv);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t k = 0; k < cu * cv; ++k) plane[k] = model.net.points[k][static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < cu; ++k) {
            const std::span<const double> row(plane.data() + k * cv, cv);
            for (std::size_t j = 0; j < nv; ++j) {
                partial[k * nv + j] = kernels::dot(row, std::span<const double>(gv.weights.data() + j * cv, cv));
            }
        }
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < nu; ++i) {
            const std::span<double> target(out.data() + i * nv, nv);
            for (std::size_t k = 0; k < cu; ++k) {
                const double w = gu.weights[i * cu + k];
                if (w != 0.0) kernels::axpy(w, std::span<const double>(partial.data() + k * nv, nv), target);
            }
        }
        for (std::size_t k = 0; k < nu * nv; ++k) mesh.vertices[k][static_cast<std::size_t>(c)] = out[k];
    }

    const bool wrap_u = model.axes[0].periodic();
    const std::int64_t eu = wrap_u ? gu.vertices : gu.vertices - 1;
    auto id = [&](std::int64_t i, std::int64_t j) { return (i % gu.vertices) * gv.vertices + (j % gv.vertices); };
    if (dims == 1) {
        for (std::int64_t i = 0; i < eu; ++i) mesh.segments.push_back({id(i, 0), id(i + 1, 0)});
        return mesh;
    }
    const bool wrap_v = model.axes[1].periodic();
    const std::int64_t ev = wrap_v ? gv.vertices : gv.vertices - 1;
    for (std::int64_t i = 0; i < eu; ++i) {
        for (std::int64_t j = 0; j < ev; ++j) {
            mesh.quads.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return mesh;
}

}  // namespace expinterp
