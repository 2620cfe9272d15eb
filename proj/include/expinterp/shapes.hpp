#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "expinterp/bspline.hpp"
#include "expinterp/interpolator.hpp"
#include "expinterp/refinement.hpp"

namespace expinterp {

using Point = std::array<double, 3>;

/// Grid of control points. Curves use size_v == 1. Points are stored
/// u-major: points[i * size_v + j].
struct ControlNet {
    int dims = 1;
    int point_dim = 3;
    std::int64_t size_u = 0;
    std::int64_t size_v = 1;
    bool periodic_u = false;
    bool periodic_v = false;
    std::vector<Point> points;

    const Point& at(std::int64_t i, std::int64_t j = 0) const {
        return points[static_cast<std::size_t>(i * size_v + j)];
    }
    Point& at(std::int64_t i, std::int64_t j = 0) { return points[static_cast<std::size_t>(i * size_v + j)]; }
};

/// Basis along one parametric axis.
///
/// The user parameter u maps to the sample grid through s = density * u.
/// Before refinement the basis is the interpolator (weight phi(s - k) for
/// control index k); after refinement it is the causal B-spline for
/// alpha / scale (weight beta(scale (s + n0 - 1) - l)). Slot i of the net
/// holds index first + i; periodic axes have first = 0 and wrap.
class AxisBasis {
public:
    AxisBasis() = default;
    /// Periodic axes need count == density * scale and use the domain [0, 1).
    AxisBasis(RootVector roots, int density, bool periodic, double domain_lo, double domain_hi,
              std::int64_t first, std::int64_t count, std::int64_t scale = 1,
              SampleBasis basis = SampleBasis::Interpolator);

    const RootVector& roots() const { return interp_->roots(); }
    const Interpolator& interpolator() const { return *interp_; }
    int density() const { return density_; }
    bool periodic() const { return periodic_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }
    std::int64_t first() const { return first_; }
    std::int64_t count() const { return count_; }
    std::int64_t scale() const { return scale_; }
    SampleBasis basis() const { return basis_; }

    /// Nonzero basis weights at user parameter u as (slot, weight) pairs;
    /// periodic slots are folded, indices outside an open net are dropped.
    void weights(double u, std::vector<std::pair<std::int64_t, double>>& out) const;

    /// Dense weight row of length count().
    void dense_weights(double u, std::span<double> row) const;

    /// Open user-parameter interval outside which moving `slot` has no effect.
    std::pair<double, double> influence(std::int64_t slot) const;

    /// Axis after a refinement that produced `seq` from this axis' samples.
    AxisBasis refined(const SampleSequence& seq) const;

    /// Samples along this axis packaged for the refinement filters.
    SampleSequence sequence(std::vector<std::vector<double>> channels) const;

    /// User parameter of a slot's sample (interpolation site, or B-spline center).
    double slot_parameter(std::int64_t slot) const;

    /// Number of control spans in the domain, density * (hi - lo).
    std::int64_t spans() const;

private:
    std::shared_ptr<const Interpolator> interp_;
    std::shared_ptr<const CausalBSplineEvaluator> causal_;
    int density_ = 1;
    bool periodic_ = false;
    double domain_lo_ = 0.0;
    double domain_hi_ = 1.0;
    std::int64_t first_ = 0;
    std::int64_t count_ = 0;
    std::int64_t scale_ = 1;
    SampleBasis basis_ = SampleBasis::Interpolator;
};

struct ResolutionRecord {
    int axis = 0;
    std::string kind;  // "prefilter" or "refine"
    int factor = 2;
    std::int64_t scale_after = 1;
};

/// A parametric curve (one axis) or surface (two axes) with its editable net.
struct ShapeModel {
    std::string name;
    ControlNet net;
    std::vector<AxisBasis> axes;
    std::vector<ResolutionRecord> history;

    int dims() const { return net.dims; }
    bool refined() const { return !history.empty(); }
};

using ShapeParams = std::map<std::string, double>;

/// Curve r(u) = sum_k r[k] phi(M u - k) (periodized when the axis is periodic).
Point eval_curve(const ShapeModel& model, double u);

/// eval_curve or eval_surface depending on the model; v is ignored for curves.
Point evaluate(const ShapeModel& model, double u, double v = 0.0);

/// Surface sigma(u, v) = sum_k sum_l sigma[k, l] phi_1(M1 u - k) phi_2(M2 v - l).
Point eval_surface(const ShapeModel& model, double u, double v);

/// Analytic parameterization of a preset, the reference a model reproduces.
struct AnalyticShape {
    std::string name;
    int dims = 1;
    int point_dim = 3;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<bool, 2> periodic{false, false};
    Point operator()(double u, double v = 0.0) const { return fn(u, v); }
    std::function<Point(double, double)> fn;
};

/// Names accepted by preset_shape.
const std::vector<std::string>& preset_names();

/// UnknownShape for names outside preset_names().
AnalyticShape analytic_shape(const std::string& name, const ShapeParams& params = {});

/// Model whose net samples the analytic shape and whose roots reproduce it.
ShapeModel preset_shape(const std::string& name, const ShapeParams& params = {});

/// Curve or surface model from explicit roots and a net, e.g. from a client.
/// Open axes take the net as given starting at index `first`. A density of
/// 0 means one period per net (periodic) or unit spacing (open); an empty
/// domain on an open axis spans the net's own sample sites.
struct AxisSpec {
    RootVector roots;
    int density = 0;
    bool periodic = false;
    std::int64_t first = 0;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
};
ShapeModel make_model(std::string name, std::vector<AxisSpec> axes, ControlNet net);

/// New model with one control point moved; IndexOutOfRange on a bad slot.
ShapeModel move_control_point(const ShapeModel& model, std::int64_t i, std::int64_t j, const Point& position);

/// Refines every axis: the first call on an axis applies the pre-filter
/// (factor must be even, else OddFactor), later calls the refinement mask.
ShapeModel refine_model(const ShapeModel& model, int factor);

/// Parameter-space window a moved point can affect, per axis. Bounds on
/// periodic axes are not wrapped, so lo may be negative or hi above 1.
struct DirtyWindow {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
};
DirtyWindow dirty_window(const ShapeModel& model, std::int64_t i, std::int64_t j);

/// Largest distance between a control point and the analytic shape at the
/// point's own parameter (its B-spline center once refined). Only points
/// whose parameters fall inside the analytic domain are compared.
double control_point_deviation(const ShapeModel& model, const AnalyticShape& shape);

struct Mesh {
    std::int64_t count_u = 0;
    std::int64_t count_v = 1;
    std::vector<Point> vertices;                       // u-major grid
    std::vector<std::array<std::int64_t, 4>> quads;   // surfaces
    std::vector<std::array<std::int64_t, 2>> segments;  // curves
};

/// Uniform parameter grid with samples_per_span samples per control span.
/// Periodic axes give density * s vertices (closed); open axes give
/// density * s * (hi - lo) + 1.
Mesh tessellate(const ShapeModel& model, int samples_per_span);

}  // namespace expinterp
