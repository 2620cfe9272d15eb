#include "expinterp/shape_io.hpp"

#include <cmath>
#include <fmt/format.h>

#include "expinterp/error.hpp"

namespace expinterp {

namespace {

constexpr int kFormatVersion = 1;
constexpr double kLambdaTolerance = 1e-9;

[[noreturn]] void malformed(const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "malformed shape document: " + what);
}

const Json& field(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) malformed(std::string("missing field '") + key + "'");
    return obj.at(key);
}

template <class T>
T get(const Json& obj, const char* key) {
    try {
        return field(obj, key).get<T>();
    } catch (const nlohmann::json::exception&) {
        malformed(std::string("field '") + key + "' has the wrong type");
    }
}

Json point_to_json(const Point& p, int point_dim) {
    if (point_dim == 2) return Json::array({p[0], p[1]});
    return Json::array({p[0], p[1], p[2]});
}

Point point_from_json(const Json& j) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3) malformed("points must have 2 or 3 coordinates");
    Point p{0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < j.size(); ++c) {
        if (!j[c].is_number()) malformed("point coordinates must be numbers");
        p[c] = j[c].get<double>();
    }
    return p;
}

const char* basis_name(SampleBasis b) { return b == SampleBasis::Interpolator ? "interpolator" : "bspline"; }

SampleBasis basis_from_name(const std::string& s) {
    if (s == "interpolator") return SampleBasis::Interpolator;
    if (s == "bspline") return SampleBasis::BSpline;
    malformed("unknown basis '" + s + "'");
}

}  // namespace

Json roots_to_json(const RootVector& roots) {
    Json out = Json::array();
    for (const cplx& a : roots) out.push_back(Json::array({a.real(), a.imag()}));
    return out;
}

RootVector roots_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "roots must be an array");
    std::vector<cplx> roots;
    for (const Json& r : j) {
        if (r.is_number()) {
            roots.emplace_back(r.get<double>(), 0.0);
        } else if (r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number()) {
            roots.emplace_back(r[0].get<double>(), r[1].get<double>());
        } else {
            throw Error(ErrorCode::InvalidArgument, "each root must be a number or an [re, im] pair");
        }
    }
    return RootVector(std::move(roots));
}

Json model_to_json(const ShapeModel& model) {
    Json axes = Json::array();
    for (const AxisBasis& a : model.axes) {
        const auto half = a.interpolator().lambda().half();
        axes.push_back({
            {"roots", roots_to_json(a.roots())},
            {"lambda", std::vector<double>(half.begin(), half.end())},
            {"condition_number", a.interpolator().condition_number()},
            {"periodic", a.periodic()},
            {"density", a.density()},
            {"first", a.first()},
            {"count", a.count()},
            {"domain", {a.domain_lo(), a.domain_hi()}},
            {"scale", a.scale()},
            {"basis", basis_name(a.basis())},
        });
    }
    Json points = Json::array();
    for (const Point& p : model.net.points) points.push_back(point_to_json(p, model.net.point_dim));
    Json history = Json::array();
    for (const ResolutionRecord& r : model.history) {
        history.push_back({{"axis", r.axis}, {"kind", r.kind}, {"factor", r.factor}, {"scale_after", r.scale_after}});
    }
    return {
        {"format", "expinterp-shape"},
        {"version", kFormatVersion},
        {"name", model.name},
        {"dims", model.net.dims},
        {"point_dim", model.net.point_dim},
        {"axes", std::move(axes)},
        {"net",
         {{"size_u", model.net.size_u},
          {"size_v", model.net.size_v},
          {"periodic_u", model.net.periodic_u},
          {"periodic_v", model.net.periodic_v},
          {"points", std::move(points)}}},
        {"history", std::move(history)},
    };
}

ShapeModel model_from_json(const Json& doc) {
    if (get<std::string>(doc, "format") != "expinterp-shape") malformed("not an expinterp shape document");
    if (get<int>(doc, "version") != kFormatVersion) malformed("unsupported version");

    ShapeModel model;
    model.name = get<std::string>(doc, "name");
    const Json& net = field(doc, "net");
    model.net.dims = get<int>(doc, "dims");
    model.net.point_dim = get<int>(doc, "point_dim");
    model.net.size_u = get<std::int64_t>(net, "size_u");
    model.net.size_v = get<std::int64_t>(net, "size_v");
    model.net.periodic_u = get<bool>(net, "periodic_u");
    model.net.periodic_v = get<bool>(net, "periodic_v");
    if (model.net.dims != 1 && model.net.dims != 2) malformed("dims must be 1 or 2");
    if (model.net.point_dim != 2 && model.net.point_dim != 3) malformed("point_dim must be 2 or 3");
    const Json& points = field(net, "points");
    if (!points.is_array() || model.net.size_u < 1 || model.net.size_v < 1 ||
        static_cast<std::int64_t>(points.size()) != model.net.size_u * model.net.size_v) {
        malformed("net size does not match its point count");
    }
    for (const Json& p : points) model.net.points.push_back(point_from_json(p));

    const Json& axes = field(doc, "axes");
    if (!axes.is_array() || static_cast<int>(axes.size()) != model.net.dims) malformed("one axis per dimension");
    const std::array<std::int64_t, 2> sizes{model.net.size_u, model.net.size_v};
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const Json& ax = axes[a];
        const Json& domain = field(ax, "domain");
        if (!domain.is_array() || domain.size() != 2) malformed("domain must be [lo, hi]");
        if (get<std::int64_t>(ax, "count") != sizes[a]) malformed("axis count does not match the net");
        model.axes.emplace_back(roots_from_json(field(ax, "roots")), get<int>(ax, "density"), get<bool>(ax, "periodic"),
                                domain[0].get<double>(), domain[1].get<double>(), get<std::int64_t>(ax, "first"),
                                sizes[a], get<std::int64_t>(ax, "scale"),
                                basis_from_name(get<std::string>(ax, "basis")));
        if (ax.contains("lambda")) {
            const auto stored = ax.at("lambda").get<std::vector<double>>();
            const auto half = model.axes.back().interpolator().lambda().half();
            if (stored.size() != half.size()) malformed("lambda length does not match the roots");
            for (std::size_t i = 0; i < stored.size(); ++i) {
                if (std::abs(stored[i] - half[i]) > kLambdaTolerance * std::max(1.0, std::abs(half[i]))) {
                    malformed("stored lambda does not match the roots");
                }
            }
        }
    }
    if (model.net.periodic_u != model.axes[0].periodic() ||
        (model.net.dims == 2 && model.net.periodic_v != model.axes[1].periodic())) {
        malformed("net periodicity flags disagree with the axes");
    }
    for (const Json& r : field(doc, "history")) {
        model.history.push_back(
            {get<int>(r, "axis"), get<std::string>(r, "kind"), get<int>(r, "factor"), get<std::int64_t>(r, "scale_after")});
    }
    return model;
}

Json mesh_to_json(const Mesh& mesh, int point_dim) {
    Json vertices = Json::array();
    for (const Point& p : mesh.vertices) vertices.push_back(point_to_json(p, point_dim));
    Json out{{"count_u", mesh.count_u}, {"count_v", mesh.count_v}, {"vertices", std::move(vertices)}};
    if (!mesh.quads.empty()) out["quads"] = mesh.quads;
    if (!mesh.segments.empty()) out["segments"] = mesh.segments;
    return out;
}

std::string mesh_to_obj(const Mesh& mesh, int point_dim, std::string_view name) {
    std::string out = fmt::format("# expinterp mesh\no {}\n", name);
    for (const Point& p : mesh.vertices) {
        // OBJ vertices are 3D; planar curves get z = 0.
        out += fmt::format("v {:.17g} {:.17g} {:.17g}\n", p[0], p[1], point_dim == 2 ? 0.0 : p[2]);
    }
    for (const auto& q : mesh.quads) out += fmt::format("f {} {} {} {}\n", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    for (const auto& s : mesh.segments) out += fmt::format("l {} {}\n", s[0] + 1, s[1] + 1);
    return out;
}

}  // namespace expinterp
