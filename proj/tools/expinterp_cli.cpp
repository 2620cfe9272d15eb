// Command-line front end: reproduction reports, refinement demos, exports,
// interpolator construction and the HTTP service.

#include <CLI11.hpp>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <random>

#include "expinterp/error.hpp"
#include "expinterp/interpolator.hpp"
#include "expinterp/service.hpp"
#include "expinterp/shape_io.hpp"
#include "expinterp/shapes.hpp"

using namespace expinterp;

namespace {

ShapeParams parse_params(const std::vector<std::string>& items) {
    ShapeParams params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "parameters look like name=value: " + item);
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty()) throw Error(ErrorCode::InvalidArgument, "not a number: " + item);
        params[item.substr(0, eq)] = v;
    }
    return params;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

double max_deviation(const ShapeModel& model, const AnalyticShape& shape, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> du(shape.lo[0], shape.hi[0]);
    std::uniform_real_distribution<double> dv(shape.lo[1], shape.hi[1]);
    double worst = 0.0;
    for (int n = 0; n < count; ++n) {
        const double u = du(rng);
        const double v = shape.dims == 2 ? dv(rng) : 0.0;
        const Point p = evaluate(model, u, v);
        const Point f = shape(u, v);
        worst = std::max(worst, std::hypot(p[0] - f[0], p[1] - f[1], p[2] - f[2]));
    }
    return worst;
}

void print_axes(const ShapeModel& model) {
    for (std::size_t a = 0; a < model.axes.size(); ++a) {
        const AxisBasis& axis = model.axes[a];
        const Interpolator& interp = axis.interpolator();
        fmt::print("axis {}: n0={} density={} {} count={} cond={:.6g}\n", a, interp.order(), axis.density(),
                   axis.periodic() ? "periodic" : "open", axis.count(), interp.condition_number());
        fmt::print("  lambda:");
        for (double l : interp.lambda().half()) fmt::print(" {:.9g}", l);
        fmt::print("\n");
    }
}

int cmd_reproduce(const std::string& name, const ShapeParams& params, int count, std::uint64_t seed) {
    const ShapeModel model = preset_shape(name, params);
    const AnalyticShape shape = analytic_shape(name, params);
    fmt::print("shape {} ({}D net {}x{})\n", name, model.net.dims, model.net.size_u, model.net.size_v);
    print_axes(model);
    const double sites = control_point_deviation(model, shape);
    const double random = max_deviation(model, shape, count, seed);
    fmt::print("max error at net sites:          {:.3e}\n", sites);
    fmt::print("max error at {} random params: {:.3e}\n", count, random);
    if (name == "circle") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> du(0.0, 1.0);
        const double radius = params.contains("radius") ? params.at("radius") : 1.0;
        const double cx = params.contains("cx") ? params.at("cx") : 0.0;
        const double cy = params.contains("cy") ? params.at("cy") : 0.0;
        double worst = 0.0;
        for (int n = 0; n < 1000; ++n) {
            const Point p = eval_curve(model, du(rng));
            worst = std::max(worst, std::abs(std::hypot(p[0] - cx, p[1] - cy) - radius));
        }
        fmt::print("max radius error (1000 params):  {:.3e}\n", worst);
    }
    return 0;
}

int cmd_refine_demo(const std::string& name, const ShapeParams& params, int depth, int m0, int m, bool show_nets) {
    const AnalyticShape shape = analytic_shape(name, params);
    ShapeModel model = preset_shape(name, params);
    fmt::print("refine-demo {}: m0={} m={} depth={}\n", name, m0, m, depth);
    fmt::print("{:>5} {:>8} {:>10} {:>12} {:>12}\n", "level", "scale", "points", "net error", "shape error");
    for (int level = 0; level <= depth; ++level) {
        model = refine_model(model, level == 0 ? m0 : m);
        const double err = control_point_deviation(model, shape);
        // The continuous shape must not move; only the net approaches it.
        const double drift = max_deviation(model, shape, 200, 7);
        fmt::print("{:>5} {:>8} {:>10} {:>12.3e} {:>12.3e}\n", level, model.axes[0].scale(), model.net.points.size(), err,
                   drift);
        if (show_nets) {
            for (const Point& p : model.net.points) fmt::print("  {:.17g} {:.17g} {:.17g}\n", p[0], p[1], p[2]);
        }
    }
    return 0;
}

int cmd_export(const std::string& name, const ShapeParams& params, const std::string& obj, const std::string& json,
               int samples, const std::vector<int>& refine) {
    if (obj.empty() && json.empty()) throw Error(ErrorCode::InvalidArgument, "choose --obj and/or --json");
    ShapeModel model = preset_shape(name, params);
    for (int f : refine) model = refine_model(model, f);
    if (!obj.empty()) write_text(obj, mesh_to_obj(tessellate(model, samples), model.net.point_dim, model.name));
    if (!json.empty()) write_text(json, model_to_json(model).dump(2) + "\n");
    return 0;
}

int cmd_lambda(const std::string& text) {
    const RootVector roots = parse_roots(text);
    fmt::print("roots:");
    for (const cplx& a : roots) fmt::print(" ({:.9g}{:+.9g}i)", a.real(), a.imag());
    fmt::print("\n");
    const InterpolationSystem system = build_system(roots);
    fmt::print("A_alpha ({}x{}):\n", system.matrix.rows(), system.matrix.cols());
    for (Eigen::Index r = 0; r < system.matrix.rows(); ++r) {
        fmt::print(" ");
        for (Eigen::Index c = 0; c < system.matrix.cols(); ++c) fmt::print(" {:>14.9g}", system.matrix(r, c));
        fmt::print("\n");
    }
    fmt::print("condition number: {:.9g}\n", system.condition_number);
    const Interpolator interp = make_interpolator(roots);
    fmt::print("lambda:");
    for (double l : interp.lambda().half()) fmt::print(" {:.12g}", l);
    fmt::print("\n");
    try {
        const RieszBounds r = estimate_riesz_bounds(interp);
        fmt::print("riesz bounds: [{:.9g}, {:.9g}]\n", r.lower, r.upper);
    } catch (const Error& e) {
        fmt::print("riesz bounds: {} ({})\n", to_string(e.code()), e.what());
    }
    return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& snapshot) {
    ServiceOptions options;
    if (!snapshot.empty()) options.snapshot = snapshot;
    ShapeService service(options);
    HttpFrontend http(service);
    const int bound = http.bind(host, port);
    fmt::print("listening on http://{}:{}\n", host, bound);
    std::fflush(stdout);
    http.run();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential-spline interpolators: shape reproduction, refinement and export"};
    app.require_subcommand(1);

    std::string preset;
    std::vector<std::string> raw_params;
    auto add_shape = [&](CLI::App* cmd) {
        cmd->add_option("preset", preset, "Preset shape")->required()->check(CLI::IsMember(preset_names()));
        cmd->add_option("-p,--param", raw_params, "Shape parameter as name=value (repeatable)");
    };

    int count = 200;
    std::uint64_t seed = 1;
    auto* reproduce = app.add_subcommand("reproduce", "Compare a preset model with its analytic parameterization");
    add_shape(reproduce);
    reproduce->add_option("-n,--count", count, "Random parameters to test")->check(CLI::PositiveNumber);
    reproduce->add_option("--seed", seed, "RNG seed");

    int depth = 3;
    int m0 = 2;
    int m = 3;
    bool show_nets = false;
    auto* demo = app.add_subcommand("refine-demo", "Pre-filter then refine a preset, reporting net errors per level");
    add_shape(demo);
    demo->add_option("--depth", depth, "Refinement steps after the pre-filter")->check(CLI::NonNegativeNumber);
    demo->add_option("--m0", m0, "Pre-filter factor (even)");
    demo->add_option("--m", m, "Refinement factor");
    demo->add_flag("--nets", show_nets, "Print the control points of every level");

    std::string obj;
    std::string json;
    int samples = 16;
    std::vector<int> refine;
    auto* exporter = app.add_subcommand("export", "Write a preset as an OBJ mesh and/or a JSON shape document");
    add_shape(exporter);
    exporter->add_option("--obj", obj, "OBJ output path ('-' for stdout)");
    exporter->add_option("--json", json, "JSON output path ('-' for stdout)");
    exporter->add_option("-s,--samples", samples, "Mesh samples per control span")->check(CLI::Range(1, 1024));
    exporter->add_option("--refine", refine, "Refinement factors to apply first (repeatable)");

    std::string roots;
    auto* lambda = app.add_subcommand("lambda", "Build an interpolator and print its system, condition number and lambda");
    lambda->add_option("roots", roots, "Roots, e.g. \"0,2pi/3i,-2pi/3i\" or \"0:0,1:0\"")->required();

    std::string host = "127.0.0.1";
    int port = default_port();
    std::string snapshot;
    auto* serve = app.add_subcommand("serve", "Run the session service over HTTP");
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--port", port, "Listen port (default from EXPINTERP_PORT)")->check(CLI::Range(0, 65535));
    serve->add_option("--snapshot", snapshot, "Session snapshot file, loaded at start and saved on change");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*reproduce) return cmd_reproduce(preset, parse_params(raw_params), count, seed);
        if (*demo) return cmd_refine_demo(preset, parse_params(raw_params), depth, m0, m, show_nets);
        if (*exporter) return cmd_export(preset, parse_params(raw_params), obj, json, samples, refine);
        if (*lambda) return cmd_lambda(roots);
        if (*serve) return cmd_serve(host, port, snapshot);
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}: {}\n", to_string(e.code()), e.what());
        return 2;
    }
    return 1;
}
