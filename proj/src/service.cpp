#include "expinterp/service.hpp"

#include <charconv>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>

#include "expinterp/error.hpp"
#include "expinterp/interpolator.hpp"

namespace expinterp {

namespace {

constexpr int kDefaultSamples = 8;

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound:
        case ErrorCode::IndexOutOfRange: return 404;
        case ErrorCode::InvalidArgument:
        case ErrorCode::UnknownShape:
        case ErrorCode::OddFactor: return 400;
        default: return 422;
    }
}

ServiceResponse json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

ServiceResponse error_response(int status, std::string_view code, std::string_view message) {
    return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < path.size()) {
        const std::size_t next = path.find('/', pos);
        const std::size_t end = next == std::string::npos ? path.size() : next;
        if (end > pos) parts.push_back(path.substr(pos, end - pos));
        pos = end + 1;
    }
    return parts;
}

std::int64_t parse_integer(const std::string& text, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an integer");
    }
    return v;
}

Json parse_body(const std::string& body) {
    if (body.empty()) return Json::object();
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
}

std::vector<Point> points_from(const Json& j, int& point_dim) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidArgument, "points must be a non-empty array");
    std::vector<Point> out;
    point_dim = 0;
    for (const Json& p : j) {
        if (!p.is_array() || p.size() < 2 || p.size() > 3) {
            throw Error(ErrorCode::InvalidArgument, "each point needs 2 or 3 coordinates");
        }
        const int d = static_cast<int>(p.size());
        if (point_dim == 0) point_dim = d;
        if (d != point_dim) throw Error(ErrorCode::InvalidArgument, "points must all have the same dimension");
        Point q{0.0, 0.0, 0.0};
        for (int c = 0; c < d; ++c) {
            if (!p[static_cast<std::size_t>(c)].is_number()) {
                throw Error(ErrorCode::InvalidArgument, "point coordinates must be numbers");
            }
            q[static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)].get<double>();
        }
        out.push_back(q);
    }
    return out;
}

AxisSpec axis_from(const Json& j) {
    AxisSpec spec;
    spec.roots = roots_from_json(j.at("roots"));
    spec.periodic = j.value("periodic", false);
    spec.density = j.value("density", 0);
    spec.first = j.value("first", std::int64_t{0});
    if (j.contains("domain")) {
        const auto d = j.at("domain").get<std::vector<double>>();
        if (d.size() != 2) throw Error(ErrorCode::InvalidArgument, "domain must be [lo, hi]");
        spec.domain_lo = d[0];
        spec.domain_hi = d[1];
    }
    return spec;
}

ShapeModel model_from_request(const Json& body) {
    if (body.contains("preset")) {
        ShapeParams params;
        for (const auto& [key, value] : body.items()) {
            if (key == "preset") continue;
            if (!value.is_number()) throw Error(ErrorCode::InvalidArgument, "preset parameter " + key + " must be a number");
            params[key] = value.get<double>();
        }
        return preset_shape(body.at("preset").get<std::string>(), params);
    }
    if (!body.contains("points")) throw Error(ErrorCode::InvalidArgument, "give a preset or roots and points");
    std::vector<AxisSpec> axes;
    if (body.contains("axes")) {
        for (const Json& a : body.at("axes")) axes.push_back(axis_from(a));
    } else if (body.contains("roots")) {
        axes.push_back(axis_from(body));
    } else {
        throw Error(ErrorCode::InvalidArgument, "raw shapes need roots or axes");
    }
    ControlNet net;
    net.points = points_from(body.at("points"), net.point_dim);
    const auto total = static_cast<std::int64_t>(net.points.size());
    net.size_v = axes.size() == 2 ? body.value("size_v", std::int64_t{0}) : 1;
    if (net.size_v < 1 || total % net.size_v != 0) {
        throw Error(ErrorCode::InvalidArgument, "size_v must divide the number of points");
    }
    net.size_u = total / net.size_v;
    return make_model(body.value("name", std::string("custom")), std::move(axes), std::move(net));
}

Json diagnostics(const ShapeModel& model, int riesz_grid) {
    Json out = Json::array();
    for (std::size_t a = 0; a < model.axes.size(); ++a) {
        const Interpolator& interp = model.axes[a].interpolator();
        const RieszBounds r = estimate_riesz_bounds(interp, riesz_grid);
        const auto half = interp.lambda().half();
        out.push_back({{"axis", a},
                       {"order", interp.order()},
                       {"support_halfwidth", interp.support_halfwidth()},
                       {"lambda", std::vector<double>(half.begin(), half.end())},
                       {"condition_number", interp.condition_number()},
                       {"riesz", {{"lower", r.lower}, {"upper", r.upper}, {"grid_size", r.grid_size}}}});
    }
    return out;
}

Json records_json(const std::vector<ResolutionRecord>& records, std::size_t from) {
    Json out = Json::array();
    for (std::size_t i = from; i < records.size(); ++i) {
        const auto& r = records[i];
        out.push_back({{"axis", r.axis}, {"kind", r.kind}, {"factor", r.factor}, {"scale_after", r.scale_after}});
    }
    return out;
}

}  // namespace

Session::Session(std::string id, ShapeModel model)
    : id_(std::move(id)), model_(std::make_shared<const ShapeModel>(std::move(model))) {}

std::shared_ptr<const ShapeModel> Session::model() const {
    std::shared_lock lock(state_mutex_);
    return model_;
}

std::size_t Session::undo_depth() const {
    std::shared_lock lock(state_mutex_);
    return undo_.size();
}

void Session::commit(std::shared_ptr<const ShapeModel> previous, std::shared_ptr<const ShapeModel> next) {
    std::unique_lock lock(state_mutex_);
    undo_.push_back(std::move(previous));
    if (undo_.size() > kUndoDepth) undo_.pop_front();
    model_ = std::move(next);
}

std::shared_ptr<const ShapeModel> Session::undo() {
    std::lock_guard writer(write_mutex_);
    std::unique_lock lock(state_mutex_);
    if (undo_.empty()) return nullptr;
    model_ = std::move(undo_.back());
    undo_.pop_back();
    return model_;
}

Json Session::snapshot() const {
    std::shared_lock lock(state_mutex_);
    Json undo = Json::array();
    for (const auto& m : undo_) undo.push_back(model_to_json(*m));
    return {{"id", id_}, {"model", model_to_json(*model_)}, {"undo", std::move(undo)}};
}

std::shared_ptr<Session> Session::restore(const Json& j) {
    auto s = std::make_shared<Session>(j.at("id").get<std::string>(), model_from_json(j.at("model")));
    for (const Json& m : j.at("undo")) s->undo_.push_back(std::make_shared<const ShapeModel>(model_from_json(m)));
    while (s->undo_.size() > kUndoDepth) s->undo_.pop_front();
    return s;
}

SessionStore::SessionStore(std::optional<std::uint64_t> seed) : rng_(seed ? *seed : std::random_device{}()) {}

std::string SessionStore::fresh_id() {
    return fmt::format("{:016x}{:016x}", rng_(), rng_());
}

std::shared_ptr<Session> SessionStore::create(ShapeModel model) {
    std::unique_lock lock(mutex_);
    std::string id;
    do {
        id = fresh_id();
    } while (sessions_.contains(id));
    auto session = std::make_shared<Session>(id, std::move(model));
    sessions_.emplace(id, session);
    return session;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session " + id);
    return it->second;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

void SessionStore::save(const std::filesystem::path& file) const {
    Json doc{{"sessions", Json::array()}};
    {
        std::shared_lock lock(mutex_);
        for (const auto& [id, s] : sessions_) doc["sessions"].push_back(s->snapshot());
    }
    const auto tmp = std::filesystem::path(file).concat(".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write snapshot " + tmp.string());
        out << doc.dump();
    }
    std::filesystem::rename(tmp, file);
}

void SessionStore::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read snapshot " + file.string());
    const Json doc = Json::parse(in);
    std::unique_lock lock(mutex_);
    for (const Json& s : doc.at("sessions")) {
        auto session = Session::restore(s);
        sessions_[session->id()] = std::move(session);
    }
}

ShapeService::ShapeService(ServiceOptions options) : options_(std::move(options)), store_(options_.id_seed) {
    if (options_.snapshot && std::filesystem::exists(*options_.snapshot)) store_.load(*options_.snapshot);
}

ServiceResponse ShapeService::handle(const ServiceRequest& request) {
    try {
        return dispatch(request);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_response(400, to_string(ErrorCode::InvalidArgument), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

ServiceResponse ShapeService::dispatch(const ServiceRequest& request) {
    const auto parts = split_path(request.path);
    const std::string& method = request.method;
    auto not_allowed = [&] { return error_response(405, "MethodNotAllowed", method + " not allowed on " + request.path); };

    if (parts.size() == 1 && parts[0] == "presets") {
        if (method != "GET") return not_allowed();
        return json_response(200, {{"presets", preset_names()}});
    }
    if (parts.empty() || parts[0] != "sessions") throw Error(ErrorCode::NotFound, "no route " + request.path);
    if (parts.size() == 1) {
        if (method != "POST") return not_allowed();
        return create_session(request);
    }
    auto session = store_.get(parts[1]);
    if (parts.size() == 2) {
        if (method != "GET") return not_allowed();
        return get_session(*session);
    }
    if (parts.size() == 4 && parts[2] == "points") {
        if (method != "PATCH") return not_allowed();
        return update_point(*session, parts[3], request);
    }
    if (parts.size() == 3 && parts[2] == "refine") {
        if (method != "POST") return not_allowed();
        return refine(*session, request);
    }
    if (parts.size() == 3 && parts[2] == "mesh") {
        if (method != "GET") return not_allowed();
        return mesh(*session, request);
    }
    if (parts.size() == 3 && parts[2] == "undo") {
        if (method != "POST") return not_allowed();
        return undo(*session);
    }
    throw Error(ErrorCode::NotFound, "no route " + request.path);
}

ServiceResponse ShapeService::create_session(const ServiceRequest& request) {
    ShapeModel model = model_from_request(parse_body(request.body));
    Json diag = diagnostics(model, options_.riesz_grid);
    auto session = store_.create(std::move(model));
    persist();
    return json_response(201, {{"id", session->id()},
                               {"model", model_to_json(*session->model())},
                               {"diagnostics", std::move(diag)},
                               {"undo_depth", 0}});
}

ServiceResponse ShapeService::get_session(Session& session) {
    return json_response(200, {{"id", session.id()},
                               {"model", model_to_json(*session.model())},
                               {"undo_depth", session.undo_depth()}});
}

ServiceResponse ShapeService::update_point(Session& session, const std::string& index, const ServiceRequest& request) {
    const Json body = parse_body(request.body);
    const std::int64_t flat = parse_integer(index, "point index");
    if (!body.contains("position")) throw Error(ErrorCode::InvalidArgument, "body needs a position");
    int dim = 0;
    const std::vector<Point> position = points_from(Json::array({body.at("position")}), dim);

    std::int64_t i = 0;
    std::int64_t j = 0;
    DirtyWindow window;
    auto next = session.mutate([&](const ShapeModel& current) {
        if (dim != current.net.point_dim) {
            throw Error(ErrorCode::InvalidArgument, fmt::format("position needs {} coordinates", current.net.point_dim));
        }
        if (flat < 0 || flat >= current.net.size_u * current.net.size_v) {
            throw Error(ErrorCode::IndexOutOfRange, fmt::format("point index {} out of range", flat));
        }
        i = flat / current.net.size_v;
        j = flat % current.net.size_v;
        window = dirty_window(current, i, j);
        return move_control_point(current, i, j, position.front());
    });
    persist();

    Json dirty{{"u", {window.lo[0], window.hi[0]}}};
    if (next->net.dims == 2) dirty["v"] = {window.lo[1], window.hi[1]};
    const Json doc = model_to_json(*next);
    return json_response(200, {{"id", session.id()},
                               {"index", flat},
                               {"i", i},
                               {"j", j},
                               {"position", doc["net"]["points"][static_cast<std::size_t>(flat)]},
                               {"dirty", std::move(dirty)},
                               {"net", doc["net"]},
                               {"undo_depth", session.undo_depth()}});
}

ServiceResponse ShapeService::refine(Session& session, const ServiceRequest& request) {
    const Json body = parse_body(request.body);
    if (body.contains("factor") && !body.at("factor").is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, "factor must be an integer");
    }
    const int factor = body.value("factor", 2);
    std::size_t before = 0;
    auto next = session.mutate([&](const ShapeModel& current) {
        before = current.history.size();
        return refine_model(current, factor);
    });
    persist();
    return json_response(200, {{"id", session.id()},
                               {"records", records_json(next->history, before)},
                               {"model", model_to_json(*next)},
                               {"undo_depth", session.undo_depth()}});
}

ServiceResponse ShapeService::mesh(Session& session, const ServiceRequest& request) {
    std::int64_t samples = kDefaultSamples;
    if (const auto it = request.query.find("samples"); it != request.query.end()) {
        samples = parse_integer(it->second, "samples");
    }
    if (samples < 1 || samples > options_.max_samples) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("samples must be in [1, {}]", options_.max_samples));
    }
    std::string format = "json";
    if (const auto it = request.query.find("format"); it != request.query.end()) format = it->second;
    const auto model = session.model();
    const Mesh m = tessellate(*model, static_cast<int>(samples));
    if (format == "obj") return {200, mesh_to_obj(m, model->net.point_dim, model->name), "text/plain"};
    if (format != "json") throw Error(ErrorCode::InvalidArgument, "format must be json or obj");
    Json out = mesh_to_json(m, model->net.point_dim);
    out["samples"] = samples;
    return json_response(200, out);
}

ServiceResponse ShapeService::undo(Session& session) {
    auto previous = session.undo();
    if (!previous) throw Error(ErrorCode::InvalidArgument, "nothing to undo");
    persist();
    return json_response(200, {{"id", session.id()},
                               {"model", model_to_json(*previous)},
                               {"undo_depth", session.undo_depth()}});
}

void ShapeService::persist() {
    if (!options_.snapshot) return;
    std::lock_guard lock(persist_mutex_);
    store_.save(*options_.snapshot);
}

int default_port() {
    const char* env = std::getenv("EXPINTERP_PORT");
    if (env == nullptr) return kDefaultPort;
    int port = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
    if (ec != std::errc() || ptr != s.data() + s.size() || port < 1 || port > 65535) return kDefaultPort;
    return port;
}

}  // namespace expinterp
