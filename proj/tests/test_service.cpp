// Eigen (via service.hpp) must come before httplib; see src/http.cpp.
#include "expinterp/service.hpp"

#include <httplib.h>

#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "expinterp/error.hpp"

using namespace expinterp;

namespace {

ServiceResponse call(ShapeService& s, std::string method, std::string path, std::string body = {},
                     std::map<std::string, std::string> query = {}) {
    return s.handle({std::move(method), std::move(path), std::move(query), std::move(body)});
}

Json body_of(const ServiceResponse& r) { return Json::parse(r.body); }

std::string error_code(const ServiceResponse& r) { return body_of(r)["error"]["code"].get<std::string>(); }

std::string create(ShapeService& s, const std::string& body) {
    const auto r = call(s, "POST", "/sessions", body);
    REQUIRE(r.status == 201);
    return body_of(r)["id"].get<std::string>();
}

ServiceOptions seeded() {
    ServiceOptions o;
    o.id_seed = 42;
    return o;
}

}  // namespace

TEST_CASE("presets are listed") {
    ShapeService s(seeded());
    const auto r = call(s, "GET", "/presets");
    CHECK(r.status == 200);
    const Json names = body_of(r)["presets"];
    CHECK(names.size() == preset_names().size());
    CHECK(call(s, "POST", "/presets").status == 405);
}

TEST_CASE("circle session from raw roots and points") {
    ShapeService s(seeded());
    const auto r = call(s, "POST", "/sessions",
                        R"({"roots": [0, [0, 2.0943951023931953], [0, -2.0943951023931953]],
                            "points": [[1, 0], [-0.5, 0.8660254037844386], [-0.5, -0.8660254037844386]],
                            "periodic": true, "name": "ring"})");
    REQUIRE(r.status == 201);
    const Json j = body_of(r);
    CHECK(j["id"].get<std::string>().size() == 32);
    CHECK(j["model"]["name"] == "ring");
    CHECK(j["model"]["net"]["points"].size() == 3);
    CHECK(j["undo_depth"] == 0);
    const Json& d = j["diagnostics"][0];
    CHECK(d["order"] == 3);
    CHECK(d["support_halfwidth"] == 2);
    CHECK(d["riesz"]["lower"].get<double>() > 0.0);
    CHECK(d["riesz"]["grid_size"] == 1024);

    // Every mesh vertex sits on the unit circle.
    const auto m = call(s, "GET", "/sessions/" + j["id"].get<std::string>() + "/mesh", {}, {{"samples", "32"}});
    REQUIRE(m.status == 200);
    const Json mesh = body_of(m);
    CHECK(mesh["vertices"].size() == 96);
    for (const Json& v : mesh["vertices"])
        CHECK(std::abs(std::hypot(v[0].get<double>(), v[1].get<double>()) - 1.0) < 1e-9);
}

TEST_CASE("Roman preset reports its lambda") {
    ShapeService s(seeded());
    const auto r = call(s, "POST", "/sessions", R"({"preset": "roman", "M1": 5, "M2": 5, "r": 3})");
    REQUIRE(r.status == 201);
    const Json d = body_of(r)["diagnostics"];
    REQUIRE(d.size() == 2);
    CHECK(std::abs(d[0]["lambda"][0].get<double>() - 18.118) < 5e-4);
    CHECK(std::abs(d[0]["lambda"][1].get<double>() + 10.128) < 5e-4);
    CHECK(std::abs(d[0]["lambda"][2].get<double>() - 1.730) < 5e-4);
    CHECK(std::abs(d[1]["lambda"][0].get<double>() - 7.396) < 5e-4);
    CHECK(std::abs(d[1]["lambda"][1].get<double>() + 2.825) < 5e-4);
}

TEST_CASE("creation errors") {
    ShapeService s(seeded());
    auto r = call(s, "POST", "/sessions", R"({"roots": [0, 0], "points": [[0,0],[1,1],[2,0]], "periodic": true})");
    CHECK(r.status == 422);
    CHECK(error_code(r) == "OrderTooLow");
    r = call(s, "POST", "/sessions", R"({"roots": [1, 2, 3], "points": [[0,0],[1,1],[2,0]], "periodic": true})");
    CHECK(error_code(r) == "NotSymmetric");
    r = call(s, "POST", "/sessions", R"({"preset": "klein"})");
    CHECK(r.status == 400);
    CHECK(error_code(r) == "UnknownShape");
    r = call(s, "POST", "/sessions", R"({"preset": "circle", "radius": "big"})");
    CHECK(error_code(r) == "InvalidArgument");
    r = call(s, "POST", "/sessions", "{not json");
    CHECK(r.status == 400);
    CHECK(error_code(r) == "InvalidArgument");
    r = call(s, "POST", "/sessions", "[1, 2]");
    CHECK(r.status == 400);
    r = call(s, "POST", "/sessions", R"({"roots": [0, 0, 0]})");
    CHECK(r.status == 400);
    CHECK(s.store().size() == 0);
}

TEST_CASE("moving a point") {
    ShapeService s(seeded());
    const std::string id = create(s, R"({"preset": "torus"})");
    auto r = call(s, "PATCH", "/sessions/" + id + "/points/7", R"({"position": [0.5, 0.25, 3.0]})");
    REQUIRE(r.status == 200);
    Json j = body_of(r);
    CHECK(j["i"] == 1);
    CHECK(j["j"] == 2);
    CHECK(j["position"] == Json::parse("[0.5, 0.25, 3.0]"));
    CHECK(j["undo_depth"] == 1);
    // Window spans 2 * support_halfwidth control spans around the point.
    const double width = j["dirty"]["u"][1].get<double>() - j["dirty"]["u"][0].get<double>();
    CHECK(width == doctest::Approx(2.0 * 2.0 / 5.0));
    CHECK(j["dirty"].contains("v"));

    // With one sample per span the mesh is the net, so the moved vertex shows up.
    const auto m = body_of(call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"samples", "1"}}));
    const double expect[] = {0.5, 0.25, 3.0};
    for (int c = 0; c < 3; ++c) CHECK(std::abs(m["vertices"][7][c].get<double>() - expect[c]) < 1e-12);

    r = call(s, "PATCH", "/sessions/" + id + "/points/25", R"({"position": [0, 0, 0]})");
    CHECK(r.status == 404);
    CHECK(error_code(r) == "IndexOutOfRange");
    r = call(s, "PATCH", "/sessions/" + id + "/points/-1", R"({"position": [0, 0, 0]})");
    CHECK(r.status == 404);
    r = call(s, "PATCH", "/sessions/" + id + "/points/x", R"({"position": [0, 0, 0]})");
    CHECK(r.status == 400);
    r = call(s, "PATCH", "/sessions/" + id + "/points/3", R"({"position": [0, 0]})");
    CHECK(r.status == 400);
    r = call(s, "PATCH", "/sessions/" + id + "/points/3", R"({})");
    CHECK(r.status == 400);
    // Failed edits leave no undo entry.
    CHECK(body_of(call(s, "GET", "/sessions/" + id))["undo_depth"] == 1);
}

TEST_CASE("refinement through the service") {
    ShapeService s(seeded());
    const std::string id = create(s, R"({"preset": "circle"})");
    auto r = call(s, "POST", "/sessions/" + id + "/refine", R"({"factor": 3})");
    CHECK(r.status == 400);
    CHECK(error_code(r) == "OddFactor");
    r = call(s, "POST", "/sessions/" + id + "/refine", R"({"factor": 2})");
    REQUIRE(r.status == 200);
    Json j = body_of(r);
    REQUIRE(j["records"].size() == 1);
    CHECK(j["records"][0]["kind"] == "prefilter");
    CHECK(j["records"][0]["scale_after"] == 2);
    CHECK(j["model"]["axes"][0]["basis"] == "bspline");
    r = call(s, "POST", "/sessions/" + id + "/refine", R"({"factor": 3})");
    REQUIRE(r.status == 200);
    j = body_of(r);
    CHECK(j["records"][0]["kind"] == "refine");
    CHECK(j["records"][0]["scale_after"] == 6);
    CHECK(j["model"]["net"]["points"].size() == 18);
    CHECK(j["undo_depth"] == 2);
    CHECK(call(s, "POST", "/sessions/" + id + "/refine", R"({"factor": "2"})").status == 400);
    // Default factor is 2.
    CHECK(call(s, "POST", "/sessions/" + id + "/refine").status == 200);
}

TEST_CASE("undo restores earlier models up to the stack depth") {
    ShapeService s(seeded());
    const std::string id = create(s, R"({"preset": "circle"})");
    const std::string original = body_of(call(s, "GET", "/sessions/" + id))["model"].dump();
    auto r = call(s, "POST", "/sessions/" + id + "/undo");
    CHECK(r.status == 400);
    for (int n = 0; n < 60; ++n) {
        const std::string body = "{\"position\": [" + std::to_string(n) + ", 0]}";
        REQUIRE(call(s, "PATCH", "/sessions/" + id + "/points/0", body).status == 200);
    }
    CHECK(body_of(call(s, "GET", "/sessions/" + id))["undo_depth"] == kUndoDepth);
    for (std::size_t n = 0; n < kUndoDepth; ++n) REQUIRE(call(s, "POST", "/sessions/" + id + "/undo").status == 200);
    const Json after = body_of(call(s, "GET", "/sessions/" + id));
    CHECK(after["undo_depth"] == 0);
    // The oldest ten edits fell off the stack: point 0 holds edit number 9.
    CHECK(after["model"]["net"]["points"][0] == Json::parse("[9.0, 0.0]"));
    CHECK(call(s, "POST", "/sessions/" + id + "/undo").status == 400);

    // A short edit/undo cycle returns the identical document.
    const std::string id2 = create(s, R"({"preset": "circle"})");
    call(s, "POST", "/sessions/" + id2 + "/refine", R"({"factor": 2})");
    const auto u = call(s, "POST", "/sessions/" + id2 + "/undo");
    CHECK(u.status == 200);
    CHECK(body_of(u)["model"].dump() == original);
}

TEST_CASE("identical requests give byte-identical responses") {
    ShapeService a(seeded());
    ShapeService b(seeded());
    for (ShapeService* s : {&a, &b}) {
        create(*s, R"({"preset": "figure8"})");
    }
    const auto ra = call(a, "POST", "/sessions", R"({"preset": "helicoid"})");
    const auto rb = call(b, "POST", "/sessions", R"({"preset": "helicoid"})");
    CHECK(ra.body == rb.body);
    const std::string id = body_of(ra)["id"].get<std::string>();
    CHECK(call(a, "GET", "/sessions/" + id + "/mesh").body == call(b, "GET", "/sessions/" + id + "/mesh").body);
    CHECK(call(a, "POST", "/sessions/" + id + "/refine").body == call(b, "POST", "/sessions/" + id + "/refine").body);
}

TEST_CASE("routing and lookup errors") {
    ShapeService s(seeded());
    const std::string id = create(s, R"({"preset": "circle"})");
    auto r = call(s, "GET", "/sessions/0123456789abcdef0123456789abcdef");
    CHECK(r.status == 404);
    CHECK(error_code(r) == "NotFound");
    CHECK(call(s, "GET", "/nowhere").status == 404);
    CHECK(call(s, "GET", "/sessions/" + id + "/bogus").status == 404);
    CHECK(call(s, "DELETE", "/sessions/" + id).status == 405);
    CHECK(call(s, "GET", "/sessions/" + id + "/undo").status == 405);
    CHECK(call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"samples", "0"}}).status == 400);
    CHECK(call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"samples", "100000"}}).status == 400);
    CHECK(call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"format", "stl"}}).status == 400);
    const auto obj = call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"format", "obj"}, {"samples", "4"}});
    CHECK(obj.status == 200);
    CHECK(obj.content_type == "text/plain");
    CHECK(obj.body.rfind("# expinterp mesh", 0) == 0);
}

TEST_CASE("snapshots persist sessions and their undo stacks") {
    const auto file = std::filesystem::temp_directory_path() / "expinterp_service_snapshot.json";
    std::filesystem::remove(file);
    ServiceOptions options = seeded();
    options.snapshot = file;
    std::string id;
    std::string model;
    {
        ShapeService s(options);
        id = create(s, R"({"preset": "roman"})");
        call(s, "PATCH", "/sessions/" + id + "/points/3", R"({"position": [1, 2, 3]})");
        model = body_of(call(s, "GET", "/sessions/" + id))["model"].dump();
        CHECK(std::filesystem::exists(file));
    }
    ShapeService restored(options);
    const Json j = body_of(call(restored, "GET", "/sessions/" + id));
    CHECK(j["model"].dump() == model);
    CHECK(j["undo_depth"] == 1);
    CHECK(call(restored, "POST", "/sessions/" + id + "/undo").status == 200);
    std::filesystem::remove(file);

    SessionStore store;
    CHECK_THROWS_AS(store.load(file), Error);
}

TEST_CASE("concurrent readers and writers") {
    ShapeService s(seeded());
    const std::string id = create(s, R"({"preset": "torus"})");
    std::atomic<int> failures{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int n = 0; n < 20; ++n) {
                const std::string body = "{\"position\": [" + std::to_string(t) + ", " + std::to_string(n) + ", 0]}";
                if (call(s, "PATCH", "/sessions/" + id + "/points/" + std::to_string(t), body).status != 200) ++failures;
                if (call(s, "GET", "/sessions/" + id + "/mesh", {}, {{"samples", "2"}}).status != 200) ++failures;
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(failures == 0);
    const Json j = body_of(call(s, "GET", "/sessions/" + id));
    CHECK(j["undo_depth"] == kUndoDepth);
    for (int t = 0; t < 4; ++t) CHECK(j["model"]["net"]["points"][t][1] == 19.0);
}

TEST_CASE("HTTP front end") {
    ShapeService service(seeded());
    HttpFrontend http(service);
    const int port = http.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread server([&] { http.run(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    auto created = client.Post("/sessions", R"({"preset": "circle"})", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
    const std::string id = Json::parse(created->body)["id"].get<std::string>();

    auto patched = client.Patch("/sessions/" + id + "/points/1", R"({"position": [0, 2]})", "application/json");
    REQUIRE(patched);
    CHECK(patched->status == 200);

    auto mesh = client.Get("/sessions/" + id + "/mesh?samples=1&format=obj");
    REQUIRE(mesh);
    CHECK(mesh->status == 200);
    // Second vertex line of the one-sample mesh is the moved point.
    const std::size_t first_v = mesh->body.find("\nv ");
    const std::size_t second_v = mesh->body.find("\nv ", first_v + 1);
    REQUIRE(second_v != std::string::npos);
    double x = 1.0, y = 0.0, z = 1.0;
    std::sscanf(mesh->body.c_str() + second_v, "\nv %lf %lf %lf", &x, &y, &z);
    CHECK(std::abs(x) < 1e-12);
    CHECK(std::abs(y - 2.0) < 1e-12);
    CHECK(z == 0.0);

    auto missing = client.Get("/sessions/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(Json::parse(missing->body)["error"]["code"] == "NotFound");

    auto preflight = client.Options("/sessions");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    http.stop();
    server.join();
}

TEST_CASE("default port") {
    ::unsetenv("EXPINTERP_PORT");
    CHECK(default_port() == kDefaultPort);
    ::setenv("EXPINTERP_PORT", "9123", 1);
    CHECK(default_port() == 9123);
    ::setenv("EXPINTERP_PORT", "junk", 1);
    CHECK(default_port() == kDefaultPort);
    ::unsetenv("EXPINTERP_PORT");
}
