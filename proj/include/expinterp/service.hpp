#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "expinterp/shape_io.hpp"
#include "expinterp/shapes.hpp"

namespace expinterp {

inline constexpr std::size_t kUndoDepth = 50;
inline constexpr int kDefaultPort = 8750;

/// Transport-neutral request; the HTTP adapter fills it from httplib.
struct ServiceRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct ServiceResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// One editing session. Mutations are serialized; readers take the latest
/// committed model without waiting for a mutation in progress.
class Session {
public:
    Session(std::string id, ShapeModel model);

    const std::string& id() const { return id_; }
    std::shared_ptr<const ShapeModel> model() const;
    std::size_t undo_depth() const;

    /// Applies `edit` to the current model and commits the result, pushing
    /// the previous model on the undo stack. Returns the committed model.
    template <class Edit>
    std::shared_ptr<const ShapeModel> mutate(Edit&& edit) {
        std::lock_guard writer(write_mutex_);
        auto current = model();
        auto next = std::make_shared<const ShapeModel>(edit(*current));
        commit(std::move(current), next);
        return next;
    }

    /// Restores the previous model; nullptr when there is nothing to undo.
    std::shared_ptr<const ShapeModel> undo();

    Json snapshot() const;
    static std::shared_ptr<Session> restore(const Json& j);

private:
    void commit(std::shared_ptr<const ShapeModel> previous, std::shared_ptr<const ShapeModel> next);

    std::string id_;
    std::mutex write_mutex_;
    mutable std::shared_mutex state_mutex_;
    std::shared_ptr<const ShapeModel> model_;
    std::deque<std::shared_ptr<const ShapeModel>> undo_;
};

class SessionStore {
public:
    explicit SessionStore(std::optional<std::uint64_t> seed = std::nullopt);

    std::shared_ptr<Session> create(ShapeModel model);
    /// NotFound for unknown ids.
    std::shared_ptr<Session> get(const std::string& id) const;
    std::size_t size() const;

    void save(const std::filesystem::path& file) const;
    void load(const std::filesystem::path& file);

private:
    std::string fresh_id();

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_;
};

struct ServiceOptions {
    std::optional<std::uint64_t> id_seed;          // deterministic session ids (tests)
    std::optional<std::filesystem::path> snapshot;  // saved after every mutation
    int riesz_grid = 1024;
    int max_samples = 256;
};

/// Session API over JSON bodies:
///   POST  /sessions                      create from a preset or raw roots + net
///   GET   /sessions/{id}                 model document
///   PATCH /sessions/{id}/points/{index}  move one control point (flat u-major index)
///   POST  /sessions/{id}/refine          {"factor": m}
///   GET   /sessions/{id}/mesh?samples=s  tessellation (format=obj for OBJ text)
///   POST  /sessions/{id}/undo
///   GET   /presets
/// Errors come back as {"error": {"code", "message"}}.
class ShapeService {
public:
    explicit ShapeService(ServiceOptions options = {});

    ServiceResponse handle(const ServiceRequest& request);

    SessionStore& store() { return store_; }

private:
    ServiceResponse dispatch(const ServiceRequest& request);
    ServiceResponse create_session(const ServiceRequest& request);
    ServiceResponse get_session(Session& session);
    ServiceResponse update_point(Session& session, const std::string& index, const ServiceRequest& request);
    ServiceResponse refine(Session& session, const ServiceRequest& request);
    ServiceResponse mesh(Session& session, const ServiceRequest& request);
    ServiceResponse undo(Session& session);
    void persist();

    ServiceOptions options_;
    SessionStore store_;
    std::mutex persist_mutex_;
};

/// EXPINTERP_PORT, or kDefaultPort when unset or invalid.
int default_port();

/// HTTP front end for a ShapeService.
class HttpFrontend {
public:
    explicit HttpFrontend(ShapeService& service);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds without serving yet; port 0 picks a free port. Returns the port.
    int bind(const std::string& host, int port);
    /// Serves on the bound socket until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace expinterp
