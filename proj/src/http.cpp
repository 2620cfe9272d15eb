// Eigen first: httplib pulls in <resolv.h>, whose _res macro breaks Eigen's headers.
#include "expinterp/service.hpp"

#include <httplib.h>

#include "expinterp/error.hpp"

namespace expinterp {

struct HttpFrontend::Impl {
    ShapeService& service;
    httplib::Server server;

    explicit Impl(ShapeService& s) : service(s) {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            ServiceRequest r;
            r.method = req.method;
            r.path = req.path;
            r.body = req.body;
            for (const auto& [k, v] : req.params) r.query[k] = v;
            const ServiceResponse out = service.handle(r);
            res.status = out.status;
            res.set_content(out.body, out.content_type);
        };
        server.Get(".*", forward);
        server.Post(".*", forward);
        server.Patch(".*", forward);
        server.Put(".*", forward);
        server.Delete(".*", forward);
        // The editor runs from its own origin.
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }
};

HttpFrontend::HttpFrontend(ShapeService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::InvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace expinterp
