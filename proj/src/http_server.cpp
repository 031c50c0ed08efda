#include <httplib.h>

#include <thread>

#include "oai/provider.hpp"

namespace oai::provider {

struct HttpFrontend::Impl {
  Provider& provider;
  Clock& clock;
  httplib::Server server;
  std::thread worker;

  Impl(Provider& p, Clock& c) : provider(p), clock(c) {
    const auto serve = [this](const httplib::Request& req, httplib::Response& res, HttpMethod method) {
      std::string raw;
      if (method == HttpMethod::Get) {
        const auto q = req.target.find('?');
        if (q != std::string::npos) raw = req.target.substr(q + 1);
      } else {
        raw = req.body;
      }
      const HttpResponse out = provider.handle(req.remote_addr, method, raw, clock.now());
      res.status = out.status;
      for (const auto& [key, value] : out.headers) res.set_header(key, value);
      res.set_content(out.body, out.content_type);
    };
    server.Get(".*", [serve](const httplib::Request& q, httplib::Response& r) { serve(q, r, HttpMethod::Get); });
    server.Post(".*", [serve](const httplib::Request& q, httplib::Response& r) { serve(q, r, HttpMethod::Post); });
  }
};

HttpFrontend::HttpFrontend(Provider& provider, Clock& clock)
    : impl_(std::make_unique<Impl>(provider, clock)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::start() {
  impl_->worker = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
}

void HttpFrontend::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace oai::provider
