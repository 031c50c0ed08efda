#pragma once

// Harvesting-side transport: one protocol request per get(), with 503
// Retry-After waits and 302 redirects handled inside the call.

#include <chrono>
#include <ostream>
#include <string>

#include "oai/clock.hpp"
#include "oai/error.hpp"
#include "oai/http.hpp"
#include "oai/model.hpp"

namespace oai::client {

struct OutboundRequest {
  HttpMethod method = HttpMethod::Post;
  /// Absolute URL; for GET it carries the query string.
  std::string url;
  /// urlencoded form body for POST, empty for GET.
  std::string body;
  HttpHeaders headers;
};

/// Issues one HTTP exchange without following redirects. Throws
/// TransportError(ConnectionFailed) when no response is obtained.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse send(const OutboundRequest& request) = 0;
};

/// cpp-httplib transport, http:// only.
class HttplibTransport final : public Transport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds{300}) : timeout_(timeout) {}
  HttpResponse send(const OutboundRequest& request) override;

 private:
  std::chrono::seconds timeout_;
};

struct ClientConfig {
  std::string contact_email;
  std::string user_agent = "oai-harvest/1.0";
  HttpMethod method = HttpMethod::Post;
  std::chrono::seconds default_retry{60};
  int max_retries = 5;
  int max_redirects = 5;
  bool verbose = false;

  /// Throws InvalidValue: empty contact, non-positive limits or retry.
  void validate() const;
};

struct FetchResult {
  std::string body;
  /// Base URL that finally answered 200.
  std::string url;
};

/// Strips any query or fragment from url.
std::string base_of(std::string_view url);

class OaiClient {
 public:
  /// log receives progress lines when cfg.verbose, and 503/302 notices always.
  OaiClient(ClientConfig cfg, Transport& transport, Clock& clock, std::ostream& log);

  /// Issues req against base_url. Throws TransportError.
  FetchResult get(const std::string& base_url, const OaiRequest& req);

  const ClientConfig& config() const noexcept { return cfg_; }

 private:
  ClientConfig cfg_;
  Transport& transport_;
  Clock& clock_;
  std::ostream& log_;
};

}  // namespace oai::client
