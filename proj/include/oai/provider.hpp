#pragma once

// Data-provider service: request dispatch against a RecordStore, response
// paging through stateless resumption tokens, per-client throttling (503 +
// Retry-After) and optional round-robin redirection (302).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oai/clock.hpp"
#include "oai/http.hpp"
#include "oai/model.hpp"
#include "oai/store.hpp"
#include "oai/wire.hpp"

namespace oai::provider {

struct ThrottlePolicy {
  /// Minimum spacing between served requests from one client address; 0 disables.
  std::chrono::seconds min_interval{0};
  std::chrono::seconds retry_after{60};

  void validate() const;
};

struct ProviderConfig {
  RepositoryDescription repository;
  std::size_t page_size = 100;
  ThrottlePolicy throttle;
  /// When non-empty every request is answered 302 to these, round-robin.
  std::vector<std::string> redirect_targets;
  /// Fixed UTC offset of the repository's local zone, used for responseDate.
  std::chrono::minutes clock_offset{0};

  void validate() const;
};

/// A parsed provider config file: the ProviderConfig plus the store to serve
/// ("fixture" or a catalog file path).
struct ProviderSettings {
  ProviderConfig config;
  std::string store = "fixture";
};

/// Parses the key=value config format. Throws InvalidValue with the line number.
ProviderSettings parse_provider_config(std::string_view text);
ProviderSettings load_provider_config(const std::filesystem::path& path);

/// Opens settings.store: the built-in fixture or a FileStore.
std::shared_ptr<store::RecordStore> open_store(const ProviderSettings& settings);

/// Position within a list response, carried in the resumption token.
struct PageCursor {
  Verb verb = Verb::ListIdentifiers;
  std::optional<Datestamp> from;
  std::optional<Datestamp> until;
  std::optional<std::string> prefix;
  std::size_t offset = 0;

  /// verb:from:until:prefix:offset with '-' for absent fields; every byte
  /// outside [A-Za-z0-9_.] in the prefix is written as ~XX.
  ResumptionToken encode() const;
  /// Throws BadResumptionToken.
  static PageCursor decode(const ResumptionToken& token);

  bool operator==(const PageCursor&) const = default;
};

template <typename T>
struct Page {
  std::vector<T> items;
  std::optional<ResumptionToken> token;
};

/// Slices full at cursor.offset. Throws BadResumptionToken when the offset
/// is past the end of the result.
template <typename T>
Page<T> paginate(std::vector<T> full, const PageCursor& cursor, std::size_t page_size) {
  if (cursor.offset > full.size()) throw BadResumptionToken("resumption offset beyond result");
  const std::size_t end = std::min(full.size(), cursor.offset + std::max<std::size_t>(page_size, 1));
  Page<T> page;
  page.items.assign(std::make_move_iterator(full.begin() + static_cast<std::ptrdiff_t>(cursor.offset)),
                    std::make_move_iterator(full.begin() + static_cast<std::ptrdiff_t>(end)));
  if (end < full.size()) {
    PageCursor next = cursor;
    next.offset = end;
    page.token = next.encode();
  }
  return page;
}

/// Per-address request spacing. Thread-safe.
class Throttle {
 public:
  explicit Throttle(ThrottlePolicy policy) : policy_(policy) {}

  /// nullopt admits the request and records now for client; otherwise the
  /// number of seconds the client must wait (never less than
  /// policy.retry_after, never less than the remaining interval).
  std::optional<std::chrono::seconds> check(std::string_view client, Instant now);

 private:
  ThrottlePolicy policy_;
  std::mutex mutex_;
  std::unordered_map<std::string, Instant> last_served_;
};

class Provider {
 public:
  Provider(ProviderConfig config, std::shared_ptr<store::RecordStore> store);

  /// One HTTP exchange: 503 (throttled), 302 (redirect mode), 400 (syntax),
  /// 200 text/xml, or 500 text/plain on an internal failure.
  HttpResponse handle(std::string_view client_addr, HttpMethod method, std::string_view raw_request,
                      Instant now);

  /// Builds the envelope for a validated request. Invalid parameter values
  /// produce reduced or empty bodies, never errors.
  wire::ResponseEnvelope dispatch(const OaiRequest& req, const ResponseDate& response_date) const;

  /// base URL + '?' + the request re-encoded with each argument once.
  std::string request_url(const OaiRequest& req) const;

  const ProviderConfig& config() const noexcept { return config_; }
  store::RecordStore& store() const noexcept { return *store_; }

 private:
  void list_body(const OaiRequest& req, wire::ResponseEnvelope& env) const;

  ProviderConfig config_;
  std::shared_ptr<store::RecordStore> store_;
  Throttle throttle_;
  std::atomic<std::size_t> next_redirect_{0};
};

/// HTTP front end serving a Provider (GET query strings and urlencoded POST
/// bodies on any path).
class HttpFrontend {
 public:
  HttpFrontend(Provider& provider, Clock& clock);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds host:port; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void run();
  /// run() on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace oai::provider
