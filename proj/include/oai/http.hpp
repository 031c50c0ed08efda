#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oai {

enum class HttpMethod { Get, Post };

inline std::string_view to_string(HttpMethod m) noexcept { return m == HttpMethod::Get ? "GET" : "POST"; }

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// Case-insensitive header lookup.
std::optional<std::string_view> find_header(const HttpHeaders& headers, std::string_view name) noexcept;

struct HttpResponse {
  int status = 200;
  std::string content_type;
  /// Headers other than Content-Type (Retry-After, Location, ...).
  HttpHeaders headers;
  std::string body;

  std::optional<std::string_view> header(std::string_view name) const noexcept {
    return find_header(headers, name);
  }
};

/// Reason phrase used by the provider and the one-shot CLI.
std::string_view reason_phrase(int status) noexcept;

}  // namespace oai
