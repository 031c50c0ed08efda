#include <httplib.h>

#include "oai/client.hpp"
#include "text_util.hpp"

namespace oai::client {

HttpResponse HttplibTransport::send(const OutboundRequest& request) {
  constexpr std::string_view scheme = "http://";
  if (request.url.rfind(scheme, 0) != 0) {
    throw TransportError(TransportError::Kind::ConnectionFailed, "only http:// URLs are supported: " + request.url);
  }
  const auto path_start = request.url.find('/', scheme.size());
  const std::string authority =
      request.url.substr(0, path_start == std::string::npos ? std::string::npos : path_start);
  std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

  httplib::Client cli(authority);
  cli.set_follow_location(false);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);

  httplib::Headers headers;
  std::string content_type = "application/x-www-form-urlencoded";
  for (const auto& [key, value] : request.headers) {
    if (detail::iequals(key, "Content-Type")) {
      content_type = value;
    } else {
      headers.emplace(key, value);
    }
  }

  auto result = request.method == HttpMethod::Get ? cli.Get(path, headers)
                                                  : cli.Post(path, headers, request.body, content_type);
  if (!result) {
    throw TransportError(TransportError::Kind::ConnectionFailed,
                         "request to " + request.url + " failed: " + httplib::to_string(result.error()));
  }

  HttpResponse out;
  out.status = result->status;
  out.body = result->body;
  for (const auto& [key, value] : result->headers) {
    if (detail::iequals(key, "Content-Type")) {
      out.content_type = value;
    } else {
      out.headers.emplace_back(key, value);
    }
  }
  return out;
}

}  // namespace oai::client
