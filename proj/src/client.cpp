#include "oai/client.hpp"

#include <charconv>

#include "text_util.hpp"

namespace oai::client {

namespace {

constexpr std::string_view kPrefix = "OAIGet: ";

std::optional<std::chrono::seconds> retry_after_seconds(std::string_view value) {
  const std::string text = detail::trim(value);
  long long n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || n < 0) return std::nullopt;
  return std::chrono::seconds{n};
}

}  // namespace

void ClientConfig::validate() const {
  if (detail::trim(contact_email).empty()) throw InvalidValue("a contact e-mail address is required");
  if (default_retry.count() < 1) throw InvalidValue("default retry must be at least 1 second");
  if (max_retries < 1) throw InvalidValue("max_retries must be positive");
  if (max_redirects < 1) throw InvalidValue("max_redirects must be positive");
}

std::string base_of(std::string_view url) {
  const auto cut = url.find_first_of("?#");
  return std::string(url.substr(0, cut));
}

OaiClient::OaiClient(ClientConfig cfg, Transport& transport, Clock& clock, std::ostream& log)
    : cfg_(std::move(cfg)), transport_(transport), clock_(clock), log_(log) {
  cfg_.validate();
}

FetchResult OaiClient::get(const std::string& base_url, const OaiRequest& req) {
  const std::string args = req.encode();
  std::string target = base_of(base_url);
  int retries = 0;
  int redirects = 0;

  while (true) {
    OutboundRequest out;
    out.method = cfg_.method;
    out.headers = {{"From", cfg_.contact_email}, {"User-Agent", cfg_.user_agent}};
    if (cfg_.method == HttpMethod::Get) {
      out.url = target + "?" + args;
    } else {
      out.url = target;
      out.body = args;
      out.headers.emplace_back("Content-Type", "application/x-www-form-urlencoded");
    }
    if (cfg_.verbose) log_ << kPrefix << "Doing " << to_string(cfg_.method) << " to " << target << " args: " << args << '\n';

    const HttpResponse res = transport_.send(out);

    if (res.status == 200) {
      if (cfg_.verbose) log_ << kPrefix << "Got 200 OK (" << res.body.size() << "bytes)\n";
      return {res.body, target};
    }

    if (res.status == 503) {
      if (retries >= cfg_.max_retries) {
        throw TransportError(TransportError::Kind::RetriesExhausted,
                             "still 503 after " + std::to_string(retries) + " retries from " + target, 503);
      }
      ++retries;
      std::chrono::seconds wait = cfg_.default_retry;
      if (const auto header = res.header("Retry-After")) {
        if (const auto parsed = retry_after_seconds(*header)) {
          wait = *parsed;
        } else {
          log_ << kPrefix << "Unusable Retry-After '" << *header << "', assuming default\n";
        }
      } else {
        log_ << kPrefix << "503 without Retry-After, assuming default\n";
      }
      log_ << kPrefix << "Got 503, sleeping for " << wait.count() << " seconds...\n";
      clock_.sleep_for(wait);
      log_ << kPrefix << "Woken again, retrying...\n";
      continue;
    }

    if (res.status == 301 || res.status == 302 || res.status == 303 || res.status == 307) {
      const auto location = res.header("Location");
      if (!location || detail::trim(*location).empty()) {
        throw TransportError(TransportError::Kind::HttpError, "redirect without Location from " + target,
                             res.status);
      }
      if (redirects >= cfg_.max_redirects) {
        throw TransportError(TransportError::Kind::RedirectLoop,
                             "more than " + std::to_string(cfg_.max_redirects) + " redirects", res.status);
      }
      ++redirects;
      const std::string next = base_of(detail::trim(*location));
      log_ << kPrefix << "Got " << res.status << ", redirecting to " << next << "?...\n";
      target = next;
      continue;
    }

    throw TransportError(TransportError::Kind::HttpError,
                         "HTTP " + std::to_string(res.status) + " from " + target, res.status);
  }
}

}  // namespace oai::client
