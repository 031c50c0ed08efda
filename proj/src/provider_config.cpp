// Provider config file: one key=value per line, '#' starts a comment.
//
//   repository_name       = Example repository
//   base_url              = http://localhost/oai1
//   admin_email           = someone@example.org     (repeatable, at least one)
//   page_size             = 100
//   throttle_min_interval = 0                       (seconds; 0 disables)
//   throttle_retry_after  = 60                      (seconds)
//   redirect_target       = http://mirror/oai1      (repeatable)
//   clock_offset          = -06:00                  (or signed minutes)
//   store                 = fixture | path/to/catalog.xml

#include <charconv>
#include <fstream>
#include <sstream>

#include "oai/provider.hpp"
#include "text_util.hpp"

namespace oai::provider {

namespace {

long long parse_integer(std::string_view text, std::string_view key, int line) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidValue("line " + std::to_string(line) + ": " + std::string(key) +
                       " expects an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::chrono::minutes parse_offset(std::string_view text, int line) {
  if (text.size() == 6 && (text[0] == '+' || text[0] == '-') && text[3] == ':') {
    const long long hours = parse_integer(text.substr(1, 2), "clock_offset", line);
    const long long minutes = parse_integer(text.substr(4, 2), "clock_offset", line);
    const long long total = hours * 60 + minutes;
    return std::chrono::minutes{text[0] == '-' ? -total : total};
  }
  return std::chrono::minutes{parse_integer(text, "clock_offset", line)};
}

}  // namespace

ProviderSettings parse_provider_config(std::string_view text) {
  std::string name, base_url;
  std::vector<std::string> emails;
  std::size_t page_size = 100;
  ThrottlePolicy throttle;
  std::vector<std::string> redirects;
  std::chrono::minutes offset{0};
  std::string store = "fixture";

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = detail::trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw InvalidValue("line " + std::to_string(line) + ": expected key=value");
    }
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));

    if (key == "repository_name") {
      name = value;
    } else if (key == "base_url") {
      base_url = value;
    } else if (key == "admin_email") {
      emails.push_back(value);
    } else if (key == "page_size") {
      const long long n = parse_integer(value, key, line);
      if (n < 1) throw InvalidValue("line " + std::to_string(line) + ": page_size must be >= 1");
      page_size = static_cast<std::size_t>(n);
    } else if (key == "throttle_min_interval") {
      throttle.min_interval = std::chrono::seconds{parse_integer(value, key, line)};
    } else if (key == "throttle_retry_after") {
      throttle.retry_after = std::chrono::seconds{parse_integer(value, key, line)};
    } else if (key == "redirect_target") {
      redirects.push_back(value);
    } else if (key == "clock_offset") {
      offset = parse_offset(value, line);
    } else if (key == "store") {
      store = value;
    } else if (key == "protocol_version") {
      if (value != "1.0") throw InvalidValue("line " + std::to_string(line) + ": only protocol 1.0 is served");
    } else {
      throw InvalidValue("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (base_url.empty()) throw InvalidValue("config lacks base_url");

  ProviderSettings settings{
      ProviderConfig{RepositoryDescription(name, base_url, emails), page_size, throttle,
                     std::move(redirects), offset},
      store};
  settings.config.validate();
  return settings;
}

ProviderSettings load_provider_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_provider_config(buf.str());
}

std::shared_ptr<store::RecordStore> open_store(const ProviderSettings& settings) {
  if (settings.store == "fixture") return std::make_shared<store::MemoryStore>(store::fixture_catalog());
  return std::make_shared<store::FileStore>(settings.store);
}

}  // namespace oai::provider
