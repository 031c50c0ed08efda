#include "oai/clock.hpp"

#include <thread>

#include "oai/http.hpp"
#include "text_util.hpp"

namespace oai {

Instant SystemClock::now() const {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

void SystemClock::sleep_for(std::chrono::seconds duration) { std::this_thread::sleep_for(duration); }

Instant VirtualClock::now() const {
  std::lock_guard lock(mutex_);
  return now_;
}

void VirtualClock::sleep_for(std::chrono::seconds duration) {
  std::lock_guard lock(mutex_);
  sleeps_.push_back(duration);
  now_ += duration;
}

void VirtualClock::set(Instant t) {
  std::lock_guard lock(mutex_);
  now_ = t;
}

std::vector<std::chrono::seconds> VirtualClock::sleeps() const {
  std::lock_guard lock(mutex_);
  return sleeps_;
}

std::optional<std::string_view> find_header(const HttpHeaders& headers, std::string_view name) noexcept {
  for (const auto& [key, value] : headers) {
    if (detail::iequals(key, name)) return std::string_view(value);
  }
  return std::nullopt;
}

std::string_view reason_phrase(int status) noexcept {
  switch (status) {
    case 200: return "OK";
    case 302: return "Found";
    case 400: return "Malformed request";
    case 404: return "Not Found";
    case 500: return "Internal Server Error";
    case 503: return "Service Unavailable";
    default: return "Unknown";
  }
}

}  // namespace oai
