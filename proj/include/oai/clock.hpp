#pragma once

#include <chrono>
#include <mutex>
#include <vector>

namespace oai {

using Instant = std::chrono::sys_seconds;

/// Time source with the ability to wait. Injected wherever the harvester
/// sleeps so tests can run on virtual time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
  virtual void sleep_for(std::chrono::seconds duration) = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override;
  void sleep_for(std::chrono::seconds duration) override;
};

/// Manually driven clock; sleeping advances time instantly.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Instant start) : now_(start) {}

  Instant now() const override;
  void sleep_for(std::chrono::seconds duration) override;
  void advance(std::chrono::seconds duration) { sleep_for(duration); }
  void set(Instant t);

  /// Every duration passed to sleep_for, in order.
  std::vector<std::chrono::seconds> sleeps() const;

 private:
  mutable std::mutex mutex_;
  Instant now_;
  std::vector<std::chrono::seconds> sleeps_;
};

}  // namespace oai
