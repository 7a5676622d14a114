#pragma once

#include <chrono>
#include <cstdint>

namespace cpc {

/// Time source consulted by every budget check.
///
/// Work-heavy loops report their effort through `charge`. A wall clock
/// ignores the report; a virtual clock turns it into elapsed time, which
/// makes budgeted runs fully reproducible.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
  virtual void charge(std::uint64_t work_units) = 0;
  virtual bool is_virtual() const = 0;
};

class WallClock final : public Clock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}

  double now() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void charge(std::uint64_t) override {}
  bool is_virtual() const override { return false; }

 private:
  std::chrono::steady_clock::time_point start_;
};

class VirtualClock final : public Clock {
 public:
  /// Default rate: one microsecond per unit of work.
  explicit VirtualClock(double seconds_per_unit = 1e-6) : seconds_per_unit_(seconds_per_unit) {}

  double now() const override { return static_cast<double>(units_) * seconds_per_unit_ + offset_; }
  void charge(std::uint64_t work_units) override { units_ += work_units; }
  bool is_virtual() const override { return true; }

  void advance(double seconds) { offset_ += seconds; }

 private:
  double seconds_per_unit_;
  std::uint64_t units_ = 0;
  double offset_ = 0.0;
};

}  // namespace cpc
