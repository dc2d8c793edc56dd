#include "swdelay/signal.hpp"

#include <cmath>
#include <sstream>

#include "swdelay/errors.hpp"
#include "swdelay/rng.hpp"

namespace swdelay {

namespace {

constexpr double kStepSlack = 1e-9;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << v;
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

std::size_t steps_in(double length, double dt, const char* what) {
  const double ratio = length / dt;
  const double whole = std::round(ratio);
  if (whole < 1.0 || std::fabs(ratio - whole) > kStepSlack * whole) {
    std::ostringstream msg;
    msg << what << " " << length << " is not a whole multiple of dt = " << dt;
    throw StepMismatch(msg.str());
  }
  return static_cast<std::size_t>(whole);
}

SwitchingSignal SwitchingSignal::constant(std::size_t subsystem) {
  SwitchingSignal s;
  s.kind_ = Kind::Constant;
  s.subsystem_ = subsystem;
  return s;
}

SwitchingSignal SwitchingSignal::periodic(std::vector<Segment> schedule) {
  if (schedule.empty()) throw InvalidArgument("periodic schedule is empty");
  for (const Segment& seg : schedule) require_positive(seg.duration, "segment duration");
  SwitchingSignal s;
  s.kind_ = Kind::Periodic;
  s.schedule_ = std::move(schedule);
  return s;
}

SwitchingSignal SwitchingSignal::random_dwell(double min_dwell, double max_dwell, std::uint64_t seed) {
  require_positive(min_dwell, "min dwell");
  require_positive(max_dwell, "max dwell");
  if (max_dwell < min_dwell) throw InvalidArgument("max dwell is below min dwell");
  SwitchingSignal s;
  s.kind_ = Kind::RandomDwell;
  s.min_dwell_ = min_dwell;
  s.max_dwell_ = max_dwell;
  s.seed_ = seed;
  return s;
}

void SwitchingSignal::validate(std::size_t subsystems) const {
  auto check = [&](std::size_t k) {
    if (k >= subsystems) {
      std::ostringstream msg;
      msg << "signal references subsystem " << k << " but the system has " << subsystems;
      throw InvalidArgument(msg.str());
    }
  };
  if (kind_ == Kind::Constant) check(subsystem_);
  for (const Segment& seg : schedule_) check(seg.subsystem);
}

std::vector<std::size_t> SwitchingSignal::sample(std::size_t subsystems, double dt,
                                                 std::size_t count) const {
  validate(subsystems);
  require_positive(dt, "dt");
  std::vector<std::size_t> active;
  active.reserve(count);

  switch (kind_) {
    case Kind::Constant:
      active.assign(count, subsystem_);
      break;
    case Kind::Periodic: {
      std::vector<std::size_t> lengths;
      for (const Segment& seg : schedule_) lengths.push_back(steps_in(seg.duration, dt, "schedule duration"));
      for (std::size_t i = 0; active.size() < count; i = (i + 1) % schedule_.size()) {
        for (std::size_t j = 0; j < lengths[i] && active.size() < count; ++j) {
          active.push_back(schedule_[i].subsystem);
        }
      }
      break;
    }
    case Kind::RandomDwell: {
      const auto lo = static_cast<std::uint64_t>(std::ceil(min_dwell_ / dt - kStepSlack));
      const auto hi = static_cast<std::uint64_t>(std::floor(max_dwell_ / dt + kStepSlack));
      if (lo < 1 || hi < lo) {
        std::ostringstream msg;
        msg << "dwell range [" << min_dwell_ << ", " << max_dwell_ << "] holds no whole step of dt = " << dt;
        throw StepMismatch(msg.str());
      }
      SplitMix64 rng(seed_);
      std::size_t current = rng.integer(0, subsystems - 1);
      while (active.size() < count) {
        const std::uint64_t length = rng.integer(lo, hi);
        for (std::uint64_t j = 0; j < length && active.size() < count; ++j) active.push_back(current);
        if (subsystems > 1) {
          const std::size_t next = rng.integer(0, subsystems - 2);
          current = next >= current ? next + 1 : next;
        }
      }
      break;
    }
  }
  return active;
}

}  // namespace swdelay
