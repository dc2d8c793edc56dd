#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace swdelay {

/// Piecewise-constant switching signal with strictly positive dwell times.
class SwitchingSignal {
 public:
  enum class Kind { Constant, Periodic, RandomDwell };

  struct Segment {
    std::size_t subsystem;
    double duration;
  };

  static SwitchingSignal constant(std::size_t subsystem);
  /// Cycles through `schedule` forever.
  static SwitchingSignal periodic(std::vector<Segment> schedule);
  /// Dwell times drawn uniform over the whole steps in [min_dwell, max_dwell];
  /// each switch moves to a different subsystem.
  static SwitchingSignal random_dwell(double min_dwell, double max_dwell, std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::size_t subsystem() const { return subsystem_; }
  const std::vector<Segment>& schedule() const { return schedule_; }
  double min_dwell() const { return min_dwell_; }
  double max_dwell() const { return max_dwell_; }
  std::uint64_t seed() const { return seed_; }

  /// Throws InvalidArgument if an index is >= `subsystems`.
  void validate(std::size_t subsystems) const;

  /// Active subsystem on [j dt, (j+1) dt) for j = 0 .. count-1.
  /// Throws StepMismatch when a schedule duration is not a multiple of dt or
  /// the dwell range contains no whole step count.
  std::vector<std::size_t> sample(std::size_t subsystems, double dt, std::size_t count) const;

 private:
  SwitchingSignal() = default;

  Kind kind_ = Kind::Constant;
  std::size_t subsystem_ = 0;
  std::vector<Segment> schedule_;
  double min_dwell_ = 0.0;
  double max_dwell_ = 0.0;
  std::uint64_t seed_ = 0;
};

/// Number of dt steps in `length`, or StepMismatch if `length` is not a whole
/// multiple of dt within 1e-9 relative. `what` names the quantity in the message.
std::size_t steps_in(double length, double dt, const char* what);

}  // namespace swdelay
