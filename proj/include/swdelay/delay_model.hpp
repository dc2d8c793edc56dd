#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "swdelay/matrix.hpp"

namespace swdelay {

/// Absolute slack used by every entrywise order comparison.
inline constexpr double kOrderSlack = 1e-12;

/// Piecewise-linear matrix density B(theta) on a grid ending at theta = 0.
///
/// Value matrices may be rectangular so the same type carries kernel
/// disturbances of shape s x p. Outside the grid the density is zero.
class DistributedKernel {
 public:
  DistributedKernel(std::vector<double> grid, std::vector<Matrix> values);

  std::span<const double> grid() const { return grid_; }
  std::span<const Matrix> values() const { return values_; }
  std::size_t rows() const { return values_.front().rows(); }
  std::size_t cols() const { return values_.front().cols(); }
  /// Length of the support, -grid.front().
  double extent() const { return -grid_.front(); }

  /// Linear interpolation; zero outside [grid.front(), 0].
  Matrix at(double theta) const;
  /// Signed integral over the support (exact for piecewise-linear data).
  Matrix integral() const;
  /// Entrywise integral of |B| over the support, exact: segments whose end
  /// values differ in sign are split at the zero crossing.
  Matrix abs_integral() const;

  /// Same density expressed on a refined grid that contains grid().
  DistributedKernel resampled(std::vector<double> grid) const;
  /// Apply M -> left * M * right to every value matrix.
  DistributedKernel sandwiched(const Matrix& left, const Matrix& right) const;

  friend bool operator==(const DistributedKernel&, const DistributedKernel&) = default;

 private:
  std::vector<double> grid_;
  std::vector<Matrix> values_;
};

/// Sum of two kernels on the union of their grids. Both must share their support.
DistributedKernel operator+(const DistributedKernel& a, const DistributedKernel& b);

/// One jump of the delay measure: coefficient `a` applied to x(t - delay).
struct DiscreteTerm {
  double delay = 0.0;
  Matrix a;

  friend bool operator==(const DiscreteTerm&, const DiscreteTerm&) = default;
};

/// Jumps at distinct positive delays plus an optional density: the delay
/// measure used both by subsystems and by their disturbances.
class DelayMeasure {
 public:
  DelayMeasure() = default;
  DelayMeasure(std::vector<DiscreteTerm> jumps, std::optional<DistributedKernel> kernel);

  std::span<const DiscreteTerm> jumps() const { return jumps_; }
  const std::optional<DistributedKernel>& kernel() const { return kernel_; }
  bool empty() const { return jumps_.empty() && !kernel_; }
  /// Largest delay or kernel extent, 0 when empty.
  double max_delay() const;

  /// Entrywise total variation: sum |A_i| + integral |B|. Requires rows/cols
  /// because an empty measure has no shape of its own.
  Matrix variation(std::size_t rows, std::size_t cols) const;
  /// Value of the measure at theta = 0: sum A_i + integral B.
  Matrix total(std::size_t rows, std::size_t cols) const;

  /// Apply M -> left * M * right to every jump and to the kernel.
  DelayMeasure sandwiched(const Matrix& left, const Matrix& right) const;

  friend bool operator==(const DelayMeasure&, const DelayMeasure&) = default;

 private:
  std::vector<DiscreteTerm> jumps_;
  std::optional<DistributedKernel> kernel_;
};

/// Sum of two measures. Jumps at coinciding delays are merged, the rest are
/// interleaved so delays stay strictly increasing.
DelayMeasure operator+(const DelayMeasure& a, const DelayMeasure& b);

/// One constituent system  x' = A0 x(t) + sum_i A_i x(t - h_i) + int B(s) x(t+s) ds.
class DelaySubsystem {
 public:
  explicit DelaySubsystem(Matrix a0, std::vector<DiscreteTerm> discrete = {},
                          std::optional<DistributedKernel> kernel = std::nullopt);
  DelaySubsystem(Matrix a0, DelayMeasure measure);

  std::size_t dim() const { return a0_.rows(); }
  const Matrix& a0() const { return a0_; }
  const DelayMeasure& measure() const { return measure_; }
  std::span<const DiscreteTerm> discrete_terms() const { return measure_.jumps(); }
  const std::optional<DistributedKernel>& kernel() const { return measure_.kernel(); }
  double max_delay() const { return measure_.max_delay(); }

  friend bool operator==(const DelaySubsystem&, const DelaySubsystem&) = default;

 private:
  Matrix a0_;
  DelayMeasure measure_;
};

/// Ordered family of subsystems sharing the state dimension and max delay h.
class SwitchedDelaySystem {
 public:
  /// When `h` is omitted it is the largest delay among the subsystems.
  explicit SwitchedDelaySystem(std::vector<DelaySubsystem> subsystems,
                               std::optional<double> h = std::nullopt);

  std::size_t dim() const { return subsystems_.front().dim(); }
  std::size_t size() const { return subsystems_.size(); }
  double h() const { return h_; }
  const DelaySubsystem& operator[](std::size_t k) const { return subsystems_[k]; }
  std::span<const DelaySubsystem> subsystems() const { return subsystems_; }

  friend bool operator==(const SwitchedDelaySystem&, const SwitchedDelaySystem&) = default;

 private:
  std::vector<DelaySubsystem> subsystems_;
  double h_ = 0.0;
};

/// V(eta): sum |A_i| + integral |B|.
Matrix variation_matrix(const DelaySubsystem& s);
/// metzlerize(A0) + V(eta); always Metzler.
Matrix envelope_matrix(const DelaySubsystem& s);
/// eta(0) = sum A_i + integral B (signed).
Matrix delay_gain_at_zero(const DelaySubsystem& s);
/// P(0) = -A0 - eta(0).
Matrix characteristic_at_zero(const DelaySubsystem& s);
/// Metzler A0, nonnegative jumps and nonnegative kernel samples.
bool is_positive_system(const DelaySubsystem& s);
/// metzlerize(s.A0) <= bound.A0 and V(s) <= V(bound). Throws NotPositiveBound
/// when `bound` is not a positive system.
bool dominates(const DelaySubsystem& bound, const DelaySubsystem& s);

}  // namespace swdelay
