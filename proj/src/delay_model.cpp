#include "swdelay/delay_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "swdelay/errors.hpp"

namespace swdelay {

namespace {

bool same_time(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Exact integral of |v| over a segment of length len where v moves linearly
/// from va to vb.
double abs_linear_integral(double va, double vb, double len) {
  if (va * vb >= 0.0) return 0.5 * len * (std::fabs(va) + std::fabs(vb));
  return 0.5 * len * (va * va + vb * vb) / (std::fabs(va) + std::fabs(vb));
}

}  // namespace

// ---------------------------------------------------------------------------
// DistributedKernel

DistributedKernel::DistributedKernel(std::vector<double> grid, std::vector<Matrix> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2) throw InvalidArgument("kernel grid needs at least two points");
  if (grid_.size() != values_.size()) {
    throw DimensionMismatch("kernel grid and value counts differ");
  }
  for (std::size_t g = 0; g < grid_.size(); ++g) {
    if (!std::isfinite(grid_[g])) throw InvalidArgument("kernel grid points must be finite");
    if (g > 0 && !(grid_[g] > grid_[g - 1])) {
      throw InvalidArgument("kernel grid must be strictly increasing");
    }
  }
  if (!same_time(grid_.back(), 0.0)) throw InvalidArgument("kernel grid must end at theta = 0");
  grid_.back() = 0.0;
  for (const Matrix& v : values_) {
    if (v.empty() || v.rows() != values_.front().rows() || v.cols() != values_.front().cols()) {
      throw DimensionMismatch("kernel value matrices must share one shape");
    }
  }
}

Matrix DistributedKernel::at(double theta) const {
  if (theta < grid_.front() || theta > 0.0) return Matrix::zeros(rows(), cols());
  auto it = std::upper_bound(grid_.begin(), grid_.end(), theta);
  if (it == grid_.end()) return values_.back();
  const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  const double w = (theta - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] * (1.0 - w) + values_[hi] * w;
}

Matrix DistributedKernel::integral() const {
  Matrix acc = Matrix::zeros(rows(), cols());
  for (std::size_t g = 1; g < grid_.size(); ++g) {
    acc += (values_[g - 1] + values_[g]) * (0.5 * (grid_[g] - grid_[g - 1]));
  }
  return acc;
}

Matrix DistributedKernel::abs_integral() const {
  Matrix acc = Matrix::zeros(rows(), cols());
  for (std::size_t g = 1; g < grid_.size(); ++g) {
    const double len = grid_[g] - grid_[g - 1];
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j)
        acc(i, j) += abs_linear_integral(values_[g - 1](i, j), values_[g](i, j), len);
  }
  return acc;
}

DistributedKernel DistributedKernel::resampled(std::vector<double> grid) const {
  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (double theta : grid) values.push_back(at(theta));
  return DistributedKernel(std::move(grid), std::move(values));
}

DistributedKernel DistributedKernel::sandwiched(const Matrix& left, const Matrix& right) const {
  std::vector<Matrix> values;
  values.reserve(values_.size());
  for (const Matrix& v : values_) values.push_back(left * v * right);
  return DistributedKernel(grid_, std::move(values));
}

DistributedKernel operator+(const DistributedKernel& a, const DistributedKernel& b) {
  if (!same_time(a.grid().front(), b.grid().front())) {
    throw InvalidArgument("kernels with different supports cannot be added exactly");
  }
  std::vector<double> grid;
  std::merge(a.grid().begin(), a.grid().end(), b.grid().begin(), b.grid().end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end(), same_time), grid.end());
  grid.front() = a.grid().front();
  grid.back() = 0.0;
  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (double theta : grid) values.push_back(a.at(theta) + b.at(theta));
  return DistributedKernel(std::move(grid), std::move(values));
}

// ---------------------------------------------------------------------------
// DelayMeasure

DelayMeasure::DelayMeasure(std::vector<DiscreteTerm> jumps, std::optional<DistributedKernel> kernel)
    : jumps_(std::move(jumps)), kernel_(std::move(kernel)) {
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const DiscreteTerm& term = jumps_[i];
    if (!(term.delay > 0.0) || !std::isfinite(term.delay)) {
      throw InvalidArgument("discrete delays must be strictly positive and finite");
    }
    if (i > 0 && !(term.delay > jumps_[i - 1].delay)) {
      throw InvalidArgument("discrete delays must be strictly increasing");
    }
    if (term.a.empty()) throw InvalidArgument("discrete term without a coefficient matrix");
    if (term.a.rows() != jumps_.front().a.rows() || term.a.cols() != jumps_.front().a.cols()) {
      throw DimensionMismatch("discrete term matrices must share one shape");
    }
  }
  if (kernel_ && !jumps_.empty() &&
      (kernel_->rows() != jumps_.front().a.rows() || kernel_->cols() != jumps_.front().a.cols())) {
    throw DimensionMismatch("kernel and discrete term shapes differ");
  }
}

double DelayMeasure::max_delay() const {
  double h = jumps_.empty() ? 0.0 : jumps_.back().delay;
  if (kernel_) h = std::max(h, kernel_->extent());
  return h;
}

Matrix DelayMeasure::variation(std::size_t rows, std::size_t cols) const {
  Matrix acc = Matrix::zeros(rows, cols);
  for (const DiscreteTerm& term : jumps_) acc += abs(term.a);
  if (kernel_) acc += kernel_->abs_integral();
  return acc;
}

Matrix DelayMeasure::total(std::size_t rows, std::size_t cols) const {
  Matrix acc = Matrix::zeros(rows, cols);
  for (const DiscreteTerm& term : jumps_) acc += term.a;
  if (kernel_) acc += kernel_->integral();
  return acc;
}

DelayMeasure DelayMeasure::sandwiched(const Matrix& left, const Matrix& right) const {
  std::vector<DiscreteTerm> jumps;
  jumps.reserve(jumps_.size());
  for (const DiscreteTerm& term : jumps_) jumps.push_back({term.delay, left * term.a * right});
  std::optional<DistributedKernel> kernel;
  if (kernel_) kernel = kernel_->sandwiched(left, right);
  return DelayMeasure(std::move(jumps), std::move(kernel));
}

DelayMeasure operator+(const DelayMeasure& a, const DelayMeasure& b) {
  std::vector<DiscreteTerm> jumps;
  auto ia = a.jumps().begin();
  auto ib = b.jumps().begin();
  while (ia != a.jumps().end() || ib != b.jumps().end()) {
    if (ib == b.jumps().end() || (ia != a.jumps().end() && ia->delay < ib->delay &&
                                  !same_time(ia->delay, ib->delay))) {
      jumps.push_back(*ia++);
    } else if (ia == a.jumps().end() || !same_time(ia->delay, ib->delay)) {
      jumps.push_back(*ib++);
    } else {
      jumps.push_back({ia->delay, ia->a + ib->a});
      ++ia;
      ++ib;
    }
  }
  std::optional<DistributedKernel> kernel;
  if (a.kernel() && b.kernel()) {
    kernel = *a.kernel() + *b.kernel();
  } else if (a.kernel()) {
    kernel = a.kernel();
  } else if (b.kernel()) {
    kernel = b.kernel();
  }
  return DelayMeasure(std::move(jumps), std::move(kernel));
}

// ---------------------------------------------------------------------------
// DelaySubsystem / SwitchedDelaySystem

DelaySubsystem::DelaySubsystem(Matrix a0, std::vector<DiscreteTerm> discrete,
                               std::optional<DistributedKernel> kernel)
    : DelaySubsystem(std::move(a0), DelayMeasure(std::move(discrete), std::move(kernel))) {}

DelaySubsystem::DelaySubsystem(Matrix a0, DelayMeasure measure)
    : a0_(std::move(a0)), measure_(std::move(measure)) {
  if (a0_.empty() || !a0_.square()) throw DimensionMismatch("A0 must be a square matrix");
  const std::size_t n = a0_.rows();
  for (const DiscreteTerm& term : measure_.jumps()) {
    if (term.a.rows() != n || term.a.cols() != n) {
      throw DimensionMismatch("discrete term matrix does not match A0");
    }
  }
  if (measure_.kernel() && (measure_.kernel()->rows() != n || measure_.kernel()->cols() != n)) {
    throw DimensionMismatch("kernel matrices do not match A0");
  }
}

SwitchedDelaySystem::SwitchedDelaySystem(std::vector<DelaySubsystem> subsystems,
                                         std::optional<double> h)
    : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) throw InvalidArgument("a switched system needs at least one subsystem");
  double max_delay = 0.0;
  for (const DelaySubsystem& s : subsystems_) {
    if (s.dim() != subsystems_.front().dim()) {
      throw DimensionMismatch("subsystems must share the state dimension");
    }
    max_delay = std::max(max_delay, s.max_delay());
  }
  h_ = h.value_or(max_delay);
  if (!std::isfinite(h_) || h_ < 0.0) throw InvalidArgument("h must be finite and nonnegative");
  if (max_delay > h_ && !same_time(max_delay, h_)) {
    std::ostringstream msg;
    msg << "delay " << max_delay << " exceeds h = " << h_;
    throw InvalidArgument(msg.str());
  }
  for (std::size_t k = 0; k < subsystems_.size(); ++k) {
    const auto& kernel = subsystems_[k].kernel();
    if (kernel && !same_time(kernel->extent(), h_)) {
      std::ostringstream msg;
      msg << "kernel of subsystem " << k << " spans [" << -kernel->extent()
          << ", 0] instead of [-h, 0] with h = " << h_;
      throw InvalidArgument(msg.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Operations

Matrix variation_matrix(const DelaySubsystem& s) { return s.measure().variation(s.dim(), s.dim()); }

Matrix envelope_matrix(const DelaySubsystem& s) { return metzlerize(s.a0()) + variation_matrix(s); }

Matrix delay_gain_at_zero(const DelaySubsystem& s) { return s.measure().total(s.dim(), s.dim()); }

Matrix characteristic_at_zero(const DelaySubsystem& s) { return -(s.a0() + delay_gain_at_zero(s)); }

bool is_positive_system(const DelaySubsystem& s) {
  if (!is_metzler(s.a0())) return false;
  for (const DiscreteTerm& term : s.discrete_terms()) {
    if (!is_nonnegative(term.a)) return false;
  }
  if (s.kernel()) {
    for (const Matrix& v : s.kernel()->values()) {
      if (!is_nonnegative(v)) return false;
    }
  }
  return true;
}

bool dominates(const DelaySubsystem& bound, const DelaySubsystem& s) {
  if (!is_positive_system(bound)) throw NotPositiveBound("bounding subsystem is not positive");
  if (bound.dim() != s.dim()) throw DimensionMismatch("bound and subsystem dimensions differ");
  return entrywise_leq(metzlerize(s.a0()), bound.a0(), kOrderSlack) &&
         entrywise_leq(variation_matrix(s), variation_matrix(bound), kOrderSlack);
}

}  // namespace swdelay
