#pragma once

#include <cstdint>
#include <vector>

#include "swdelay/delay_model.hpp"
#include "swdelay/matrix.hpp"

namespace swdelay {

/// Structuring matrices of one subsystem:
///   A0  -> A0  + D0 * Delta * E0
///   eta -> eta + D1 * delta * E1
struct StructureQuadruple {
  Matrix d0;  // n x r
  Matrix e0;  // q x n
  Matrix d1;  // n x s
  Matrix e1;  // p x n

  static StructureQuadruple identity(std::size_t n);
  bool nonnegative() const;

  friend bool operator==(const StructureQuadruple&, const StructureQuadruple&) = default;
};

class PerturbationStructure {
 public:
  PerturbationStructure(std::vector<StructureQuadruple> per_subsystem, std::size_t n);

  /// Unstructured perturbations: every D and E is the identity.
  static PerturbationStructure identity(std::size_t n, std::size_t subsystems);

  std::size_t dim() const { return n_; }
  std::size_t size() const { return quads_.size(); }
  const StructureQuadruple& operator[](std::size_t k) const { return quads_[k]; }
  const std::vector<StructureQuadruple>& quadruples() const { return quads_; }

  friend bool operator==(const PerturbationStructure&, const PerturbationStructure&) = default;

 private:
  std::vector<StructureQuadruple> quads_;
  std::size_t n_ = 0;
};

/// Disturbance of one subsystem: Delta (r x q) and delta (jumps/kernel of shape s x p).
struct SubsystemDisturbance {
  Matrix delta0;
  DelayMeasure delta1;

  /// ||Delta|| + ||delta||, with ||delta|| = inf_norm(V(delta)).
  double norm() const;

  friend bool operator==(const SubsystemDisturbance&, const SubsystemDisturbance&) = default;
};

using Disturbance = std::vector<SubsystemDisturbance>;

/// max_k (||Delta_k|| + ||delta_k||).
double disturbance_norm(const Disturbance& d);

/// Checks that `d` has one entry per subsystem with inner shapes matching `p`.
void check_compatible(const PerturbationStructure& p, const Disturbance& d);

/// The perturbed system A0_k + D0 Delta E0 and eta_k + D1 delta E1.
SwitchedDelaySystem apply(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                          const Disturbance& d);

/// max over k of ||D0_k|| ||E0_k|| and ||D1_k|| ||E1_k||.
double structure_gain(const PerturbationStructure& p);
double structure_gain(const StructureQuadruple& q);

/// Zero disturbance shaped after `p`, with delta jumps placed at the delays of
/// each subsystem of `sys` (or at h when a subsystem has no discrete delay).
Disturbance zero_disturbance(const SwitchedDelaySystem& sys, const PerturbationStructure& p);

/// Pseudo-random disturbance with disturbance_norm == target_norm.
///
/// Entries of Delta_k and of each delta jump are drawn uniform in [-1, 1] from
/// SplitMix64(seed), in subsystem order, Delta row-major first, then jumps in
/// delay order. Each subsystem's pair is then rescaled so that its own norm
/// equals target_norm.
Disturbance sample_disturbance(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                               double target_norm, std::uint64_t seed);

}  // namespace swdelay
