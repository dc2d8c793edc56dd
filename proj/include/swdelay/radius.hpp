#pragma once

#include <optional>
#include <string>

#include "swdelay/delay_model.hpp"
#include "swdelay/matrix.hpp"
#include "swdelay/perturb.hpp"

namespace swdelay {

/// Where a reported radius bound came from.
enum class BoundMethod {
  CommonLclfLp,         // margin LP over the common copositive cone
  DominatingSystem,     // positive bounding system, 1/(M0 ||H0^{-1} 1||)
  BoundInverseNorm,     // 1/||H0^{-1}|| of the bounding system
  SubsystemMin,         // min over exact positive subsystem radii
  SubsystemInverseNorm  // 1/max_k ||H_k^{-1}||
};

/// Stable tag used in reports and on the command line.
const char* to_string(BoundMethod method);

struct RadiusReport {
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<BoundMethod> lower_method;
  std::optional<BoundMethod> upper_method;
  /// Copositive vector attaining the LP lower bound, when that method is used.
  std::optional<Vector> certificate_xi;
};

struct SubsystemRadius {
  double lower = 0.0;
  double upper = 0.0;
  /// D0 == D1 or E0 == E1, so lower == upper is the radius itself.
  bool exact = false;
};

/// Radius bounds of a single positive, exponentially stable subsystem under
/// nonnegative structured perturbations, from the four static gains
/// ||E^i P(0)^{-1} D^j||.
///
/// Throws NotPositive, NegativeStructure, NotStable.
SubsystemRadius subsystem_radius_positive(const DelaySubsystem& s, const StructureQuadruple& q);

/// 1 / ||(A0 + eta(0))^{-1}|| for a positive stable subsystem.
double subsystem_radius_unstructured(const DelaySubsystem& s);

/// Lower bound t*/M0 from the margin LP; upper bound min_k of exact positive
/// subsystem radii when every subsystem allows it, otherwise unavailable.
RadiusReport radius_bounds_common_lclf(const SwitchedDelaySystem& sys, const PerturbationStructure& p);

/// 1 / (M0(bound_structure) ||(A0 + eta0(0))^{-1} 1||) for a family dominated
/// by a positive bounding subsystem with dominating nonnegative structure.
///
/// Throws NotPositiveBound, NotHurwitzBound, DominationViolated,
/// StructureNotDominating, DimensionMismatch.
double radius_lower_dominating(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                               const DelaySubsystem& bound, const StructureQuadruple& bound_structure);

/// Entrywise max of |D^i_k|, |E^i_k| over k: the smallest dominating structure.
StructureQuadruple dominating_structure(const PerturbationStructure& p);

/// Unstructured bounds 1/||H0^{-1}|| <= r <= 1/max_k ||H_k^{-1}|| for positive
/// subsystems dominated by a positive stable bound.
///
/// Throws NotPositiveBound, NotHurwitzBound, NotPositive, DominationViolated.
RadiusReport radius_bounds_unstructured_positive(const SwitchedDelaySystem& sys,
                                                 const DelaySubsystem& bound);

}  // namespace swdelay
