#include "swdelay/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swdelay/errors.hpp"
#include "swdelay/lclf.hpp"

namespace swdelay {

namespace {

double reciprocal(double gain) {
  return gain > 0.0 ? 1.0 / gain : std::numeric_limits<double>::infinity();
}

/// A0 + eta(0) of a positive subsystem, checked to be Hurwitz.
Matrix stable_static_matrix(const DelaySubsystem& s) {
  const Matrix h = -characteristic_at_zero(s);
  if (!metzler_is_hurwitz(h)) {
    throw NotStable("A0 + eta(0) is singular or its negated inverse has a negative entry");
  }
  return h;
}

bool same_shape(const Matrix& a, const Matrix& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }

Matrix entrywise_abs_max(const Matrix& a, const Matrix& b) {
  Matrix r = abs(a);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = std::max(r(i, j), std::fabs(b(i, j)));
  return r;
}

}  // namespace

const char* to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::CommonLclfLp:
      return "Theorem2-LP";
    case BoundMethod::DominatingSystem:
      return "Theorem3-Domination";
    case BoundMethod::BoundInverseNorm:
      return "Corollary5-H0";
    case BoundMethod::SubsystemMin:
      return "SubsystemMin";
    case BoundMethod::SubsystemInverseNorm:
      return "Corollary5-Hk";
  }
  return "unknown";
}

SubsystemRadius subsystem_radius_positive(const DelaySubsystem& s, const StructureQuadruple& q) {
  if (!is_positive_system(s)) throw NotPositive("subsystem is not a positive system");
  if (!q.nonnegative()) throw NegativeStructure("structuring matrices must be entrywise nonnegative");
  if (q.d0.rows() != s.dim() || q.e0.cols() != s.dim() || q.d1.rows() != s.dim() ||
      q.e1.cols() != s.dim()) {
    throw DimensionMismatch("structure does not match the subsystem dimension");
  }
  stable_static_matrix(s);
  const Matrix p_inv = invert(characteristic_at_zero(s));

  const Matrix* d[2] = {&q.d0, &q.d1};
  const Matrix* e[2] = {&q.e0, &q.e1};
  double gains[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gains[i][j] = inf_norm(*e[i] * p_inv * *d[j]);

  const double all = std::max({gains[0][0], gains[0][1], gains[1][0], gains[1][1]});
  const double diagonal = std::max(gains[0][0], gains[1][1]);
  SubsystemRadius r;
  r.exact = q.d0 == q.d1 || q.e0 == q.e1;
  r.upper = reciprocal(diagonal);
  r.lower = r.exact ? r.upper : reciprocal(all);
  return r;
}

double subsystem_radius_unstructured(const DelaySubsystem& s) {
  if (!is_positive_system(s)) throw NotPositive("subsystem is not a positive system");
  return reciprocal(inf_norm(invert(stable_static_matrix(s))));
}

RadiusReport radius_bounds_common_lclf(const SwitchedDelaySystem& sys, const PerturbationStructure& p) {
  if (p.size() != sys.size() || p.dim() != sys.dim()) {
    throw DimensionMismatch("structure does not match the system");
  }
  const double m0 = structure_gain(p);
  if (!(m0 > 0.0)) throw InvalidArgument("structure gain is zero: every perturbation vanishes");

  RadiusReport report;
  const std::vector<Matrix> envelopes = envelope_family(sys);
  const MarginOptimum opt = maximize_common_margin(envelopes);
  if (opt.value > kMarginThreshold) {
    Vector xi = opt.xi;
    const double top = *std::max_element(xi.begin(), xi.end());
    for (double& v : xi) v /= top;
    report.lower = opt.value / m0;
    report.lower_method = BoundMethod::CommonLclfLp;
    report.certificate_xi = std::move(xi);
  }

  std::optional<double> upper;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const StructureQuadruple& q = p[k];
    const bool exact_formula = q.d0 == q.d1 || q.e0 == q.e1;
    if (!is_positive_system(sys[k]) || !q.nonnegative() || !exact_formula) {
      upper.reset();
      break;
    }
    try {
      const double r = subsystem_radius_positive(sys[k], q).upper;
      upper = upper ? std::min(*upper, r) : r;
    } catch (const NotStable&) {
      upper.reset();
      break;
    }
  }
  if (upper) {
    report.upper = upper;
    report.upper_method = BoundMethod::SubsystemMin;
  }
  return report;
}

StructureQuadruple dominating_structure(const PerturbationStructure& p) {
  if (p.size() == 0) throw InvalidArgument("empty perturbation structure");
  StructureQuadruple out{abs(p[0].d0), abs(p[0].e0), abs(p[0].d1), abs(p[0].e1)};
  for (const StructureQuadruple& q : p.quadruples()) {
    if (!same_shape(q.d0, out.d0) || !same_shape(q.e0, out.e0) || !same_shape(q.d1, out.d1) ||
        !same_shape(q.e1, out.e1)) {
      throw DimensionMismatch("subsystems do not share perturbation inner dimensions");
    }
    out.d0 = entrywise_abs_max(out.d0, q.d0);
    out.e0 = entrywise_abs_max(out.e0, q.e0);
    out.d1 = entrywise_abs_max(out.d1, q.d1);
    out.e1 = entrywise_abs_max(out.e1, q.e1);
  }
  return out;
}

double radius_lower_dominating(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                               const DelaySubsystem& bound, const StructureQuadruple& bound_structure) {
  if (p.size() != sys.size() || p.dim() != sys.dim()) {
    throw DimensionMismatch("structure does not match the system");
  }
  if (!is_positive_system(bound)) throw NotPositiveBound("bounding subsystem is not positive");
  if (bound.dim() != sys.dim()) throw DimensionMismatch("bound dimension differs from the system");
  const Matrix h0 = envelope_matrix(bound);
  if (!metzler_is_hurwitz(h0)) throw NotHurwitzBound("bounding envelope A0 + eta0(0) is not Hurwitz");
  for (std::size_t k = 0; k < sys.size(); ++k) {
    if (!dominates(bound, sys[k])) {
      std::ostringstream msg;
      msg << "subsystem " << k << " is not dominated by the bounding system";
      throw DominationViolated(msg.str());
    }
  }
  if (!bound_structure.nonnegative()) {
    throw StructureNotDominating("bounding structure must be entrywise nonnegative");
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    const StructureQuadruple& q = p[k];
    if (!same_shape(q.d0, bound_structure.d0) || !same_shape(q.e0, bound_structure.e0) ||
        !same_shape(q.d1, bound_structure.d1) || !same_shape(q.e1, bound_structure.e1)) {
      throw DimensionMismatch("subsystems do not share perturbation inner dimensions");
    }
    if (!entrywise_leq(abs(q.d0), bound_structure.d0, kOrderSlack) ||
        !entrywise_leq(abs(q.e0), bound_structure.e0, kOrderSlack) ||
        !entrywise_leq(abs(q.d1), bound_structure.d1, kOrderSlack) ||
        !entrywise_leq(abs(q.e1), bound_structure.e1, kOrderSlack)) {
      std::ostringstream msg;
      msg << "structure of subsystem " << k << " exceeds the bounding structure";
      throw StructureNotDominating(msg.str());
    }
  }
  const Vector xi0 = -invert(h0) * Vector(sys.dim(), 1.0);
  return reciprocal(structure_gain(bound_structure) * inf_norm(xi0));
}

RadiusReport radius_bounds_unstructured_positive(const SwitchedDelaySystem& sys,
                                                 const DelaySubsystem& bound) {
  if (!is_positive_system(bound)) throw NotPositiveBound("bounding subsystem is not positive");
  if (bound.dim() != sys.dim()) throw DimensionMismatch("bound dimension differs from the system");
  const Matrix h0 = envelope_matrix(bound);
  if (!metzler_is_hurwitz(h0)) throw NotHurwitzBound("bounding envelope A0 + eta0(0) is not Hurwitz");

  double worst_inverse = 0.0;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    if (!is_positive_system(sys[k])) {
      std::ostringstream msg;
      msg << "subsystem " << k << " is not a positive system";
      throw NotPositive(msg.str());
    }
    if (!dominates(bound, sys[k])) {
      std::ostringstream msg;
      msg << "subsystem " << k << " is not dominated by the bounding system";
      throw DominationViolated(msg.str());
    }
    worst_inverse = std::max(worst_inverse, inf_norm(invert(-characteristic_at_zero(sys[k]))));
  }

  RadiusReport report;
  report.lower = reciprocal(inf_norm(invert(h0)));
  report.lower_method = BoundMethod::BoundInverseNorm;
  report.upper = reciprocal(worst_inverse);
  report.upper_method = BoundMethod::SubsystemInverseNorm;
  return report;
}

}  // namespace swdelay
