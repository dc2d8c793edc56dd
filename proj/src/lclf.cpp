#include "swdelay/lclf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swdelay/errors.hpp"

namespace swdelay {

namespace {

constexpr double kSlackThreshold = 1e-12;
constexpr double kAlphaRelativeTolerance = 1e-6;
constexpr int kAlphaMaxIterations = 200;
constexpr double kGainInflation = 1.01;

}  // namespace

std::vector<Matrix> envelope_family(const SwitchedDelaySystem& sys) {
  std::vector<Matrix> out;
  out.reserve(sys.size());
  for (const DelaySubsystem& s : sys.subsystems()) out.push_back(envelope_matrix(s));
  return out;
}

MarginOptimum maximize_common_margin(std::span<const Matrix> envelopes, const LpOptions& options) {
  if (envelopes.empty()) throw InvalidArgument("margin LP needs at least one envelope");
  const std::size_t n = envelopes.front().rows();
  // Variables: xi_0 .. xi_{n-1}, t.
  LpProblem lp;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  lp.bounds.assign(n, VariableBounds{0.0, 1.0});
  lp.bounds.push_back(VariableBounds::free());
  for (const Matrix& e : envelopes) {
    if (e.rows() != n || e.cols() != n) throw DimensionMismatch("envelopes must share one size");
    for (std::size_t i = 0; i < n; ++i) {
      LinearConstraint row;
      row.coeffs.assign(e.row(i).begin(), e.row(i).end());
      row.coeffs.push_back(1.0);
      row.rhs = 0.0;
      lp.constraints.push_back(std::move(row));
    }
  }
  const LpSolution sol = lp_solve(lp, options);
  // xi = 0, t = 0 is always feasible and t is bounded above by the box.
  if (sol.status != LpStatus::Optimal) {
    throw Error(std::string("margin LP unexpectedly ") + to_string(sol.status));
  }
  return {sol.variables[n], Vector(sol.variables.begin(), sol.variables.begin() + n)};
}

CertificateCheck verify_certificate(const SwitchedDelaySystem& sys, std::span<const double> xi) {
  const std::size_t n = sys.dim();
  if (xi.size() != n) throw DimensionMismatch("certificate length differs from state dimension");
  CertificateCheck check;
  check.slacks.reserve(n * sys.size());
  bool positive = std::all_of(xi.begin(), xi.end(), [](double v) { return v > 0.0; });
  bool strict = true;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const DelaySubsystem& s : sys.subsystems()) {
    const Vector ex = envelope_matrix(s) * xi;
    for (double v : ex) {
      check.slacks.push_back(-v);
      min_slack = std::min(min_slack, -v);
      if (!(-v > kSlackThreshold)) strict = false;
    }
  }
  check.min_slack = min_slack;
  check.accepted = positive && strict;
  return check;
}

bool decay_condition_holds(const SwitchedDelaySystem& sys, std::span<const double> xi,
                           double alpha) {
  const double weight = std::exp(alpha * sys.h());
  for (const DelaySubsystem& s : sys.subsystems()) {
    const Vector lhs = (metzlerize(s.a0()) + variation_matrix(s) * weight) * xi;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (!(lhs[i] < -alpha * xi[i])) return false;
    }
  }
  return true;
}

double certified_decay_rate(const SwitchedDelaySystem& sys, std::span<const double> xi,
                            double alpha_max) {
  if (!(alpha_max > 0.0) || !decay_condition_holds(sys, xi, 0.0)) return 0.0;
  if (decay_condition_holds(sys, xi, alpha_max)) return alpha_max;
  double lo = 0.0;
  double hi = alpha_max;
  for (int it = 0; it < kAlphaMaxIterations && hi - lo > kAlphaRelativeTolerance * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (decay_condition_holds(sys, xi, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

LclfSearch find_common_lclf(const SwitchedDelaySystem& sys, const LpOptions& options) {
  const std::vector<Matrix> envelopes = envelope_family(sys);
  const MarginOptimum opt = maximize_common_margin(envelopes, options);
  LclfSearch result;
  result.optimum = opt.value;
  if (!(opt.value > kMarginThreshold)) {
    std::ostringstream msg;
    msg << "no common copositive vector: optimal margin " << opt.value;
    result.status = LclfStatus::Infeasible;
    result.diagnostic = msg.str();
    return result;
  }

  Vector xi = opt.xi;
  const double top = *std::max_element(xi.begin(), xi.end());
  const double bottom = *std::min_element(xi.begin(), xi.end());
  if (!(bottom > 0.0)) {
    std::ostringstream msg;
    msg << "LP vertex has a zero component (min xi = " << bottom << ")";
    result.status = LclfStatus::Degenerate;
    result.diagnostic = msg.str();
    return result;
  }
  for (double& v : xi) v /= top;

  const CertificateCheck check = verify_certificate(sys, xi);
  if (!check.accepted) {
    result.status = LclfStatus::Degenerate;
    result.diagnostic = "normalized LP vertex fails direct verification";
    return result;
  }

  LclfCertificate cert;
  cert.margin = check.min_slack;
  cert.decay_alpha = certified_decay_rate(sys, xi, opt.value / top);
  cert.envelope_gain = kGainInflation * top / bottom;
  cert.xi = std::move(xi);
  result.status = LclfStatus::Certified;
  result.certificate = std::move(cert);
  return result;
}

DominationCertificate certify_dominated(const DelaySubsystem& bound, const SwitchedDelaySystem& sys) {
  if (!is_positive_system(bound)) throw NotPositiveBound("bounding subsystem is not positive");
  const Matrix h0 = envelope_matrix(bound);
  if (!metzler_is_hurwitz(h0)) return {};
  for (const DelaySubsystem& s : sys.subsystems()) {
    if (!dominates(bound, s)) return {};
  }
  const Matrix inv = invert(h0);
  Vector xi = -inv * Vector(sys.dim(), 1.0);
  const double top = *std::max_element(xi.begin(), xi.end());
  for (double& v : xi) v /= top;
  return {true, std::move(xi)};
}

}  // namespace swdelay
