#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swdelay/delay_model.hpp"
#include "swdelay/lp.hpp"
#include "swdelay/matrix.hpp"

namespace swdelay {

/// Common linear copositive Lyapunov vector for a switched delay system.
struct LclfCertificate {
  /// Strictly positive, normalized so that max xi_i = 1.
  Vector xi;
  /// min over k, i of -(envelope_k xi)_i.
  double margin = 0.0;
  /// Decay rate alpha with (metzlerize(A0_k) + e^{alpha h} V_k) xi << -alpha xi for all k.
  double decay_alpha = 0.0;
  /// Overshoot constant M > max xi / min xi.
  double envelope_gain = 0.0;
};

/// Largest t with envelope_k xi <= -t 1 for all k over 0 <= xi <= 1.
struct MarginOptimum {
  double value = 0.0;
  Vector xi;
};

/// Solves the margin LP  max t  s.t.  E_k xi + t 1 <= 0,  0 <= xi <= 1,  t free.
MarginOptimum maximize_common_margin(std::span<const Matrix> envelopes,
                                     const LpOptions& options = {});

std::vector<Matrix> envelope_family(const SwitchedDelaySystem& sys);

enum class LclfStatus { Certified, Infeasible, Degenerate };

struct LclfSearch {
  LclfStatus status = LclfStatus::Infeasible;
  std::optional<LclfCertificate> certificate;
  /// LP optimum t* (may be <= 0 when no common vector exists).
  double optimum = 0.0;
  std::string diagnostic;

  bool certified() const { return status == LclfStatus::Certified; }
};

/// Threshold on the LP optimum below which the system is reported infeasible.
inline constexpr double kMarginThreshold = 1e-9;

LclfSearch find_common_lclf(const SwitchedDelaySystem& sys, const LpOptions& options = {});

struct CertificateCheck {
  bool accepted = false;
  /// -(envelope_k xi), subsystem-major: slack[k * n + i].
  Vector slacks;
  double min_slack = 0.0;
};

/// Direct substitution of xi into the envelope inequalities. Accepts iff xi >> 0
/// and every slack exceeds 1e-12.
CertificateCheck verify_certificate(const SwitchedDelaySystem& sys, std::span<const double> xi);

/// Largest alpha in (0, alpha_max] (within relative 1e-6) satisfying the
/// strict exponentially weighted inequality for every subsystem. Returns 0
/// when xi does not certify the system.
double certified_decay_rate(const SwitchedDelaySystem& sys, std::span<const double> xi,
                            double alpha_max);

/// True iff (metzlerize(A0_k) + e^{alpha h} V_k) xi << -alpha xi for every k.
bool decay_condition_holds(const SwitchedDelaySystem& sys, std::span<const double> xi,
                           double alpha);

struct DominationCertificate {
  bool certified = false;
  /// -envelope(bound)^{-1} 1, normalized to max 1; empty unless certified.
  Vector xi;
};

/// Certifies every subsystem dominated by a positive bound whose envelope is
/// Hurwitz. Throws NotPositiveBound for a non-positive bound.
DominationCertificate certify_dominated(const DelaySubsystem& bound, const SwitchedDelaySystem& sys);

}  // namespace swdelay
