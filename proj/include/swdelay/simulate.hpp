#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

#include "swdelay/delay_model.hpp"
#include "swdelay/lclf.hpp"
#include "swdelay/matrix.hpp"
#include "swdelay/signal.hpp"

namespace swdelay {

/// Initial function phi(theta) on [-h, 0].
using History = std::function<Vector(double)>;

History constant_history(Vector value);

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Vector> states;
  /// Subsystem active on [times[j], times[j] + dt).
  std::vector<std::size_t> active;
  /// Set when the state left the finite range or grew past 1e12 times the
  /// history norm; the trajectory then ends at the first offending sample.
  bool diverged = false;

  std::size_t size() const { return times.size(); }
};

/// max over the grid theta = -m dt, m = 0 .. h/dt, of ||phi(theta)||.
double history_norm(const History& phi, double h, double dt);

/// Fixed-step RK4 under the method of steps.
///
/// Every discrete delay, h (when kernels are present), every schedule
/// duration and the horizon must be whole multiples of dt; otherwise
/// StepMismatch. Delayed values come from the stored grid, with midpoints from
/// the cubic Hermite interpolant built on stored derivatives; values at
/// non-positive times come from `phi` directly. The distributed term uses the
/// trapezoid rule on the step grid.
Trajectory simulate(const SwitchedDelaySystem& sys, const History& phi, const SwitchingSignal& signal,
                    double horizon, double dt);

/// |x_i(t_j)| <= M e^{-alpha t_j} xi_i / ||xi|| * history_norm * (1 + 1e-6) for all i, j.
bool decay_envelope_check(const Trajectory& traj, const LclfCertificate& cert, double history_norm);

/// Every component >= -1e-9 times the running max of ||x||.
bool positivity_check(const Trajectory& traj);

/// Header t,x1..xn,sigma; one row per sample; 17 significant digits; sigma is 1-based.
void write_csv(std::ostream& out, const Trajectory& traj);

struct SimulationJob {
  SwitchedDelaySystem system;
  History history;
  SwitchingSignal signal;
  double horizon;
  double dt;
};

/// Runs jobs on up to `workers` threads (0 means hardware concurrency).
/// Results are in job order regardless of scheduling. The first exception
/// thrown by any job is rethrown after all workers stop.
std::vector<Trajectory> simulate_batch(const std::vector<SimulationJob>& jobs, std::size_t workers);

}  // namespace swdelay
