#include "swdelay/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "swdelay/errors.hpp"

namespace swdelay {

namespace {

constexpr double kDivergenceFactor = 1e12;

// out += m * x
void accumulate(const Matrix& m, const double* x, double* out) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    out[i] += s;
  }
}

struct LaggedTerm {
  std::size_t lag;  // in steps
  Matrix a;
};

// A subsystem with delays converted to step counts and kernel nodes pre-weighted.
struct SteppedSubsystem {
  Matrix a0;
  std::vector<LaggedTerm> jumps;
  std::vector<Matrix> weighted_nodes;  // w_m B(-m dt), m = 0 .. h/dt
};

SteppedSubsystem step_subsystem(const DelaySubsystem& s, double h, double dt) {
  SteppedSubsystem out{s.a0(), {}, {}};
  for (const DiscreteTerm& term : s.discrete_terms()) {
    out.jumps.push_back({steps_in(term.delay, dt, "delay"), term.a});
  }
  if (s.kernel()) {
    const std::size_t nodes = steps_in(h, dt, "delay bound h");
    for (std::size_t m = 0; m <= nodes; ++m) {
      const double w = (m == 0 || m == nodes) ? 0.5 * dt : dt;
      out.weighted_nodes.push_back(w * s.kernel()->at(-static_cast<double>(m) * dt));
    }
  }
  return out;
}

class Integrator {
 public:
  Integrator(const SwitchedDelaySystem& sys, const History& phi, double dt)
      : n_(sys.dim()), dt_(dt), phi_(phi) {
    for (const DelaySubsystem& s : sys.subsystems()) stepped_.push_back(step_subsystem(s, sys.h(), dt));
  }

  void reserve(std::size_t steps) {
    x_.reserve((steps + 1) * n_);
    dstart_.reserve(steps * n_);
    dend_.reserve(steps * n_);
  }

  std::size_t dim() const { return n_; }
  const std::vector<double>& states() const { return x_; }

  void push_state(const double* v) { x_.insert(x_.end(), v, v + n_); }

  void push_derivatives(const double* start, const double* end) {
    dstart_.insert(dstart_.end(), start, start + n_);
    dend_.insert(dend_.end(), end, end + n_);
  }

  const double* dend(std::size_t step) const { return dend_.data() + step * n_; }

  // Derivative of subsystem k at half-step index q (time q dt / 2) with stage state y.
  void rhs(std::size_t k, long q, const double* y, double* out) {
    const SteppedSubsystem& s = stepped_[k];
    std::fill(out, out + n_, 0.0);
    accumulate(s.a0, y, out);
    for (const LaggedTerm& term : s.jumps) {
      accumulate(term.a, value_at(q - 2 * static_cast<long>(term.lag)), out);
    }
    for (std::size_t m = 0; m < s.weighted_nodes.size(); ++m) {
      accumulate(s.weighted_nodes[m], m == 0 ? y : value_at(q - 2 * static_cast<long>(m)), out);
    }
  }

 private:
  // State at half-step index q <= current; points into scratch_ or stored data.
  const double* value_at(long q) {
    if (q <= 0) {
      const Vector v = phi_(0.5 * static_cast<double>(q) * dt_);
      if (v.size() != n_) throw DimensionMismatch("history returned a vector of the wrong size");
      scratch_ = v;
      return scratch_.data();
    }
    if (q % 2 == 0) return x_.data() + static_cast<std::size_t>(q / 2) * n_;
    const auto i = static_cast<std::size_t>((q - 1) / 2);
    const double* a = x_.data() + i * n_;
    const double* b = a + n_;
    const double* da = dstart_.data() + i * n_;
    const double* db = dend_.data() + i * n_;
    scratch_.resize(n_);
    for (std::size_t r = 0; r < n_; ++r) scratch_[r] = 0.5 * (a[r] + b[r]) + 0.125 * dt_ * (da[r] - db[r]);
    return scratch_.data();
  }

  std::size_t n_;
  double dt_;
  const History& phi_;
  std::vector<SteppedSubsystem> stepped_;
  std::vector<double> x_;
  std::vector<double> dstart_;
  std::vector<double> dend_;
  Vector scratch_;
};

bool out_of_range(const double* v, std::size_t n, double limit) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::fabs(v[i]) <= limit)) return true;
  }
  return false;
}

}  // namespace

History constant_history(Vector value) {
  return [value = std::move(value)](double) { return value; };
}

double history_norm(const History& phi, double h, double dt) {
  const std::size_t samples = h > 0.0 ? static_cast<std::size_t>(std::llround(h / dt)) : 0;
  double best = 0.0;
  for (std::size_t m = 0; m <= samples; ++m) {
    best = std::max(best, inf_norm(phi(-static_cast<double>(m) * dt)));
  }
  return best;
}

Trajectory simulate(const SwitchedDelaySystem& sys, const History& phi, const SwitchingSignal& signal,
                    double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be finite and >= dt");
  Integrator integ(sys, phi, dt);
  const std::size_t steps = steps_in(horizon, dt, "horizon");
  const std::vector<std::size_t> active = signal.sample(sys.size(), dt, steps + 1);
  integ.reserve(steps);
  const std::size_t n = integ.dim();
  const Vector x0 = phi(0.0);
  if (x0.size() != n) throw DimensionMismatch("history returned a vector of the wrong size");
  const double limit = kDivergenceFactor * history_norm(phi, sys.h(), dt);

  Trajectory traj;
  traj.dt = dt;
  integ.push_state(x0.data());

  Vector k1(n), k2(n), k3(n), k4(n), stage(n), next(n), end(n);
  std::size_t done = 0;
  for (std::size_t j = 0; j < steps; ++j) {
    const std::size_t k = active[j];
    const long q = 2 * static_cast<long>(j);
    const double* xj = integ.states().data() + j * n;
    if (j > 0 && active[j - 1] == k) {
      std::copy(integ.dend(j - 1), integ.dend(j - 1) + n, k1.begin());
    } else {
      integ.rhs(k, q, xj, k1.data());
    }
    for (std::size_t i = 0; i < n; ++i) stage[i] = xj[i] + 0.5 * dt * k1[i];
    integ.rhs(k, q + 1, stage.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) stage[i] = xj[i] + 0.5 * dt * k2[i];
    integ.rhs(k, q + 1, stage.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i) stage[i] = xj[i] + dt * k3[i];
    integ.rhs(k, q + 2, stage.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = xj[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    integ.push_state(next.data());
    done = j + 1;
    if (out_of_range(next.data(), n, limit)) {
      traj.diverged = true;
      break;
    }
    integ.rhs(k, q + 2, next.data(), end.data());
    integ.push_derivatives(k1.data(), end.data());
  }

  const std::vector<double>& xs = integ.states();
  traj.times.reserve(done + 1);
  traj.states.reserve(done + 1);
  for (std::size_t j = 0; j <= done; ++j) {
    traj.times.push_back(static_cast<double>(j) * dt);
    traj.states.emplace_back(xs.begin() + static_cast<long>(j * n), xs.begin() + static_cast<long>((j + 1) * n));
    traj.active.push_back(active[j]);
  }
  return traj;
}

bool decay_envelope_check(const Trajectory& traj, const LclfCertificate& cert, double history_norm) {
  if (cert.xi.empty()) return false;
  const double xi_norm = inf_norm(cert.xi);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double scale =
        cert.envelope_gain * std::exp(-cert.decay_alpha * traj.times[j]) / xi_norm * history_norm * (1.0 + 1e-6);
    const Vector& x = traj.states[j];
    if (x.size() != cert.xi.size()) throw DimensionMismatch("certificate and trajectory dimensions differ");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(std::fabs(x[i]) <= scale * cert.xi[i])) return false;
    }
  }
  return true;
}

bool positivity_check(const Trajectory& traj) {
  double running = 0.0;
  for (const Vector& x : traj.states) {
    running = std::max(running, inf_norm(x));
    for (double v : x) {
      if (!(v >= -1e-9 * running)) return false;
    }
  }
  return true;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
  out << ",sigma\n";
  char buf[32];
  for (std::size_t j = 0; j < traj.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[j]);
    out << buf;
    for (double v : traj.states[j]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << ',' << traj.active[j] + 1 << '\n';
  }
}

std::vector<Trajectory> simulate_batch(const std::vector<SimulationJob>& jobs, std::size_t workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(jobs.size(), 1));

  std::vector<Trajectory> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const SimulationJob& job = jobs[i];
        results[i] = simulate(job.system, job.history, job.signal, job.horizon, job.dt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace swdelay
