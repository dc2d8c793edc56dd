#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "swdelay/errors.hpp"
#include "swdelay/lclf.hpp"
#include "swdelay/simulate.hpp"

using namespace swdelay;

namespace {

SwitchedDelaySystem scalar_dde(double a, double b, double delay) {
  return SwitchedDelaySystem({DelaySubsystem(Matrix{{a}}, {{delay, Matrix{{b}}}})}, delay);
}

History exponential_history(double rate) {
  return [rate](double t) { return Vector{std::exp(rate * t)}; };
}

double error_at_end(const SwitchedDelaySystem& sys, double rate, double horizon, double dt) {
  const Trajectory traj = simulate(sys, exponential_history(rate), SwitchingSignal::constant(0), horizon, dt);
  return std::fabs(traj.states.back()[0] - std::exp(rate * horizon));
}

SwitchingSignal ex1_periodic() { return SwitchingSignal::periodic({{0, 2.0}, {1, 1.0}}); }

}  // namespace

TEST(Simulate, ScalarOdeMatchesExponential) {
  const Trajectory traj =
      simulate(fixtures::scalar_system(-1.0), constant_history({1.0}), SwitchingSignal::constant(0), 1.0, 0.01);
  ASSERT_EQ(traj.size(), 101u);
  EXPECT_FALSE(traj.diverged);
  EXPECT_DOUBLE_EQ(traj.times.front(), 0.0);
  EXPECT_NEAR(traj.times.back(), 1.0, 1e-12);
  EXPECT_NEAR(traj.states.back()[0], std::exp(-1.0), 1e-8);
}

TEST(Simulate, PureDelayFollowsPolynomialPieces) {
  // x' = -x(t - 1) with x = 1 on [-1, 0]: 1 - t, then 1 - t + (t - 1)^2 / 2.
  const Trajectory traj = simulate(scalar_dde(0.0, -1.0, 1.0), constant_history({1.0}), SwitchingSignal::constant(0),
                                   2.0, 0.01);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double t = traj.times[j];
    const double exact = t <= 1.0 ? 1.0 - t : 1.0 - t + 0.5 * (t - 1.0) * (t - 1.0);
    EXPECT_NEAR(traj.states[j][0], exact, 1e-8) << "t = " << t;
  }
}

TEST(Simulate, SignedScalarMatchesClosedForm) {
  // x' = a x + b x(t - 1), x = 1 on [-1, 0]: x = (1 + b/a) e^{at} - b/a on [0, 1].
  const double a = -2.0, b = -1.5;
  const Trajectory traj =
      simulate(scalar_dde(a, b, 1.0), constant_history({1.0}), SwitchingSignal::constant(0), 1.0, 0.01);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double t = traj.times[j];
    EXPECT_NEAR(traj.states[j][0], (1.0 + b / a) * std::exp(a * t) - b / a, 1e-8);
  }
  EXPECT_FALSE(positivity_check(traj));
}

TEST(Simulate, FamilyInR2DecaysUnderPeriodicSwitching) {
  const SwitchedDelaySystem sys = fixtures::ex1_system();
  const History phi = constant_history({1.0, 1.0});
  const Trajectory traj = simulate(sys, phi, ex1_periodic(), 20.0, 0.005);
  EXPECT_FALSE(traj.diverged);
  EXPECT_LT(inf_norm(traj.states.back()), 1e-6);
  EXPECT_TRUE(positivity_check(traj));
  const LclfCertificate cert = *find_common_lclf(sys).certificate;
  EXPECT_TRUE(decay_envelope_check(traj, cert, history_norm(phi, sys.h(), 0.005)));
  // Switching pattern: two time units on subsystem 1, one on subsystem 2.
  EXPECT_EQ(traj.active[0], 0u);
  EXPECT_EQ(traj.active[399], 0u);
  EXPECT_EQ(traj.active[400], 1u);
  EXPECT_EQ(traj.active[600], 0u);
}

TEST(Simulate, ZeroHistoryStaysZero) {
  const Trajectory traj = simulate(fixtures::ex2_system(), constant_history({0.0, 0.0, 0.0}),
                                   SwitchingSignal::random_dwell(0.5, 1.5, 3), 5.0, 0.05);
  for (const Vector& x : traj.states)
    for (double v : x) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, ConstantSignalEqualsSingleSubsystem) {
  const SwitchedDelaySystem sys = fixtures::ex2_system();
  const History phi = [](double t) { return Vector{1.0 + t, 2.0, std::cos(t)}; };
  for (std::size_t k = 0; k < 2; ++k) {
    const Trajectory switched = simulate(sys, phi, SwitchingSignal::constant(k), 4.0, 0.05);
    const Trajectory alone = simulate(SwitchedDelaySystem({sys[k]}, sys.h()), phi, SwitchingSignal::constant(0), 4.0, 0.05);
    ASSERT_EQ(switched.size(), alone.size());
    for (std::size_t j = 0; j < switched.size(); ++j) EXPECT_EQ(switched.states[j], alone.states[j]);
  }
}

TEST(Simulate, LinearInTheHistory) {
  const SwitchedDelaySystem sys = fixtures::ex2_system();
  const History phi = [](double t) { return Vector{1.0 + t, 0.5, std::sin(3.0 * t)}; };
  const History twice = [&](double t) {
    Vector v = phi(t);
    for (double& x : v) x *= 2.0;
    return v;
  };
  const SwitchingSignal signal = SwitchingSignal::random_dwell(0.25, 1.0, 11);
  const Trajectory a = simulate(sys, phi, signal, 6.0, 0.05);
  const Trajectory b = simulate(sys, twice, signal, 6.0, 0.05);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(b.states[j][i], 2.0 * a.states[j][i]);
}

TEST(Simulate, FourthOrderWithDiscreteDelay) {
  // x' = -1.5 x + (0.5 / e) x(t - 1) has the solution e^{-t} for history e^{theta}.
  const SwitchedDelaySystem sys = scalar_dde(-1.5, 0.5 / std::exp(1.0), 1.0);
  double previous = error_at_end(sys, -1.0, 3.0, 0.2);
  for (double dt : {0.1, 0.05, 0.025}) {
    const double err = error_at_end(sys, -1.0, 3.0, dt);
    EXPECT_GE(previous / err, 8.0) << "dt = " << dt;
    previous = err;
  }
  EXPECT_LT(previous, 1e-8);
}

TEST(Simulate, SecondOrderWithDistributedKernel) {
  // x' = -x + int_{-1}^0 b x(t + s) ds has the solution e^{-t/2} for b = 0.25 / (e^{1/2} - 1).
  const double b = 0.25 / (std::exp(0.5) - 1.0);
  const SwitchedDelaySystem sys(
      {DelaySubsystem(Matrix{{-1.0}}, {}, DistributedKernel({-1.0, 0.0}, {Matrix{{b}}, Matrix{{b}}}))}, 1.0);
  double previous = error_at_end(sys, -0.5, 3.0, 0.1);
  for (double dt : {0.05, 0.025, 0.0125}) {
    const double err = error_at_end(sys, -0.5, 3.0, dt);
    EXPECT_GE(previous / err, 3.0) << "dt = " << dt;
    previous = err;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(Simulate, DivergenceStopsTheTrajectory) {
  const Trajectory traj =
      simulate(fixtures::scalar_system(1.0), constant_history({1.0}), SwitchingSignal::constant(0), 40.0, 0.01);
  EXPECT_TRUE(traj.diverged);
  EXPECT_LT(traj.times.back(), 40.0);
  EXPECT_GT(traj.states.back()[0], 1e12);
  EXPECT_LT(traj.states[traj.size() - 2][0], 1e12);
}

TEST(Simulate, StepMismatchAndArgumentErrors) {
  const SwitchedDelaySystem sys = fixtures::ex1_system();
  const History phi = constant_history({1.0, 1.0});
  EXPECT_THROW(simulate(sys, phi, ex1_periodic(), 20.0, 0.003), StepMismatch);
  EXPECT_THROW(simulate(sys, phi, ex1_periodic(), 20.001, 0.01), StepMismatch);
  EXPECT_THROW(simulate(sys, phi, SwitchingSignal::periodic({{0, 0.015}, {1, 1.0}}), 20.0, 0.01), StepMismatch);
  EXPECT_THROW(simulate(sys, phi, SwitchingSignal::constant(2), 20.0, 0.01), InvalidArgument);
  EXPECT_THROW(simulate(sys, constant_history({1.0}), ex1_periodic(), 20.0, 0.01), DimensionMismatch);
  EXPECT_THROW(simulate(sys, phi, ex1_periodic(), 20.0, -0.01), InvalidArgument);
  // A kernel needs h on the grid too.
  const SwitchedDelaySystem kernel_sys({fixtures::ex2_bound()}, 2.0);
  EXPECT_THROW(simulate(kernel_sys, constant_history({1.0, 1.0, 1.0}), SwitchingSignal::constant(0), 2.0, 0.3),
               StepMismatch);
}

TEST(SwitchingSignal, SamplesAndValidation) {
  const std::vector<std::size_t> p = SwitchingSignal::periodic({{1, 0.2}, {0, 0.1}}).sample(2, 0.1, 7);
  EXPECT_EQ(p, (std::vector<std::size_t>{1, 1, 0, 1, 1, 0, 1}));
  const std::vector<std::size_t> r = SwitchingSignal::random_dwell(0.3, 0.5, 9).sample(3, 0.1, 400);
  EXPECT_EQ(r, SwitchingSignal::random_dwell(0.3, 0.5, 9).sample(3, 0.1, 400));
  // Runs of equal indices last 3 to 5 steps, except the truncated last one.
  std::size_t start = 0;
  for (std::size_t j = 1; j <= r.size(); ++j) {
    if (j == r.size() || r[j] != r[start]) {
      if (j < r.size()) {
        EXPECT_GE(j - start, 3u);
        EXPECT_LE(j - start, 5u);
      }
      start = j;
    }
  }
  EXPECT_THROW(SwitchingSignal::random_dwell(0.31, 0.39, 1).sample(2, 0.1, 10), StepMismatch);
  EXPECT_THROW(SwitchingSignal::random_dwell(0.5, 0.3, 1), InvalidArgument);
  EXPECT_THROW(SwitchingSignal::periodic({}), InvalidArgument);
  EXPECT_EQ(steps_in(1.0, 0.25, "x"), 4u);
  EXPECT_THROW(steps_in(1.0, 0.3, "x"), StepMismatch);
}

TEST(WriteCsv, HeaderRowsAndOneBasedSignal) {
  const Trajectory traj = simulate(fixtures::ex1_system(), constant_history({1.0, 0.5}),
                                   SwitchingSignal::constant(1), 0.02, 0.01);
  std::ostringstream out;
  write_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,sigma");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,0.5,2");
  int rows = 1;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.back(), '2');
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
  }
  EXPECT_EQ(rows, 3);
}

TEST(SimulateBatch, OrderedAndDeterministic) {
  std::vector<SimulationJob> jobs;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    jobs.push_back({fixtures::ex1_system(), constant_history({1.0, 2.0}), SwitchingSignal::random_dwell(0.5, 2.0, seed),
                    10.0, 0.01});
  }
  const std::vector<Trajectory> one = simulate_batch(jobs, 1);
  const std::vector<Trajectory> many = simulate_batch(jobs, 4);
  ASSERT_EQ(one.size(), jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Trajectory direct = simulate(jobs[i].system, jobs[i].history, jobs[i].signal, jobs[i].horizon, jobs[i].dt);
    EXPECT_EQ(one[i].states, direct.states);
    EXPECT_EQ(many[i].states, direct.states);
    EXPECT_EQ(many[i].active, direct.active);
  }
  jobs[5].dt = 0.003;
  EXPECT_THROW(simulate_batch(jobs, 3), StepMismatch);
  EXPECT_TRUE(simulate_batch({}, 0).empty());
}

TEST(SimulateProperties, CertifiedSystemsStayInsideTheDecayEnvelope) {
  SplitMix64 rng(2718);
  std::vector<SimulationJob> jobs;
  std::vector<LclfCertificate> certs;
  std::vector<double> norms;
  for (int attempt = 0; attempt < 1000 && certs.size() < 50; ++attempt) {
    const std::size_t n = 2 + attempt % 2;
    std::vector<DelaySubsystem> subs;
    for (int k = 0; k < 2; ++k) subs.push_back(oracles::random_positive_subsystem(n, 1.0, attempt % 3 == 0, rng));
    const SwitchedDelaySystem sys(subs, 1.0);
    const LclfSearch search = find_common_lclf(sys);
    if (!search.certified()) continue;
    Vector x0(n);
    for (double& v : x0) v = rng.uniform(0.1, 1.0);
    const History phi = constant_history(x0);
    for (int s = 0; s < 10; ++s) {
      jobs.push_back({sys, phi, SwitchingSignal::random_dwell(0.1, 1.0, rng.next()), 8.0, 0.01});
    }
    certs.push_back(*search.certificate);
    norms.push_back(history_norm(phi, 1.0, 0.01));
  }
  ASSERT_EQ(certs.size(), 50u);
  const std::vector<Trajectory> trajs = simulate_batch(jobs, 0);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    EXPECT_FALSE(trajs[i].diverged);
    EXPECT_TRUE(positivity_check(trajs[i])) << "job " << i;
    EXPECT_TRUE(decay_envelope_check(trajs[i], certs[i / 10], norms[i / 10])) << "job " << i;
  }
}
