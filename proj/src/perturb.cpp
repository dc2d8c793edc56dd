#include "swdelay/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "swdelay/errors.hpp"
#include "swdelay/rng.hpp"

namespace swdelay {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream s;
  s << m.rows() << "x" << m.cols();
  return s.str();
}

// Shape of a nonempty measure.
std::pair<std::size_t, std::size_t> measure_shape(const DelayMeasure& m) {
  if (!m.jumps().empty()) return {m.jumps().front().a.rows(), m.jumps().front().a.cols()};
  return {m.kernel()->rows(), m.kernel()->cols()};
}

Matrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<double> disturbance_delays(const SwitchedDelaySystem& sys, std::size_t k) {
  std::vector<double> delays;
  for (const DiscreteTerm& term : sys[k].discrete_terms()) delays.push_back(term.delay);
  if (delays.empty() && sys.h() > 0.0) delays.push_back(sys.h());
  return delays;
}

}  // namespace

StructureQuadruple StructureQuadruple::identity(std::size_t n) {
  const Matrix eye = Matrix::identity(n);
  return {eye, eye, eye, eye};
}

bool StructureQuadruple::nonnegative() const {
  return is_nonnegative(d0) && is_nonnegative(e0) && is_nonnegative(d1) && is_nonnegative(e1);
}

PerturbationStructure::PerturbationStructure(std::vector<StructureQuadruple> per_subsystem,
                                             std::size_t n)
    : quads_(std::move(per_subsystem)), n_(n) {
  for (std::size_t k = 0; k < quads_.size(); ++k) {
    const StructureQuadruple& q = quads_[k];
    if (q.d0.rows() != n || q.e0.cols() != n || q.d1.rows() != n || q.e1.cols() != n) {
      std::ostringstream msg;
      msg << "structure " << k << ": outer dimensions must equal n = " << n << " (D0 " << shape(q.d0)
          << ", E0 " << shape(q.e0) << ", D1 " << shape(q.d1) << ", E1 " << shape(q.e1) << ")";
      throw DimensionMismatch(msg.str());
    }
  }
}

PerturbationStructure PerturbationStructure::identity(std::size_t n, std::size_t subsystems) {
  return PerturbationStructure(std::vector<StructureQuadruple>(subsystems, StructureQuadruple::identity(n)),
                               n);
}

double SubsystemDisturbance::norm() const {
  double total = delta0.empty() ? 0.0 : inf_norm(delta0);
  if (!delta1.empty()) {
    const auto [rows, cols] = measure_shape(delta1);
    total += inf_norm(delta1.variation(rows, cols));
  }
  return total;
}

double disturbance_norm(const Disturbance& d) {
  double best = 0.0;
  for (const SubsystemDisturbance& sd : d) best = std::max(best, sd.norm());
  return best;
}

void check_compatible(const PerturbationStructure& p, const Disturbance& d) {
  if (d.size() != p.size()) {
    throw DimensionMismatch("disturbance and structure list different subsystem counts");
  }
  for (std::size_t k = 0; k < d.size(); ++k) {
    const StructureQuadruple& q = p[k];
    const SubsystemDisturbance& sd = d[k];
    if (sd.delta0.rows() != q.d0.cols() || sd.delta0.cols() != q.e0.rows()) {
      std::ostringstream msg;
      msg << "subsystem " << k << ": Delta is " << shape(sd.delta0) << ", structure expects "
          << q.d0.cols() << "x" << q.e0.rows();
      throw DimensionMismatch(msg.str());
    }
    if (!sd.delta1.empty()) {
      const auto [rows, cols] = measure_shape(sd.delta1);
      if (rows != q.d1.cols() || cols != q.e1.rows()) {
        std::ostringstream msg;
        msg << "subsystem " << k << ": delta is " << rows << "x" << cols << ", structure expects "
            << q.d1.cols() << "x" << q.e1.rows();
        throw DimensionMismatch(msg.str());
      }
    }
  }
}

SwitchedDelaySystem apply(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                          const Disturbance& d) {
  if (p.size() != sys.size() || p.dim() != sys.dim()) {
    throw DimensionMismatch("structure does not match the system");
  }
  check_compatible(p, d);
  std::vector<DelaySubsystem> out;
  out.reserve(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const StructureQuadruple& q = p[k];
    Matrix a0 = sys[k].a0() + q.d0 * d[k].delta0 * q.e0;
    DelayMeasure eta = sys[k].measure() + d[k].delta1.sandwiched(q.d1, q.e1);
    out.emplace_back(std::move(a0), std::move(eta));
  }
  return SwitchedDelaySystem(std::move(out), sys.h());
}

double structure_gain(const StructureQuadruple& q) {
  return std::max(inf_norm(q.d0) * inf_norm(q.e0), inf_norm(q.d1) * inf_norm(q.e1));
}

double structure_gain(const PerturbationStructure& p) {
  double best = 0.0;
  for (const StructureQuadruple& q : p.quadruples()) best = std::max(best, structure_gain(q));
  return best;
}

Disturbance zero_disturbance(const SwitchedDelaySystem& sys, const PerturbationStructure& p) {
  if (p.size() != sys.size()) throw DimensionMismatch("structure does not match the system");
  Disturbance d;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const StructureQuadruple& q = p[k];
    std::vector<DiscreteTerm> jumps;
    for (double delay : disturbance_delays(sys, k)) {
      jumps.push_back({delay, Matrix::zeros(q.d1.cols(), q.e1.rows())});
    }
    d.push_back({Matrix::zeros(q.d0.cols(), q.e0.rows()), DelayMeasure(std::move(jumps), std::nullopt)});
  }
  return d;
}

Disturbance sample_disturbance(const SwitchedDelaySystem& sys, const PerturbationStructure& p,
                               double target_norm, std::uint64_t seed) {
  if (!(target_norm >= 0.0) || !std::isfinite(target_norm)) {
    throw InvalidArgument("target norm must be finite and nonnegative");
  }
  if (p.size() != sys.size()) throw DimensionMismatch("structure does not match the system");
  SplitMix64 rng(seed);
  Disturbance d;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const StructureQuadruple& q = p[k];
    Matrix delta0 = random_matrix(q.d0.cols(), q.e0.rows(), rng);
    std::vector<DiscreteTerm> jumps;
    for (double delay : disturbance_delays(sys, k)) {
      jumps.push_back({delay, random_matrix(q.d1.cols(), q.e1.rows(), rng)});
    }
    SubsystemDisturbance sd{std::move(delta0), DelayMeasure(jumps, std::nullopt)};
    const double raw = sd.norm();
    const double scale = raw > 0.0 ? target_norm / raw : 0.0;
    for (DiscreteTerm& term : jumps) term.a *= scale;
    sd.delta0 *= scale;
    sd.delta1 = DelayMeasure(std::move(jumps), std::nullopt);
    d.push_back(std::move(sd));
  }
  return d;
}

}  // namespace swdelay
