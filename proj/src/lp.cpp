#include "swdelay/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swdelay/errors.hpp"

namespace swdelay {

namespace {

// Original variable x = offset + sum(sign * y[col]) over its standard-form columns.
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> columns;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows), cost_(cols + 1, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  double objective() const { return cost_[cols_]; }

  /// Installs reduced costs z_j = c_B B^{-1} a_j - c_j for a maximization cost.
  void set_cost(const std::vector<double>& c) {
    for (std::size_t j = 0; j < cols_; ++j) cost_[j] = -c[j];
    cost_[cols_] = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] += cb * at(r, j);
    }
  }

  void pivot(std::size_t pr, std::size_t pc, double tol) {
    const double p = at(pr, pc);
    for (std::size_t j = 0; j <= cols_; ++j) at(pr, j) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(r, j) -= f * at(pr, j);
      at(r, pc) = 0.0;
      if (std::fabs(rhs(r)) < tol) rhs(r) = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= f * at(pr, j);
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  enum class Outcome { Optimal, Unbounded };

  /// Primal simplex with Bland's rule over the columns allowed to enter.
  Outcome run(const std::vector<bool>& allowed, double tol, std::size_t& pivots,
              std::size_t max_pivots) {
    for (;;) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && cost_[j] < -tol) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return Outcome::Optimal;

      std::size_t leaving = rows_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, entering);
        if (a <= tol) continue;
        const double ratio = rhs(r) / a;
        if (leaving == rows_ || ratio < best_ratio - tol) {
          leaving = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tol && basis_[r] < basis_[leaving]) {
          // Bland: among tied rows the smallest basic index leaves.
          leaving = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving == rows_) return Outcome::Unbounded;

      if (pivots >= max_pivots) {
        std::ostringstream msg;
        msg << "simplex exceeded " << max_pivots << " pivots";
        throw IterationLimit(msg.str());
      }
      ++pivots;
      pivot(leaving, entering, tol);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution lp_solve(const LpProblem& problem, const LpOptions& options) {
  const std::size_t nx = problem.objective.size();
  if (!problem.bounds.empty() && problem.bounds.size() != nx) {
    throw DimensionMismatch("lp_solve: bounds size differs from objective size");
  }
  for (const LinearConstraint& c : problem.constraints) {
    if (c.coeffs.size() != nx) throw DimensionMismatch("lp_solve: constraint width differs");
  }
  const double tol = options.tolerance;

  // Standard form: y >= 0 columns, rows A y <= b.
  std::vector<VariableMap> maps(nx);
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (column, bound)
  std::size_t ny = 0;
  for (std::size_t j = 0; j < nx; ++j) {
    const VariableBounds b = problem.bounds.empty() ? VariableBounds{} : problem.bounds[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper) {
      throw InvalidArgument("lp_solve: invalid variable bounds");
    }
    if (std::isfinite(b.lower)) {
      maps[j] = {b.lower, {{ny, 1.0}}};
      if (std::isfinite(b.upper)) upper_rows.emplace_back(ny, b.upper - b.lower);
      ++ny;
    } else if (std::isfinite(b.upper)) {
      maps[j] = {b.upper, {{ny, -1.0}}};
      ++ny;
    } else {
      maps[j] = {0.0, {{ny, 1.0}, {ny + 1, -1.0}}};
      ny += 2;
    }
  }

  const std::size_t m = problem.constraints.size() + upper_rows.size();
  std::vector<std::vector<double>> rows(m, std::vector<double>(ny, 0.0));
  std::vector<double> b(m, 0.0);
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const LinearConstraint& c = problem.constraints[i];
    double rhs = c.rhs;
    for (std::size_t j = 0; j < nx; ++j) {
      rhs -= c.coeffs[j] * maps[j].offset;
      for (auto [col, sign] : maps[j].columns) rows[i][col] += c.coeffs[j] * sign;
    }
    b[i] = rhs;
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const std::size_t i = problem.constraints.size() + u;
    rows[i][upper_rows[u].first] = 1.0;
    b[i] = upper_rows[u].second;
  }

  std::vector<std::size_t> needs_artificial;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0.0) needs_artificial.push_back(i);

  const std::size_t slack0 = ny;
  const std::size_t art0 = ny + m;
  const std::size_t ncols = art0 + needs_artificial.size();
  Tableau tab(m, ncols);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ny; ++j) tab.at(i, j) = sign * rows[i][j];
    tab.at(i, slack0 + i) = sign;
    tab.rhs(i) = sign * b[i];
    tab.basis()[i] = slack0 + i;
  }
  for (std::size_t a = 0; a < needs_artificial.size(); ++a) {
    const std::size_t i = needs_artificial[a];
    tab.at(i, art0 + a) = 1.0;
    tab.basis()[i] = art0 + a;
  }

  std::size_t pivots = 0;
  double b_scale = 1.0;
  for (double v : b) b_scale = std::max(b_scale, std::fabs(v));

  if (!needs_artificial.empty()) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t j = art0; j < ncols; ++j) phase1[j] = -1.0;
    tab.set_cost(phase1);
    std::vector<bool> allowed(ncols, true);
    tab.run(allowed, tol, pivots, options.max_pivots);
    if (tab.objective() < -tol * b_scale) return {LpStatus::Infeasible, 0.0, {}};
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < art0) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::fabs(tab.at(r, j)) > tol) {
          tab.pivot(r, j, tol);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(ncols, 0.0);
  for (std::size_t j = 0; j < nx; ++j)
    for (auto [col, sign] : maps[j].columns) phase2[col] += problem.objective[j] * sign;
  tab.set_cost(phase2);
  std::vector<bool> allowed(ncols, true);
  for (std::size_t j = art0; j < ncols; ++j) allowed[j] = false;
  if (tab.run(allowed, tol, pivots, options.max_pivots) == Tableau::Outcome::Unbounded) {
    return {LpStatus::Unbounded, 0.0, {}};
  }

  std::vector<double> y(ncols, 0.0);
  for (std::size_t r = 0; r < m; ++r) y[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  LpSolution sol{LpStatus::Optimal, 0.0, std::vector<double>(nx, 0.0)};
  for (std::size_t j = 0; j < nx; ++j) {
    double x = maps[j].offset;
    for (auto [col, sign] : maps[j].columns) x += sign * y[col];
    if (!problem.bounds.empty()) {
      x = std::clamp(x, problem.bounds[j].lower, problem.bounds[j].upper);
    } else {
      x = std::max(x, 0.0);
    }
    sol.variables[j] = x;
    sol.objective += problem.objective[j] * x;
  }
  return sol;
}

}  // namespace swdelay
