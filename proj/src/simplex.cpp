#include "locality_sched/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace locsched {
namespace {

constexpr double kEps = 1e-9;

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // structural + slack + artificial
  std::vector<std::vector<double>> a;
  std::vector<double> rhs;
  std::vector<std::size_t> basis;   // basic column per row
  std::vector<double> cost;         // reduced-cost row
  double cost_rhs = 0.0;            // negated objective value
  std::size_t first_artificial = 0; // columns >= this are artificial

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / a[r][s];
    for (std::size_t j = 0; j < cols; ++j) a[r][j] *= inv;
    rhs[r] *= inv;
    a[r][s] = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a[i][s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      a[i][s] = 0.0;
      rhs[i] -= f * rhs[r];
    }
    const double fc = cost[s];
    if (fc != 0.0) {
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= fc * a[r][j];
      cost[s] = 0.0;
      cost_rhs -= fc * rhs[r];
    }
    basis[r] = s;
  }

  // Rebuilds the reduced-cost row for the given objective over the current basis.
  void load_costs(const std::vector<double>& c) {
    cost.assign(cols, 0.0);
    for (std::size_t j = 0; j < c.size() && j < cols; ++j) cost[j] = c[j];
    cost_rhs = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double cb = basis[i] < c.size() ? c[basis[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= cb * a[i][j];
      cost_rhs -= cb * rhs[i];
    }
  }

  // Bland's rule: entering = lowest-index improving column, leaving = min
  // ratio with lowest basic index on ties. allow_artificial gates whether
  // artificial columns may enter.
  void optimize(bool allow_artificial) {
    const std::size_t max_iters = 2000 + 200 * (rows + cols);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > max_iters) throw std::runtime_error("simplex: iteration limit exceeded");
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allow_artificial && j >= first_artificial) break;
        if (cost[j] < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return;  // optimal
      std::size_t leave = rows;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        if (a[i][enter] <= kEps) continue;
        const double ratio = rhs[i] / a[i][enter];
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && (leave == rows || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == rows) throw std::runtime_error("simplex: unbounded program");
      pivot(leave, enter);
    }
  }
};

}  // namespace

SimplexSolution solve_simplex(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw std::invalid_argument("simplex: objective size mismatch");
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != n) throw std::invalid_argument("simplex: constraint size mismatch");

  const std::size_t m = lp.constraints.size();
  std::size_t num_slack = 0;
  for (const auto& c : lp.constraints)
    if (c.relation == LinearConstraint::Relation::LessEqual) ++num_slack;

  Tableau t;
  t.rows = m;
  t.first_artificial = n + num_slack;
  t.cols = t.first_artificial + m;  // at most one artificial per row
  t.a.assign(m, std::vector<double>(t.cols, 0.0));
  t.rhs.assign(m, 0.0);
  t.basis.assign(m, 0);

  std::size_t slack_idx = n;
  std::size_t num_artificial = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    const double sign = c.rhs < 0.0 ? -1.0 : 1.0;  // normalize rhs >= 0
    for (std::size_t j = 0; j < n; ++j) t.a[i][j] = sign * c.coeffs[j];
    t.rhs[i] = sign * c.rhs;
    bool basic_found = false;
    if (c.relation == LinearConstraint::Relation::LessEqual) {
      t.a[i][slack_idx] = sign;
      if (sign > 0.0) {
        t.basis[i] = slack_idx;
        basic_found = true;
      }
      ++slack_idx;
    }
    if (!basic_found) {
      const std::size_t art = t.first_artificial + num_artificial;
      t.a[i][art] = 1.0;
      t.basis[i] = art;
      ++num_artificial;
    }
  }
  t.cols = t.first_artificial + num_artificial;
  for (auto& row : t.a) row.resize(t.cols);

  // Phase 1: minimize the sum of artificials.
  if (num_artificial > 0) {
    std::vector<double> phase1(t.cols, 0.0);
    for (std::size_t j = t.first_artificial; j < t.cols; ++j) phase1[j] = 1.0;
    t.load_costs(phase1);
    t.optimize(true);
    const double infeas = -t.cost_rhs;
    if (infeas > 1e-7) throw std::runtime_error("simplex: infeasible program");
    // Drive lingering artificials out of the basis where possible.
    for (std::size_t i = 0; i < t.rows; ++i) {
      if (t.basis[i] < t.first_artificial) continue;
      for (std::size_t j = 0; j < t.first_artificial; ++j) {
        if (std::fabs(t.a[i][j]) > kEps) {
          t.pivot(i, j);
          break;
        }
      }
      // A row that stays artificial is redundant; its artificial is pinned at
      // zero and barred from re-entering in phase 2.
    }
  }

  // Phase 2: the real objective.
  std::vector<double> phase2(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  t.load_costs(phase2);
  t.optimize(false);

  SimplexSolution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows; ++i)
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace locsched
