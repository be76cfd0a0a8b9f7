#pragma once

#include <algorithm>
#include <limits>

#include "sgcm/common.hpp"

namespace sgcm {

enum class LpStatus { Optimal, Infeasible, Unbounded };

constexpr double kInf = std::numeric_limits<double>::infinity();

// max objective . x
// s.t. ineq_coeffs x <= ineq_upper
//      eq_coeffs x == eq_values
//      lower <= x <= upper   (entries may be +-inf; empty bounds mean [0, inf))
struct LinearProgram {
  std::vector<double> objective;
  Matrix ineq_coeffs;
  std::vector<double> ineq_upper;
  Matrix eq_coeffs;
  std::vector<double> eq_values;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

namespace detail {

// Dense two-phase primal simplex. Bland's rule throughout: deterministic and
// cycle-free, which matters more than pivot count at these problem sizes.
class SimplexTableau {
 public:
  SimplexTableau(Matrix rows, std::vector<double> rhs, std::vector<double> cost,
                 std::size_t num_structural)
      : a_(std::move(rows)), b_(std::move(rhs)), cost_(std::move(cost)),
        n_struct_(num_structural) {
    m_ = a_.size();
    n_ = m_ ? a_[0].size() : cost_.size();
    for (std::size_t r = 0; r < m_; ++r) {
      if (b_[r] < 0.0) {
        for (auto& v : a_[r]) v = -v;
        b_[r] = -b_[r];
      }
    }
    // artificial basis
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      std::size_t art = n_ + r;
      for (auto& row : a_) row.push_back(0.0);
      a_[r][art] = 1.0;
      basis_[r] = art;
    }
    first_artificial_ = n_;
    n_ += m_;
    cost_.resize(n_, 0.0);
    phase1_.assign(n_, 0.0);
    for (std::size_t j = first_artificial_; j < n_; ++j) phase1_[j] = 1.0;
    canonicalize(phase1_, phase1_value_);
    canonicalize(cost_, cost_value_);
  }

  // minimize phase-1 then phase-2 cost; returns false on infeasible.
  LpStatus solve() {
    run(phase1_, phase1_value_, /*blocked_from=*/n_);
    // value_ tracks -(objective of the current basic solution)
    if (-phase1_value_ > 1e-7) return LpStatus::Infeasible;
    drive_out_artificials();
    return run(cost_, cost_value_, /*blocked_from=*/first_artificial_);
  }

  std::vector<double> solution() const {
    std::vector<double> x(first_artificial_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < first_artificial_) x[basis_[r]] = b_[r];
    return x;
  }

 private:
  static constexpr double kEps = 1e-9;

  void canonicalize(std::vector<double>& cost, double& value) {
    for (std::size_t r = 0; r < m_; ++r) {
      double c = cost[basis_[r]];
      if (c == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) cost[j] -= c * a_[r][j];
      value -= c * b_[r];
    }
  }

  LpStatus run(std::vector<double>& cost, double& value, std::size_t blocked_from) {
    const std::size_t max_iters = 20000 + 100 * (m_ + n_);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > max_iters) throw SolverError("simplex: iteration cap exceeded");
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j >= blocked_from) continue;
        if (cost[j] < -kEps) { enter = j; break; }
      }
      if (enter == n_) return LpStatus::Optimal;
      std::size_t leave = m_;
      double best_ratio = kInf;
      for (std::size_t r = 0; r < m_; ++r) {
        if (a_[r][enter] <= kEps) continue;
        double ratio = b_[r] / a_[r][enter];
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && (leave == m_ || basis_[r] < basis_[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == m_) return LpStatus::Unbounded;
      pivot(leave, enter, cost, value);
    }
  }

  void pivot(std::size_t row, std::size_t col, std::vector<double>& cost, double& value) {
    double p = a_[row][col];
    for (std::size_t j = 0; j < n_; ++j) a_[row][j] /= p;
    b_[row] /= p;
    a_[row][col] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      double f = a_[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) a_[r][j] -= f * a_[row][j];
      a_[r][col] = 0.0;
      b_[r] -= f * b_[row];
      if (b_[r] < 0.0 && b_[r] > -1e-11) b_[r] = 0.0;
    }
    for (auto* c : {&phase1_, &cost_}) {
      if (c != &cost && c->size() == n_) {
        double f = (*c)[col];
        if (f != 0.0) {
          for (std::size_t j = 0; j < n_; ++j) (*c)[j] -= f * a_[row][j];
          (*c)[col] = 0.0;
          (c == &phase1_ ? phase1_value_ : cost_value_) -= f * b_[row];
        }
      }
    }
    {
      double f = cost[col];
      if (f != 0.0) {
        for (std::size_t j = 0; j < n_; ++j) cost[j] -= f * a_[row][j];
        cost[col] = 0.0;
        value -= f * b_[row];
      }
    }
    basis_[row] = col;
  }

  // Pivot zero-valued basic artificials onto structural columns where possible;
  // rows with no eligible column are redundant and keep their artificial at 0.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(a_[r][j]) > 1e-7) {
          pivot(r, j, cost_, cost_value_);
          break;
        }
      }
    }
  }

  Matrix a_;
  std::vector<double> b_;
  std::vector<double> cost_;    // phase-2 reduced costs (minimization)
  std::vector<double> phase1_;  // phase-1 reduced costs
  double cost_value_ = 0.0;
  double phase1_value_ = 0.0;
  std::vector<std::size_t> basis_;
  std::size_t m_ = 0, n_ = 0;
  std::size_t n_struct_ = 0;
  std::size_t first_artificial_ = 0;
};

}  // namespace detail

inline LpResult lp_solve(const LinearProgram& p) {
  const std::size_t n = p.objective.size();
  check_rectangular(p.ineq_coeffs, "lp ineq");
  check_rectangular(p.eq_coeffs, "lp eq");
  for (const auto& row : p.ineq_coeffs)
    if (row.size() != n) throw ContractViolation("lp: ineq column count mismatch");
  for (const auto& row : p.eq_coeffs)
    if (row.size() != n) throw ContractViolation("lp: eq column count mismatch");
  if (p.ineq_coeffs.size() != p.ineq_upper.size() || p.eq_coeffs.size() != p.eq_values.size())
    throw ContractViolation("lp: constraint/rhs count mismatch");

  std::vector<double> lower = p.lower, upper = p.upper;
  lower.resize(n, 0.0);
  upper.resize(n, kInf);

  // Substitute each variable by nonnegative internals:
  //   finite lower:  x = lo + y
  //   upper only:    x = hi - y
  //   free:          x = y+ - y-
  struct VarMap {
    std::size_t col;          // first internal column
    double scale;             // +-1 applied to that column
    double offset;
    bool split;               // free variable, second column is col+1
  };
  std::vector<VarMap> vmap(n);
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] > upper[i]) return {LpStatus::Infeasible, {}, 0.0};
    if (std::isfinite(lower[i])) {
      vmap[i] = {cols++, 1.0, lower[i], false};
    } else if (std::isfinite(upper[i])) {
      vmap[i] = {cols++, -1.0, upper[i], false};
    } else {
      vmap[i] = {cols, 1.0, 0.0, true};
      cols += 2;
    }
  }

  Matrix rows;
  std::vector<double> rhs;
  std::vector<bool> is_eq;
  auto add_row = [&](const std::vector<double>& coef, double b, bool eq) {
    std::vector<double> r(cols, 0.0);
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = coef[i];
      if (c == 0.0) continue;
      r[vmap[i].col] += c * vmap[i].scale;
      if (vmap[i].split) r[vmap[i].col + 1] -= c;
      shift += c * vmap[i].offset;
    }
    rows.push_back(std::move(r));
    rhs.push_back(b - shift);
    is_eq.push_back(eq);
  };
  for (std::size_t r = 0; r < p.ineq_coeffs.size(); ++r)
    add_row(p.ineq_coeffs[r], p.ineq_upper[r], false);
  for (std::size_t r = 0; r < p.eq_coeffs.size(); ++r)
    add_row(p.eq_coeffs[r], p.eq_values[r], true);
  // residual upper bounds become rows
  for (std::size_t i = 0; i < n; ++i) {
    if (!vmap[i].split && std::isfinite(lower[i]) && std::isfinite(upper[i])) {
      std::vector<double> unit(n, 0.0);
      unit[i] = 1.0;
      add_row(unit, upper[i], false);
    }
  }

  // slacks for inequality rows
  std::size_t num_slacks = 0;
  for (bool eq : is_eq)
    if (!eq) ++num_slacks;
  std::size_t slack_col = cols;
  for (auto& row : rows) row.resize(cols + num_slacks, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!is_eq[r]) rows[r][slack_col++] = 1.0;

  // internal sense: minimize -objective
  std::vector<double> cost(cols + num_slacks, 0.0);
  double const_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double c = p.objective[i];
    if (!std::isfinite(c)) throw ContractViolation("lp: non-finite objective");
    cost[vmap[i].col] -= c * vmap[i].scale;
    if (vmap[i].split) cost[vmap[i].col + 1] += c;
    const_term += c * vmap[i].offset;
  }

  detail::SimplexTableau tab(std::move(rows), std::move(rhs), std::move(cost), cols);
  LpStatus status = tab.solve();
  if (status != LpStatus::Optimal) return {status, {}, 0.0};

  std::vector<double> internal = tab.solution();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double y = internal[vmap[i].col] * vmap[i].scale;
    if (vmap[i].split) y -= internal[vmap[i].col + 1];
    x[i] = y + vmap[i].offset;
  }
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) obj += p.objective[i] * x[i];
  (void)const_term;
  return {LpStatus::Optimal, std::move(x), obj};
}

}  // namespace sgcm
