#pragma once

#include <cstdio>
#include <optional>

#include "sgcm/game_core.hpp"
#include "sgcm/lp.hpp"

namespace sgcm {

// One stage game: leader/follower payoff-plus-continuation matrices,
// rows = leader actions, columns = follower actions.
struct StageMatrices {
  Matrix leader;    // U^A
  Matrix follower;  // U^B

  void validate() const {
    check_rectangular(leader, "U_A");
    check_rectangular(follower, "U_B");
    if (matrix_rows(leader) == 0 || matrix_cols(leader) == 0)
      throw ContractViolation("stage matrices: empty");
    if (matrix_rows(leader) != matrix_rows(follower) ||
        matrix_cols(leader) != matrix_cols(follower))
      throw ContractViolation("stage matrices: dimension mismatch");
  }
};

struct StageSolution {
  MixedPolicy leader_policy;
  int follower_action = 0;
  double leader_value = 0.0;
  double follower_value = 0.0;
};

// Folds stage utility plus discounted expected continuation value into the
// stage matrices. v_next == nullptr means last stage: continuation is the
// terminal utility of each successor.
inline StageMatrices build_stage_matrices(const StateId& s, const GameSpec& game,
                                          const ValueTable* v_next) {
  const int na = game.leader_action_count(s);
  const int nb = game.follower_action_count(s);
  if (na < 1 || nb < 1) throw ContractViolation("build_stage_matrices: empty action set");
  StageMatrices m;
  m.leader.assign(na, std::vector<double>(nb, 0.0));
  m.follower.assign(na, std::vector<double>(nb, 0.0));
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      auto [ua, ub] = game.stage_utility(s, i, j);
      double ca = 0.0, cb = 0.0;
      for (const auto& out : clean_distribution(game.transition(s, i, j))) {
        std::pair<double, double> v;
        if (v_next != nullptr) {
          if (!v_next->contains(out.to))
            throw SolverError("continuation value missing for state " + out.to.key);
          v = v_next->at(out.to);
        } else {
          v = game.terminal_utility(out.to);
        }
        ca += out.prob * v.first;
        cb += out.prob * v.second;
      }
      m.leader[i][j] = ua + game.discount * ca;
      m.follower[i][j] = ub + game.discount * cb;
    }
  }
  return m;
}

// All columns maximizing pi_A^T U_B e_j, ties within absolute tolerance.
inline std::vector<int> follower_best_response_set(const Matrix& u_b,
                                                   const MixedPolicy& pi_a,
                                                   double tol = 1e-9) {
  const std::size_t nb = matrix_cols(u_b);
  if (pi_a.size() != matrix_rows(u_b))
    throw ContractViolation("follower_best_response_set: dimension mismatch");
  std::vector<double> vals(nb);
  double best = -kInf;
  for (std::size_t j = 0; j < nb; ++j) {
    vals[j] = expected_stage_value(u_b, pi_a, static_cast<int>(j));
    best = std::max(best, vals[j]);
  }
  std::vector<int> out;
  for (std::size_t j = 0; j < nb; ++j)
    if (vals[j] >= best - tol) out.push_back(static_cast<int>(j));
  return out;
}

// Valid big-M for the complementarity bound: the gap lambda - (U_B^T x)_k is
// at most the value spread of U_B for any simplex x.
inline double default_big_m(const Matrix& u_b) {
  double max_abs = 0.0, lo = kInf, hi = -kInf;
  for (const auto& row : u_b)
    for (double v : row) {
      max_abs = std::max(max_abs, std::abs(v));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return 2.0 * max_abs + 2.0 * (hi - lo) + 1.0;
}

namespace detail {

inline StageSolution make_solution(const StageMatrices& m, MixedPolicy pi, int column) {
  // clamp LP dust and renormalize
  double sum = 0.0;
  for (auto& v : pi) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  if (sum <= 0.0) throw SolverError("stage solver: degenerate leader policy");
  for (auto& v : pi) v /= sum;
  StageSolution sol;
  sol.leader_value = expected_stage_value(m.leader, pi, column);
  sol.follower_value = expected_stage_value(m.follower, pi, column);
  sol.leader_policy = std::move(pi);
  sol.follower_action = column;
  return sol;
}

// LP node of the MILP with the follower one-hot fixed to column j.
// Variables: z (na*nb joint distribution, row-major) then lambda.
inline std::optional<std::pair<double, MixedPolicy>> milp_node(const StageMatrices& m,
                                                               int j, double big_m) {
  const int na = static_cast<int>(matrix_rows(m.leader));
  const int nb = static_cast<int>(matrix_cols(m.leader));
  const int nz = na * nb;
  const int lam = nz;
  LinearProgram lp;
  lp.objective.assign(nz + 1, 0.0);
  for (int i = 0; i < na; ++i)
    for (int k = 0; k < nb; ++k) lp.objective[i * nb + k] = m.leader[i][k];
  lp.lower.assign(nz + 1, 0.0);
  lp.upper.assign(nz + 1, 1.0);
  lp.lower[lam] = -kInf;
  lp.upper[lam] = kInf;

  // sum z = 1
  {
    std::vector<double> row(nz + 1, 0.0);
    for (int v = 0; v < nz; ++v) row[v] = 1.0;
    lp.eq_coeffs.push_back(std::move(row));
    lp.eq_values.push_back(1.0);
  }
  auto add_ineq = [&](std::vector<double> row, double ub) {
    lp.ineq_coeffs.push_back(std::move(row));
    lp.ineq_upper.push_back(ub);
  };
  // row sums <= 1
  for (int i = 0; i < na; ++i) {
    std::vector<double> row(nz + 1, 0.0);
    for (int k = 0; k < nb; ++k) row[i * nb + k] = 1.0;
    add_ineq(std::move(row), 1.0);
  }
  // pi_B <= column sums <= 1
  for (int k = 0; k < nb; ++k) {
    std::vector<double> row(nz + 1, 0.0);
    for (int i = 0; i < na; ++i) row[i * nb + k] = 1.0;
    if (k == j) {
      auto neg = row;
      for (auto& v : neg) v = -v;
      add_ineq(std::move(neg), -1.0);
    }
    add_ineq(std::move(row), 1.0);
  }
  // 0 <= lambda - (U_B^T (z 1))_k <= M (1 - pi_B_k), with x_i = sum_k z_ik
  for (int k = 0; k < nb; ++k) {
    std::vector<double> up(nz + 1, 0.0);
    up[lam] = 1.0;
    for (int i = 0; i < na; ++i)
      for (int c = 0; c < nb; ++c) up[i * nb + c] = -m.follower[i][k];
    auto lo = up;
    for (auto& v : lo) v = -v;
    add_ineq(std::move(up), k == j ? 0.0 : big_m);
    add_ineq(std::move(lo), 0.0);
  }

  LpResult res = lp_solve(lp);
  if (res.status == LpStatus::Infeasible) return std::nullopt;
  if (res.status != LpStatus::Optimal)
    throw SolverError("stage milp: node LP unbounded");
  MixedPolicy pi(na, 0.0);
  for (int i = 0; i < na; ++i)
    for (int k = 0; k < nb; ++k) pi[i] += res.x[i * nb + k];
  return std::make_pair(res.objective, std::move(pi));
}

}  // namespace detail

// Big-M MILP reformulation of the leader's bilevel stage problem. The one-hot
// follower binaries are searched exhaustively, each fixing yielding one LP
// node. Tie-breaking is optimistic: among follower best responses the
// objective selects the column best for the leader, lowest index on exact ties.
inline StageSolution solve_stackelberg_milp(const StageMatrices& m, double big_m) {
  m.validate();
  const int nb = static_cast<int>(matrix_cols(m.leader));
  double best = -kInf;
  int best_col = -1;
  MixedPolicy best_pi;
  for (int j = 0; j < nb; ++j) {
    auto node = detail::milp_node(m, j, big_m);
    if (!node) continue;
    if (node->first > best) {
      best = node->first;
      best_col = j;
      best_pi = std::move(node->second);
    }
  }
  if (best_col < 0) throw SolverError("stage milp: all nodes infeasible");
  return detail::make_solution(m, std::move(best_pi), best_col);
}

inline StageSolution solve_stackelberg_milp(const StageMatrices& m) {
  m.validate();
  return solve_stackelberg_milp(m, default_big_m(m.follower));
}

// Verification oracle: one LP per follower pure strategy, constrained so that
// the chosen column is a best response to the leader's commitment.
inline StageSolution solve_stackelberg_multilp(const StageMatrices& m) {
  m.validate();
  const int na = static_cast<int>(matrix_rows(m.leader));
  const int nb = static_cast<int>(matrix_cols(m.leader));
  double best = -kInf;
  int best_col = -1;
  MixedPolicy best_pi;
  for (int j = 0; j < nb; ++j) {
    LinearProgram lp;
    lp.objective.resize(na);
    for (int i = 0; i < na; ++i) lp.objective[i] = m.leader[i][j];
    lp.lower.assign(na, 0.0);
    lp.upper.assign(na, 1.0);
    lp.eq_coeffs.assign(1, std::vector<double>(na, 1.0));
    lp.eq_values.assign(1, 1.0);
    for (int k = 0; k < nb; ++k) {
      if (k == j) continue;
      std::vector<double> row(na);
      for (int i = 0; i < na; ++i) row[i] = m.follower[i][k] - m.follower[i][j];
      lp.ineq_coeffs.push_back(std::move(row));
      lp.ineq_upper.push_back(0.0);
    }
    LpResult res = lp_solve(lp);
    if (res.status == LpStatus::Infeasible) continue;  // column never a best response
    if (res.status != LpStatus::Optimal)
      throw SolverError("stage multilp: LP unbounded");
    if (res.objective > best) {
      best = res.objective;
      best_col = j;
      best_pi = std::move(res.x);
    }
  }
  if (best_col < 0) throw SolverError("stage multilp: all LPs infeasible");
  return detail::make_solution(m, std::move(best_pi), best_col);
}

// Plain-text dump of a stage game for CLI inspection.
inline std::string dump_stage_game(const StageMatrices& m) {
  auto print_matrix = [](const Matrix& u, const char* label) {
    std::string out = label;
    out += "\n";
    char buf[64];
    for (const auto& row : u) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.10g", row[j]);
        out += buf;
        out += (j + 1 == row.size()) ? "\n" : " ";
      }
    }
    return out;
  };
  return print_matrix(m.leader, "U_A") + print_matrix(m.follower, "U_B");
}

}  // namespace sgcm
