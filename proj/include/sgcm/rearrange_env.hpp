#pragma once

#include <array>
#include <set>

#include "sgcm/game_core.hpp"

namespace sgcm {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

// Partitioned 2D workspace with one goal cell per object type.
struct Workspace {
  int rows = 3;
  int cols = 3;
  std::vector<std::string> type_names = {"red", "green", "blue"};
  std::vector<Cell> goal_cell = {{2, 0}, {2, 1}, {2, 2}};

  int num_types() const { return static_cast<int>(type_names.size()); }
  int num_cells() const { return rows * cols; }
  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
  }
  int cell_index(Cell c) const { return c.row * cols + c.col; }

  void validate() const {
    if (rows < 1 || cols < 1) throw ValidationError("workspace: non-positive dimensions");
    if (goal_cell.size() != type_names.size())
      throw ValidationError("workspace: one goal cell required per type");
    std::set<std::pair<int, int>> seen;
    for (Cell g : goal_cell) {
      if (!in_bounds(g)) throw ValidationError("workspace: goal cell out of bounds");
      if (!seen.insert({g.row, g.col}).second)
        throw ValidationError("workspace: duplicate goal cell");
    }
  }
};

// Object counts per cell and type, cell-major (row-major cells, type-major
// within a cell). Objects of the same type are indistinguishable.
struct GridState {
  std::vector<int> counts;

  int& at(const Workspace& ws, Cell c, int type) {
    return counts[ws.cell_index(c) * ws.num_types() + type];
  }
  int at(const Workspace& ws, Cell c, int type) const {
    return counts[ws.cell_index(c) * ws.num_types() + type];
  }
  int cell_total(const Workspace& ws, Cell c) const {
    int total = 0;
    for (int t = 0; t < ws.num_types(); ++t) total += at(ws, c, t);
    return total;
  }
  int total_objects() const {
    int total = 0;
    for (int v : counts) total += v;
    return total;
  }
  auto operator<=>(const GridState&) const = default;
};

inline GridState empty_state(const Workspace& ws) {
  GridState s;
  s.counts.assign(static_cast<std::size_t>(ws.num_cells()) * ws.num_types(), 0);
  return s;
}

// The canonical state encoding: counts joined in cell-major order.
inline StateId encode_state(const GridState& s) {
  std::string key;
  key.reserve(s.counts.size() * 2);
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(s.counts[i]);
  }
  return {std::move(key)};
}

inline GridState decode_state(const StateId& id, const Workspace& ws) {
  GridState s = empty_state(ws);
  std::size_t i = 0, pos = 0;
  while (pos < id.key.size() && i < s.counts.size()) {
    std::size_t next = id.key.find(',', pos);
    if (next == std::string::npos) next = id.key.size();
    s.counts[i++] = std::stoi(id.key.substr(pos, next - pos));
    pos = next + 1;
  }
  if (i != s.counts.size())
    throw ContractViolation("decode_state: key does not match workspace: " + id.key);
  return s;
}

struct MoveAction {
  bool noop = true;
  int type = 0;
  Cell from, to;
  auto operator<=>(const MoveAction&) const = default;

  static MoveAction none() { return {}; }
  static MoveAction move(int type, Cell from, Cell to) { return {false, type, from, to}; }
};

inline bool is_diagonal(const MoveAction& a) {
  return !a.noop && a.from.row != a.to.row && a.from.col != a.to.col;
}

inline std::string action_to_string(const MoveAction& a, const Workspace& ws) {
  if (a.noop) return "-";
  return ws.type_names[a.type] + "(" + std::to_string(a.from.row) + "-" +
         std::to_string(a.from.col) + ")>(" + std::to_string(a.to.row) + "-" +
         std::to_string(a.to.col) + ")";
}

struct CostRewardConfig {
  double base_cost_axis = 1.0;
  double base_cost_diagonal = 1.0;
  int crowding_threshold = 2;
  double reward_weight = 2.0;
  double reward_offset = 50.0;
  double p_fail_a = 0.1;
  double p_fail_b = 0.1;

  void validate() const {
    if (base_cost_axis < 0 || base_cost_diagonal < 0)
      throw ValidationError("config: negative action cost");
    if (p_fail_a < 0 || p_fail_a > 1 || p_fail_b < 0 || p_fail_b > 1)
      throw ValidationError("config: failure probability outside [0,1]");
    if (crowding_threshold < 1) throw ValidationError("config: crowding threshold < 1");
  }
};

enum class Robot { Leader, Follower };

// Leader moves in 8 directions, follower in the 4 axis directions. NoOp is
// always index 0. Moves are ordered by type, source cell, then direction, so
// action lists are deterministic for a given state.
inline std::vector<MoveAction> feasible_actions(const GridState& s, Robot robot,
                                                const Workspace& ws) {
  static constexpr std::array<std::pair<int, int>, 8> kDirs = {{
      {-1, 0}, {1, 0}, {0, -1}, {0, 1},          // axis
      {-1, -1}, {-1, 1}, {1, -1}, {1, 1},        // diagonal
  }};
  const std::size_t ndirs = robot == Robot::Leader ? 8 : 4;
  std::vector<MoveAction> actions = {MoveAction::none()};
  for (int type = 0; type < ws.num_types(); ++type)
    for (int r = 0; r < ws.rows; ++r)
      for (int c = 0; c < ws.cols; ++c) {
        Cell from{r, c};
        if (s.at(ws, from, type) < 1) continue;
        for (std::size_t d = 0; d < ndirs; ++d) {
          Cell to{r + kDirs[d].first, c + kDirs[d].second};
          if (ws.in_bounds(to)) actions.push_back(MoveAction::move(type, from, to));
        }
      }
  return actions;
}

inline bool is_feasible(const GridState& s, const MoveAction& a, const Workspace& ws) {
  if (a.noop) return true;
  if (!ws.in_bounds(a.from) || !ws.in_bounds(a.to) || a.from == a.to) return false;
  if (std::abs(a.from.row - a.to.row) > 1 || std::abs(a.from.col - a.to.col) > 1) return false;
  return a.type >= 0 && a.type < ws.num_types() && s.at(ws, a.from, a.type) >= 1;
}

inline int distance_to_goal(const GridState& s, const Workspace& ws) {
  int dist = 0;
  for (int type = 0; type < ws.num_types(); ++type)
    for (int r = 0; r < ws.rows; ++r)
      for (int c = 0; c < ws.cols; ++c)
        dist += s.at(ws, {r, c}, type) * manhattan({r, c}, ws.goal_cell[type]);
  return dist;
}

inline double state_reward(const GridState& s, const Workspace& ws,
                           const CostRewardConfig& cfg) {
  return cfg.reward_offset - cfg.reward_weight * distance_to_goal(s, ws);
}

// Cost doubles when the source cell is crowded (total count at or above the
// threshold, counted before the object is removed).
inline double action_cost(const GridState& s, const MoveAction& a, const Workspace& ws,
                          const CostRewardConfig& cfg) {
  if (a.noop) return 0.0;
  if (!is_feasible(s, a, ws)) throw ContractViolation("action_cost: infeasible action");
  double base = is_diagonal(a) ? cfg.base_cost_diagonal : cfg.base_cost_axis;
  if (s.cell_total(ws, a.from) >= cfg.crowding_threshold) base *= 2.0;
  return base;
}

inline GridState apply_single(const GridState& s, const MoveAction& a, const Workspace& ws) {
  if (a.noop) return s;
  GridState out = s;
  if (--out.at(ws, a.from, a.type) < 0)
    throw ContractViolation("apply: no such object in source cell");
  ++out.at(ws, a.to, a.type);
  return out;
}

// Leader-first sequential application. If the leader's executed move removed
// the object the follower intended to move, the follower's action degrades to
// NoOp instead of failing.
inline std::pair<GridState, MoveAction> apply_joint(const GridState& s,
                                                    const MoveAction& a_leader_executed,
                                                    const MoveAction& b_intended,
                                                    const Workspace& ws) {
  GridState mid = apply_single(s, a_leader_executed, ws);
  MoveAction b = b_intended;
  if (!b.noop && !is_feasible(mid, b, ws)) b = MoveAction::none();
  return {apply_single(mid, b, ws), b};
}

// Four-outcome transition: each robot's action independently
// degrades to NoOp with its failure probability.
inline std::vector<std::pair<GridState, double>> transition_distribution(
    const GridState& s, const MoveAction& a, const MoveAction& b, const Workspace& ws,
    const CostRewardConfig& cfg) {
  const double pa = cfg.p_fail_a, pb = cfg.p_fail_b;
  const MoveAction none = MoveAction::none();
  const std::array<std::pair<std::pair<const MoveAction*, const MoveAction*>, double>, 4>
      branches = {{
          {{&a, &b}, (1 - pa) * (1 - pb)},
          {{&a, &none}, (1 - pa) * pb},
          {{&none, &b}, pa * (1 - pb)},
          {{&none, &none}, pa * pb},
      }};
  std::map<GridState, double> merged;
  for (const auto& [acts, p] : branches) {
    if (p <= 0.0) continue;
    merged[apply_joint(s, *acts.first, *acts.second, ws).first] += p;
  }
  std::vector<std::pair<GridState, double>> out(merged.begin(), merged.end());
  return out;
}

// Aligned team utility: reward of the pre-move state minus both executed
// costs. The follower's cost is assessed on the post-leader state, where the
// crowding condition may differ; an action the leader just invalidated
// degrades to a free NoOp, matching apply_joint.
inline std::pair<double, double> stage_utility(const GridState& s,
                                               const MoveAction& a_executed,
                                               const MoveAction& b_executed,
                                               const Workspace& ws,
                                               const CostRewardConfig& cfg) {
  GridState mid = apply_single(s, a_executed, ws);
  MoveAction b = b_executed;
  if (!b.noop && !is_feasible(mid, b, ws)) b = MoveAction::none();
  double u = state_reward(s, ws, cfg) - action_cost(s, a_executed, ws, cfg) -
             action_cost(mid, b, ws, cfg);
  return {u, u};
}

inline bool is_goal(const GridState& s, const Workspace& ws) {
  return distance_to_goal(s, ws) == 0;
}

inline std::pair<double, double> terminal_utility(const GridState& s, const Workspace& ws,
                                                  const CostRewardConfig& cfg) {
  double r = state_reward(s, ws, cfg);
  return {r, r};
}

// The rearrangement instantiation of the abstract game.
struct RearrangeGame {
  Workspace workspace;
  CostRewardConfig config;
  int horizon = 2;
  double discount = 1.0;

  GameSpec spec() const {
    const Workspace ws = workspace;
    const CostRewardConfig cfg = config;
    GameSpec g;
    g.horizon = horizon;
    g.discount = discount;
    g.leader_action_count = [ws](const StateId& id) {
      return static_cast<int>(feasible_actions(decode_state(id, ws), Robot::Leader, ws).size());
    };
    g.follower_action_count = [ws](const StateId& id) {
      return static_cast<int>(feasible_actions(decode_state(id, ws), Robot::Follower, ws).size());
    };
    g.transition = [ws, cfg](const StateId& id, int i, int j) {
      GridState s = decode_state(id, ws);
      auto la = feasible_actions(s, Robot::Leader, ws);
      auto fa = feasible_actions(s, Robot::Follower, ws);
      Distribution d;
      for (auto& [to, p] : transition_distribution(s, la.at(i), fa.at(j), ws, cfg))
        d.push_back({encode_state(to), p});
      return d;
    };
    g.stage_utility = [ws, cfg](const StateId& id, int i, int j) {
      GridState s = decode_state(id, ws);
      auto la = feasible_actions(s, Robot::Leader, ws);
      auto fa = feasible_actions(s, Robot::Follower, ws);
      // Planning charges intended actions; failures are already captured by
      // the four-outcome transition.
      return stage_utility(s, la.at(i), fa.at(j), ws, cfg);
    };
    g.terminal_utility = [ws, cfg](const StateId& id) {
      return terminal_utility(decode_state(id, ws), ws, cfg);
    };
    return g;
  }
};

}  // namespace sgcm
