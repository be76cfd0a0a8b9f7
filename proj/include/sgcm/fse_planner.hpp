#pragma once

#include <set>

#include "sgcm/stage_solver.hpp"

namespace sgcm {

struct ReachableSets {
  std::vector<std::set<StateId>> levels;  // size horizon+1, levels[0] = {s0}
};

struct PolicyPlan {
  struct Entry {
    MixedPolicy leader;
    int follower = 0;
    double leader_value = 0.0;
    double follower_value = 0.0;
    bool follower_tie = false;  // >=2 best responses under the leader policy
  };
  std::vector<std::map<StateId, Entry>> stages;  // size horizon
  std::vector<ValueTable> values;                // size horizon+1
};

enum class StageSolver { Milp, MultiLp };

struct PlanDiagnostics {
  std::vector<std::size_t> level_sizes;
  std::size_t stage_solves = 0;
};

namespace detail {

// Transition rows and stage utilities computed during the forward pass are
// cached per state and reused when building stage matrices, so each (s, a, b)
// triple is expanded once per plan.
struct StateExpansion {
  int na = 0, nb = 0;
  std::vector<Distribution> dist;                 // na*nb, cleaned
  std::vector<std::pair<double, double>> utility;  // na*nb
};

class ExpansionCache {
 public:
  explicit ExpansionCache(const GameSpec& game) : game_(game) {}

  const StateExpansion& get(const StateId& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    StateExpansion e;
    e.na = game_.leader_action_count(s);
    e.nb = game_.follower_action_count(s);
    if (e.na < 1 || e.nb < 1)
      throw ContractViolation("game: empty action list at state " + s.key);
    e.dist.resize(static_cast<std::size_t>(e.na) * e.nb);
    e.utility.resize(e.dist.size());
    for (int i = 0; i < e.na; ++i)
      for (int j = 0; j < e.nb; ++j) {
        std::size_t idx = static_cast<std::size_t>(i) * e.nb + j;
        e.dist[idx] = clean_distribution(game_.transition(s, i, j));
        e.utility[idx] = game_.stage_utility(s, i, j);
      }
    return cache_.emplace(s, std::move(e)).first->second;
  }

 private:
  const GameSpec& game_;
  std::map<StateId, StateExpansion> cache_;
};

inline StageMatrices matrices_from_expansion(const StateExpansion& e, double discount,
                                             const ValueTable& v_next) {
  StageMatrices m;
  m.leader.assign(e.na, std::vector<double>(e.nb, 0.0));
  m.follower.assign(e.na, std::vector<double>(e.nb, 0.0));
  for (int i = 0; i < e.na; ++i)
    for (int j = 0; j < e.nb; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * e.nb + j;
      double ca = 0.0, cb = 0.0;
      for (const auto& out : e.dist[idx]) {
        const auto& v = v_next.at(out.to);
        ca += out.prob * v.first;
        cb += out.prob * v.second;
      }
      m.leader[i][j] = e.utility[idx].first + discount * ca;
      m.follower[i][j] = e.utility[idx].second + discount * cb;
    }
  return m;
}

inline ReachableSets forward_reachability_cached(const StateId& s0, const GameSpec& game,
                                                 ExpansionCache& cache,
                                                 std::size_t state_cap) {
  ReachableSets sets;
  sets.levels.resize(game.horizon + 1);
  sets.levels[0].insert(s0);
  std::size_t total = 1;
  for (int t = 0; t < game.horizon; ++t) {
    for (const StateId& s : sets.levels[t]) {
      const StateExpansion& e = cache.get(s);
      for (const auto& dist : e.dist)
        for (const auto& out : dist) {
          if (sets.levels[t + 1].insert(out.to).second) {
            if (++total > state_cap)
              throw ResourceLimitError(
                  "forward reachability exceeded " + std::to_string(state_cap) +
                  " states; reduce the horizon");
          }
        }
    }
  }
  return sets;
}

}  // namespace detail

inline ReachableSets forward_reachability(const StateId& s0, const GameSpec& game,
                                          std::size_t state_cap = 2'000'000) {
  detail::ExpansionCache cache(game);
  return detail::forward_reachability_cached(s0, game, cache, state_cap);
}

namespace detail {

inline PolicyPlan backward_induction_cached(const ReachableSets& sets, const GameSpec& game,
                                            ExpansionCache& cache, StageSolver solver,
                                            PlanDiagnostics* diag) {
  const int horizon = game.horizon;
  if (static_cast<int>(sets.levels.size()) != horizon + 1)
    throw ContractViolation("backward_induction: reachable sets do not match horizon");
  PolicyPlan plan;
  plan.stages.resize(horizon);
  plan.values.resize(horizon + 1);
  for (const StateId& s : sets.levels[horizon])
    plan.values[horizon].values[s] = game.terminal_utility(s);
  for (int t = horizon - 1; t >= 0; --t) {
    for (const StateId& s : sets.levels[t]) {
      StageMatrices m =
          matrices_from_expansion(cache.get(s), game.discount, plan.values[t + 1]);
      StageSolution sol = solver == StageSolver::Milp ? solve_stackelberg_milp(m)
                                                      : solve_stackelberg_multilp(m);
      if (diag) ++diag->stage_solves;
      PolicyPlan::Entry entry;
      entry.leader = sol.leader_policy;
      entry.follower = sol.follower_action;
      entry.leader_value = sol.leader_value;
      entry.follower_value = sol.follower_value;
      entry.follower_tie = follower_best_response_set(m.follower, sol.leader_policy).size() > 1;
      plan.stages[t].emplace(s, std::move(entry));
      plan.values[t].values[s] = {sol.leader_value, sol.follower_value};
    }
  }
  return plan;
}

}  // namespace detail

inline PolicyPlan backward_induction(const ReachableSets& sets, const GameSpec& game,
                                     StageSolver solver = StageSolver::Milp) {
  detail::ExpansionCache cache(game);
  return detail::backward_induction_cached(sets, game, cache, solver, nullptr);
}

// Full plan from one state: forward reachability then backward induction,
// sharing one expansion cache.
inline PolicyPlan compute_plan(const StateId& s0, const GameSpec& game,
                               StageSolver solver = StageSolver::Milp,
                               PlanDiagnostics* diag = nullptr,
                               std::size_t state_cap = 2'000'000) {
  detail::ExpansionCache cache(game);
  ReachableSets sets = detail::forward_reachability_cached(s0, game, cache, state_cap);
  if (diag)
    for (const auto& level : sets.levels) diag->level_sizes.push_back(level.size());
  return detail::backward_induction_cached(sets, game, cache, solver, diag);
}

struct PlanStep {
  MixedPolicy leader;
  int follower = 0;
  bool follower_tie = false;
  PlanDiagnostics diagnostics;
};

inline PlanStep plan_step(const StateId& s, const GameSpec& game,
                          StageSolver solver = StageSolver::Milp,
                          std::size_t state_cap = 2'000'000) {
  PlanStep step;
  PolicyPlan plan = compute_plan(s, game, solver, &step.diagnostics, state_cap);
  const auto& entry = plan.stages.at(0).at(s);
  step.leader = entry.leader;
  step.follower = entry.follower;
  step.follower_tie = entry.follower_tie;
  return step;
}

}  // namespace sgcm
