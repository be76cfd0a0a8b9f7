#pragma once

#include <random>

#include "sgcm/rearrange_env.hpp"

namespace sgcm {

// How the follower treats the leader's recommendation.
struct FollowerModel {
  enum class Kind { Obedient, RandomAtRounds, RandomWithProb, ZeroTrust };
  Kind kind = Kind::Obedient;
  std::set<int> rounds;  // 1-based, RandomAtRounds
  double prob = 0.0;     // RandomWithProb

  static FollowerModel obedient() { return {}; }
  static FollowerModel random_at_rounds(std::set<int> r) {
    return {Kind::RandomAtRounds, std::move(r), 0.0};
  }
  static FollowerModel random_with_prob(double p) { return {Kind::RandomWithProb, {}, p}; }
  static FollowerModel zero_trust() { return {Kind::ZeroTrust, {}, 0.0}; }

  void validate() const {
    if (prob < 0.0 || prob > 1.0) throw ValidationError("follower model: probability outside [0,1]");
    for (int r : rounds)
      if (r < 1) throw ValidationError("follower model: round indices start at 1");
  }
};

namespace detail {

// One-step utility of a single robot's action, partner assumed idle: reward
// of the successor state minus the action's cost.
inline double one_step_utility(const GridState& s, const MoveAction& a, const Workspace& ws,
                               const CostRewardConfig& cfg) {
  return state_reward(apply_single(s, a, ws), ws, cfg) - action_cost(s, a, ws, cfg);
}

// Tie order: moves sorted by (type, from, to) first, NoOp last.
inline bool tie_before(const MoveAction& a, const MoveAction& b) {
  if (a.noop != b.noop) return !a.noop;
  return std::tie(a.type, a.from, a.to) < std::tie(b.type, b.from, b.to);
}

inline MoveAction greedy_step(const GridState& s, Robot robot, const Workspace& ws,
                              const CostRewardConfig& cfg) {
  MoveAction best = MoveAction::none();
  double best_u = one_step_utility(s, best, ws, cfg);
  for (const MoveAction& a : feasible_actions(s, robot, ws)) {
    double u = one_step_utility(s, a, ws, cfg);
    if (u > best_u + 1e-12 || (u > best_u - 1e-12 && tie_before(a, best))) {
      best = a;
      best_u = u;
    }
  }
  return best;
}

}  // namespace detail

inline MoveAction greedy_leader_step(const GridState& s, const Workspace& ws,
                                     const CostRewardConfig& cfg) {
  return detail::greedy_step(s, Robot::Leader, ws, cfg);
}

inline MoveAction greedy_follower_step(const GridState& s_after_leader, const Workspace& ws,
                                       const CostRewardConfig& cfg) {
  return detail::greedy_step(s_after_leader, Robot::Follower, ws, cfg);
}

struct FollowerExecution {
  MoveAction action;
  bool deviated = false;   // disturbance or zero trust replaced the recommendation
  bool degraded = false;   // recommendation was infeasible after the leader moved
};

// Resolves the follower's actually-chosen action given the recommendation and
// the post-leader state. Execution failure p_fail_b is applied by the caller.
template <class Rng>
FollowerExecution follower_execute(const FollowerModel& model, const MoveAction& recommended,
                                   const GridState& s_after_leader, int round, Rng& rng,
                                   const Workspace& ws, const CostRewardConfig& cfg) {
  FollowerExecution out;
  MoveAction rec = recommended;
  if (!rec.noop && !is_feasible(s_after_leader, rec, ws)) {
    rec = MoveAction::none();
    out.degraded = true;
  }
  auto random_deviation = [&]() {
    auto actions = feasible_actions(s_after_leader, Robot::Follower, ws);
    // an actual deviation: exclude the recommendation when alternatives exist
    if (actions.size() > 1)
      std::erase(actions, rec);
    std::size_t idx = static_cast<std::size_t>(uniform01(rng) * actions.size());
    if (idx >= actions.size()) idx = actions.size() - 1;
    out.deviated = true;
    return actions[idx];
  };
  switch (model.kind) {
    case FollowerModel::Kind::Obedient:
      out.action = rec;
      break;
    case FollowerModel::Kind::RandomAtRounds:
      out.action = model.rounds.count(round) ? random_deviation() : rec;
      break;
    case FollowerModel::Kind::RandomWithProb:
      out.action = uniform01(rng) < model.prob ? random_deviation() : rec;
      break;
    case FollowerModel::Kind::ZeroTrust:
      out.action = greedy_follower_step(s_after_leader, ws, cfg);
      out.deviated = out.action != rec;
      break;
  }
  return out;
}

}  // namespace sgcm
