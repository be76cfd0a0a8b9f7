#pragma once

#include <random>

#include "sgcm/baselines.hpp"
#include "sgcm/episode.hpp"
#include "sgcm/fse_planner.hpp"

namespace sgcm {

namespace detail {

// Streams are seeded separately so that the failure draws of round k are the
// same for every planner and follower model under one seed: planners consume
// policy draws at different rates, which must not desynchronize failures.
struct EpisodeRng {
  std::mt19937_64 fail;
  std::mt19937_64 policy;
  std::mt19937_64 disturb;

  explicit EpisodeRng(std::uint64_t seed)
      : fail(seed ^ 0x9e3779b97f4a7c15ull),
        policy(seed ^ 0x5851f42d4c957f2dull),
        disturb(seed ^ 0xda942042e4dd58b5ull) {}
};

template <class Rng>
int sample_index(const MixedPolicy& p, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

// Cycle of period <= max_period repeated >= min_repeats times at the tail of
// the state sequence.
inline bool state_cycle(const std::vector<StateId>& seq, int max_period, int min_repeats) {
  for (int p = 1; p <= max_period; ++p) {
    int needed = p * min_repeats;
    if (static_cast<int>(seq.size()) < needed) continue;
    bool cyclic = true;
    for (int k = 0; k < needed - p && cyclic; ++k)
      cyclic = seq[seq.size() - 1 - k] == seq[seq.size() - 1 - k - p];
    if (cyclic) return true;
  }
  return false;
}

}  // namespace detail

// Replans from the observed state every round, executes a sample of the
// stage-0 leader policy and recommends the stage-0 follower action.
inline EpisodeReport rolling_horizon_run(const RearrangeGame& env, GridState initial,
                                         const FollowerModel& follower_model, int max_rounds,
                                         std::uint64_t seed,
                                         StageSolver solver = StageSolver::MultiLp,
                                         std::size_t state_cap = 2'000'000) {
  if (max_rounds < 1) throw ContractViolation("rolling_horizon_run: max_rounds < 1");
  follower_model.validate();
  const Workspace& ws = env.workspace;
  const CostRewardConfig& cfg = env.config;
  GameSpec game = env.spec();
  detail::EpisodeRng rng(seed);

  EpisodeReport report;
  report.planner = "sgcm";
  report.seed = seed;
  GridState s = std::move(initial);
  if (is_goal(s, ws)) {
    report.status = EpisodeStatus::Complete;
    return report;
  }
  for (int round = 1; round <= max_rounds; ++round) {
    PlanStep step = plan_step(encode_state(s), game, solver, state_cap);
    auto leader_actions = feasible_actions(s, Robot::Leader, ws);
    auto follower_actions = feasible_actions(s, Robot::Follower, ws);

    RoundRecord rec;
    rec.round = round;
    rec.state_before = encode_state(s);
    rec.dist_to_goal = distance_to_goal(s, ws);
    rec.planner_tie = step.follower_tie;
    rec.leader_intent = leader_actions.at(detail::sample_index(step.leader, rng.policy));
    rec.follower_recommended = follower_actions.at(step.follower);

    rec.leader_success = uniform01(rng.fail) >= cfg.p_fail_a;
    rec.leader_executed = rec.leader_success ? rec.leader_intent : MoveAction::none();
    GridState mid = apply_single(s, rec.leader_executed, ws);

    FollowerExecution fx = follower_execute(follower_model, rec.follower_recommended, mid,
                                            round, rng.disturb, ws, cfg);
    rec.follower_chosen = fx.action;
    rec.follower_deviated = fx.deviated;
    rec.follower_degraded = fx.degraded;
    rec.follower_success = uniform01(rng.fail) >= cfg.p_fail_b;
    MoveAction b_exec = rec.follower_success ? fx.action : MoveAction::none();

    auto [next, b_applied] = apply_joint(s, rec.leader_executed, b_exec, ws);
    rec.follower_executed = b_applied;
    auto [ua, ub] = stage_utility(s, rec.leader_executed, b_applied, ws, cfg);
    rec.utility_a = ua;
    rec.utility_b = ub;
    rec.state_after = encode_state(next);
    report.total_utility_a += ua;
    report.total_utility_b += ub;
    report.rounds.push_back(std::move(rec));

    s = std::move(next);
    if (is_goal(s, ws)) {
      report.status = EpisodeStatus::Complete;
      return report;
    }
  }
  report.status = EpisodeStatus::Incomplete;
  return report;
}

// Myopic baseline: each robot maximizes its own one-stage utility, no
// cooperation. Same failure sampling discipline as the rolling-horizon run.
inline EpisodeReport greedy_run(const RearrangeGame& env, GridState initial, int max_rounds,
                                std::uint64_t seed) {
  if (max_rounds < 1) throw ContractViolation("greedy_run: max_rounds < 1");
  const Workspace& ws = env.workspace;
  const CostRewardConfig& cfg = env.config;
  detail::EpisodeRng rng(seed);

  EpisodeReport report;
  report.planner = "greedy";
  report.seed = seed;
  GridState s = std::move(initial);
  if (is_goal(s, ws)) {
    report.status = EpisodeStatus::Complete;
    return report;
  }
  std::vector<StateId> state_seq;
  struct Triple {
    StateId s;
    MoveAction a, b;
    bool operator==(const Triple&) const = default;
  };
  std::vector<Triple> triples;
  for (int round = 1; round <= max_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    rec.state_before = encode_state(s);
    rec.dist_to_goal = distance_to_goal(s, ws);
    rec.leader_intent = greedy_leader_step(s, ws, cfg);
    rec.leader_success = uniform01(rng.fail) >= cfg.p_fail_a;
    rec.leader_executed = rec.leader_success ? rec.leader_intent : MoveAction::none();
    GridState mid = apply_single(s, rec.leader_executed, ws);

    MoveAction b_intent = greedy_follower_step(mid, ws, cfg);
    rec.follower_recommended = b_intent;  // self-selected, no recommendation channel
    rec.follower_chosen = b_intent;
    rec.follower_success = uniform01(rng.fail) >= cfg.p_fail_b;
    MoveAction b_exec = rec.follower_success ? b_intent : MoveAction::none();

    auto [next, b_applied] = apply_joint(s, rec.leader_executed, b_exec, ws);
    rec.follower_executed = b_applied;
    auto [ua, ub] = stage_utility(s, rec.leader_executed, b_applied, ws, cfg);
    rec.utility_a = ua;
    rec.utility_b = ub;
    rec.state_after = encode_state(next);
    report.total_utility_a += ua;
    report.total_utility_b += ub;

    triples.push_back({rec.state_before, rec.leader_executed, rec.follower_executed});
    state_seq.push_back(rec.state_before);
    report.rounds.push_back(std::move(rec));

    s = std::move(next);
    if (is_goal(s, ws)) {
      report.status = EpisodeStatus::Complete;
      return report;
    }
    bool repeat = triples.size() >= 2 && triples[triples.size() - 1] == triples[triples.size() - 2];
    if (repeat || detail::state_cycle(state_seq, 4, 3)) {
      report.status = EpisodeStatus::Stuck;
      return report;
    }
  }
  report.status = EpisodeStatus::Incomplete;
  return report;
}

}  // namespace sgcm
