#pragma once

#include <json.hpp>

#include "sgcm/rearrange_env.hpp"

namespace sgcm {

enum class EpisodeStatus { Complete, Incomplete, Stuck };

inline const char* to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Complete: return "complete";
    case EpisodeStatus::Incomplete: return "incomplete";
    case EpisodeStatus::Stuck: return "stuck";
  }
  return "?";
}

struct RoundRecord {
  int round = 0;  // 1-based
  StateId state_before;
  MoveAction leader_intent;
  MoveAction leader_executed;
  MoveAction follower_recommended;
  MoveAction follower_chosen;   // after the follower model, before failure
  MoveAction follower_executed;
  bool leader_success = true;
  bool follower_success = true;
  bool follower_deviated = false;
  bool follower_degraded = false;
  bool planner_tie = false;  // follower best-response set was not a singleton
  double utility_a = 0.0;
  double utility_b = 0.0;
  StateId state_after;
  int dist_to_goal = 0;  // of state_before
};

struct EpisodeReport {
  std::string planner;  // "sgcm" or "greedy"
  std::uint64_t seed = 0;
  EpisodeStatus status = EpisodeStatus::Incomplete;
  std::vector<RoundRecord> rounds;
  double total_utility_a = 0.0;
  double total_utility_b = 0.0;

  int num_rounds() const { return static_cast<int>(rounds.size()); }
};

namespace detail {
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}
}  // namespace detail

inline nlohmann::ordered_json episode_to_json(const EpisodeReport& r, const Workspace& ws) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["planner"] = r.planner;
  j["seed"] = r.seed;
  j["status"] = to_string(r.status);
  j["rounds"] = r.num_rounds();
  j["total_utility_a"] = r.total_utility_a;
  j["total_utility_b"] = r.total_utility_b;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rec : r.rounds) {
    nlohmann::ordered_json e;
    e["round"] = rec.round;
    e["state_before"] = rec.state_before.key;
    e["leader_intent"] = action_to_string(rec.leader_intent, ws);
    e["leader_executed"] = action_to_string(rec.leader_executed, ws);
    e["follower_recommended"] = action_to_string(rec.follower_recommended, ws);
    e["follower_executed"] = action_to_string(rec.follower_executed, ws);
    e["leader_success"] = rec.leader_success;
    e["follower_success"] = rec.follower_success;
    e["follower_deviated"] = rec.follower_deviated;
    e["follower_degraded"] = rec.follower_degraded;
    e["planner_tie"] = rec.planner_tie;
    e["utility_a"] = rec.utility_a;
    e["utility_b"] = rec.utility_b;
    e["state_after"] = rec.state_after.key;
    e["dist_to_goal"] = rec.dist_to_goal;
    arr.push_back(std::move(e));
  }
  j["round_log"] = std::move(arr);
  return j;
}

inline std::string episode_to_csv(const EpisodeReport& r, const Workspace& ws) {
  std::string out =
      "round,state_hash,leader_intent,leader_exec,follower_rec,follower_exec,u_A,u_B,dist_to_goal\n";
  for (const auto& rec : r.rounds) {
    out += std::to_string(rec.round) + ",\"" + rec.state_before.key + "\"," +
           action_to_string(rec.leader_intent, ws) + "," +
           action_to_string(rec.leader_executed, ws) + "," +
           action_to_string(rec.follower_recommended, ws) + "," +
           action_to_string(rec.follower_executed, ws) + "," +
           detail::fmt_double(rec.utility_a) + "," + detail::fmt_double(rec.utility_b) + "," +
           std::to_string(rec.dist_to_goal) + "\n";
  }
  return out;
}

}  // namespace sgcm
