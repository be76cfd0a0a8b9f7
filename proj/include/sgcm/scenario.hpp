#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sgcm/runner.hpp"

namespace sgcm {

struct ScenarioConfig {
  std::string name;
  Workspace workspace;
  GridState initial;
  CostRewardConfig costs;
  int horizon = 2;
  double discount = 1.0;
  int max_rounds = 20;
  std::uint64_t seed = 1;
  std::string planner = "sgcm";  // sgcm | greedy
  FollowerModel follower;

  RearrangeGame game() const { return {workspace, costs, horizon, discount}; }

  void validate() const {
    workspace.validate();
    costs.validate();
    if (horizon < 1) throw ValidationError("scenario: horizon must be >= 1");
    if (max_rounds < 1) throw ValidationError("scenario: max_rounds must be >= 1");
    if (discount <= 0.0 || discount > 1.0)
      throw ValidationError("scenario: discount must be in (0,1]");
    if (planner != "sgcm" && planner != "greedy")
      throw ValidationError("scenario: planner must be sgcm or greedy");
    if (initial.counts.size() !=
        static_cast<std::size_t>(workspace.num_cells()) * workspace.num_types())
      throw ValidationError("scenario: initial counts do not match grid dimensions");
    for (int r = 0; r < workspace.rows; ++r)
      for (int c = 0; c < workspace.cols; ++c)
        for (int t = 0; t < workspace.num_types(); ++t)
          if (initial.at(workspace, {r, c}, t) < 0)
            throw ValidationError("scenario: negative count at cell (" + std::to_string(r) +
                                  "," + std::to_string(c) + ") type " +
                                  workspace.type_names[t]);
    follower.validate();
  }
};

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline FollowerModel follower_from_json(const nlohmann::json& j) {
  std::string model = j.value("model", "obedient");
  if (model == "obedient") return FollowerModel::obedient();
  if (model == "zero_trust") return FollowerModel::zero_trust();
  if (model == "random_at_rounds") {
    std::set<int> rounds;
    for (int r : j.at("rounds")) rounds.insert(r);
    return FollowerModel::random_at_rounds(std::move(rounds));
  }
  if (model == "random_with_prob")
    return FollowerModel::random_with_prob(j.at("prob").get<double>());
  throw ValidationError("scenario: unknown follower model '" + model + "'");
}

inline nlohmann::ordered_json follower_to_json(const FollowerModel& m) {
  nlohmann::ordered_json j;
  switch (m.kind) {
    case FollowerModel::Kind::Obedient: j["model"] = "obedient"; break;
    case FollowerModel::Kind::ZeroTrust: j["model"] = "zero_trust"; break;
    case FollowerModel::Kind::RandomAtRounds:
      j["model"] = "random_at_rounds";
      j["rounds"] = m.rounds;
      break;
    case FollowerModel::Kind::RandomWithProb:
      j["model"] = "random_with_prob";
      j["prob"] = m.prob;
      break;
  }
  return j;
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = j.value("name", name);
  try {
    auto grid = j.at("grid");
    cfg.workspace.rows = grid.at("rows").get<int>();
    cfg.workspace.cols = grid.at("cols").get<int>();
    if (j.contains("types"))
      cfg.workspace.type_names = j.at("types").get<std::vector<std::string>>();
    if (j.contains("goals")) {
      cfg.workspace.goal_cell.clear();
      for (const auto& t : cfg.workspace.type_names) {
        auto g = j.at("goals").at(t);
        cfg.workspace.goal_cell.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
      }
    } else if (cfg.workspace.type_names == std::vector<std::string>{"red", "green", "blue"} &&
               cfg.workspace.rows >= 1 && cfg.workspace.cols >= 3) {
      int r = cfg.workspace.rows - 1;
      cfg.workspace.goal_cell = {{r, 0}, {r, 1}, {r, 2}};
    } else {
      throw ValidationError("scenario: goals required for non-default workspace");
    }
    cfg.initial = empty_state(cfg.workspace);
    // counts indexed [row][col][type]
    auto rows = j.at("initial");
    if (rows.size() != static_cast<std::size_t>(cfg.workspace.rows))
      throw ValidationError("scenario: initial must have one entry per grid row");
    for (int r = 0; r < cfg.workspace.rows; ++r) {
      if (rows[r].size() != static_cast<std::size_t>(cfg.workspace.cols))
        throw ValidationError("scenario: initial row " + std::to_string(r) + " wrong length");
      for (int c = 0; c < cfg.workspace.cols; ++c) {
        auto cell = rows[r][c];
        if (cell.size() != static_cast<std::size_t>(cfg.workspace.num_types()))
          throw ValidationError("scenario: cell (" + std::to_string(r) + "," +
                                std::to_string(c) + ") needs one count per type");
        for (int t = 0; t < cfg.workspace.num_types(); ++t)
          cfg.initial.at(cfg.workspace, {r, c}, t) = cell[t].get<int>();
      }
    }
    if (j.contains("costs")) {
      auto c = j.at("costs");
      cfg.costs.base_cost_axis = c.value("axis", cfg.costs.base_cost_axis);
      cfg.costs.base_cost_diagonal = c.value("diagonal", cfg.costs.base_cost_diagonal);
      cfg.costs.crowding_threshold = c.value("crowding_threshold", cfg.costs.crowding_threshold);
      cfg.costs.reward_weight = c.value("reward_weight", cfg.costs.reward_weight);
      cfg.costs.reward_offset = c.value("reward_offset", cfg.costs.reward_offset);
    }
    cfg.costs.p_fail_a = j.value("p_fail_a", 0.1);
    cfg.costs.p_fail_b = j.value("p_fail_b", 0.1);
    cfg.horizon = j.value("horizon", 2);
    cfg.discount = j.value("discount", 1.0);
    cfg.max_rounds = j.value("max_rounds", 20);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.planner = j.value("planner", std::string("sgcm"));
    if (j.contains("follower")) cfg.follower = detail::follower_from_json(j.at("follower"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(name + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(detail::parse_json_file(path),
                            std::filesystem::path(path).stem().string());
}

inline nlohmann::ordered_json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["name"] = cfg.name;
  j["grid"] = {{"rows", cfg.workspace.rows}, {"cols", cfg.workspace.cols}};
  j["types"] = cfg.workspace.type_names;
  nlohmann::ordered_json goals;
  for (int t = 0; t < cfg.workspace.num_types(); ++t)
    goals[cfg.workspace.type_names[t]] = {cfg.workspace.goal_cell[t].row,
                                          cfg.workspace.goal_cell[t].col};
  j["goals"] = std::move(goals);
  auto rows = nlohmann::ordered_json::array();
  for (int r = 0; r < cfg.workspace.rows; ++r) {
    auto row = nlohmann::ordered_json::array();
    for (int c = 0; c < cfg.workspace.cols; ++c) {
      auto cell = nlohmann::ordered_json::array();
      for (int t = 0; t < cfg.workspace.num_types(); ++t)
        cell.push_back(cfg.initial.at(cfg.workspace, {r, c}, t));
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  j["initial"] = std::move(rows);
  j["costs"] = {{"axis", cfg.costs.base_cost_axis},
                {"diagonal", cfg.costs.base_cost_diagonal},
                {"crowding_threshold", cfg.costs.crowding_threshold},
                {"reward_weight", cfg.costs.reward_weight},
                {"reward_offset", cfg.costs.reward_offset}};
  j["p_fail_a"] = cfg.costs.p_fail_a;
  j["p_fail_b"] = cfg.costs.p_fail_b;
  j["horizon"] = cfg.horizon;
  j["discount"] = cfg.discount;
  j["max_rounds"] = cfg.max_rounds;
  j["seed"] = cfg.seed;
  j["planner"] = cfg.planner;
  j["follower"] = detail::follower_to_json(cfg.follower);
  return j;
}

inline EpisodeReport run_scenario(const ScenarioConfig& cfg) {
  if (cfg.planner == "greedy") return greedy_run(cfg.game(), cfg.initial, cfg.max_rounds, cfg.seed);
  return rolling_horizon_run(cfg.game(), cfg.initial, cfg.follower, cfg.max_rounds, cfg.seed);
}

// Runs the scenario and writes report.json plus rounds.csv into out_dir.
inline EpisodeReport run_experiment(const ScenarioConfig& cfg, const std::string& out_dir) {
  EpisodeReport report = run_scenario(cfg);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(std::filesystem::path(out_dir) / (cfg.name + "_report.json"));
    out << episode_to_json(report, cfg.workspace).dump(2) << "\n";
  }
  {
    std::ofstream out(std::filesystem::path(out_dir) / (cfg.name + "_rounds.csv"));
    out << episode_to_csv(report, cfg.workspace);
  }
  return report;
}

struct ComparisonRow {
  std::string case_name;
  std::string greedy_status;
  int greedy_rounds = 0;
  double greedy_utility = 0.0;  // round-matched
  std::string sgcm_status;
  int sgcm_rounds = 0;
  double sgcm_utility = 0.0;
};

namespace detail {

// Sum of the first n stage utilities. A run that terminated at the goal in
// fewer rounds is extended with its resting utility (final state, both idle).
inline double round_matched_utility(const EpisodeReport& r, int n, const ScenarioConfig& cfg) {
  double sum = 0.0;
  int have = std::min<int>(n, r.num_rounds());
  for (int i = 0; i < have; ++i) sum += r.rounds[i].utility_a;
  if (have < n) {
    GridState final_state = r.rounds.empty()
                                ? cfg.initial
                                : decode_state(r.rounds.back().state_after, cfg.workspace);
    double resting = state_reward(final_state, cfg.workspace, cfg.costs);
    sum += resting * (n - have);
  }
  return sum;
}

}  // namespace detail

// Runs both planners on each case with matched seeds; utilities are summed
// over the rounds taken by the sgcm run, both planners alike.
inline std::vector<ComparisonRow> compare_cases(const std::vector<ScenarioConfig>& cases) {
  std::vector<ComparisonRow> out;
  for (const ScenarioConfig& base : cases) {
    ComparisonRow row;
    row.case_name = base.name;
    try {
      ScenarioConfig sgcm_cfg = base;
      sgcm_cfg.planner = "sgcm";
      ScenarioConfig greedy_cfg = base;
      greedy_cfg.planner = "greedy";
      EpisodeReport sgcm = run_scenario(sgcm_cfg);
      EpisodeReport greedy = run_scenario(greedy_cfg);
      int n = std::min(sgcm.num_rounds(), base.max_rounds);
      row.sgcm_status = to_string(sgcm.status);
      row.sgcm_rounds = sgcm.num_rounds();
      row.sgcm_utility = detail::round_matched_utility(sgcm, n, sgcm_cfg);
      row.greedy_status = to_string(greedy.status);
      row.greedy_rounds = greedy.num_rounds();
      row.greedy_utility = detail::round_matched_utility(greedy, n, greedy_cfg);
    } catch (const std::exception& e) {
      row.sgcm_status = row.greedy_status = std::string("error: ") + e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "case,greedy_status,greedy_rounds,greedy_utility,sgcm_status,sgcm_rounds,sgcm_utility\n";
  for (const auto& r : rows) {
    out += r.case_name + "," + r.greedy_status + "," + std::to_string(r.greedy_rounds) + "," +
           detail::fmt_double(r.greedy_utility) + "," + r.sgcm_status + "," +
           std::to_string(r.sgcm_rounds) + "," + detail::fmt_double(r.sgcm_utility) + "\n";
  }
  return out;
}

}  // namespace sgcm
