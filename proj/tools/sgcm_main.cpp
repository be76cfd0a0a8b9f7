#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sgcm/plot.hpp"
#include "sgcm/scenario.hpp"

namespace {

sgcm::Matrix parse_matrix_rows(std::istream& in, std::string& pending_label) {
  sgcm::Matrix m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row_in(line);
    std::string first;
    if (!(row_in >> first)) continue;  // blank line
    if (first == "U_A" || first == "U_B") {
      pending_label = first;
      return m;
    }
    std::vector<double> row;
    row.push_back(std::stod(first));
    double v;
    while (row_in >> v) row.push_back(v);
    m.push_back(std::move(row));
  }
  pending_label.clear();
  return m;
}

// Two labeled matrices, same format dump_stage_game writes.
sgcm::StageMatrices load_stage_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sgcm::ValidationError("cannot open " + path);
  std::string label;
  std::string ignored;
  parse_matrix_rows(in, label);  // leading content before the first label
  sgcm::StageMatrices m;
  while (!label.empty()) {
    std::string current = label;
    sgcm::Matrix mat = parse_matrix_rows(in, label);
    (current == "U_A" ? m.leader : m.follower) = std::move(mat);
    (void)ignored;
  }
  if (m.leader.empty() || m.follower.empty())
    throw sgcm::ValidationError(path + ": expected labeled matrices U_A and U_B");
  try {
    m.validate();
  } catch (const sgcm::ContractViolation& e) {
    throw sgcm::ValidationError(path + ": " + e.what());
  }
  return m;
}

int cmd_solve(const std::string& path, bool dump) {
  sgcm::StageMatrices m = load_stage_game(path);
  if (dump) std::cout << sgcm::dump_stage_game(m);
  sgcm::StageSolution sol = sgcm::solve_stackelberg_milp(m);
  std::cout << "leader_policy";
  for (double p : sol.leader_policy) std::cout << " " << sgcm::detail::fmt_double(p);
  std::cout << "\nfollower_action " << sol.follower_action
            << "\nleader_value " << sgcm::detail::fmt_double(sol.leader_value)
            << "\nfollower_value " << sgcm::detail::fmt_double(sol.follower_value) << "\n";
  return 0;
}

std::set<int> parse_round_list(const std::string& s) {
  std::set<int> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.insert(std::stoi(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback Stackelberg planner for two-robot grid rearrangement"};
  app.require_subcommand(1);

  // solve
  std::string stage_game_path;
  bool dump_game = false;
  auto* solve = app.add_subcommand("solve", "Solve one matrix Stackelberg stage game");
  solve->add_option("--stage-game", stage_game_path, "Two-matrix text file (U_A, U_B)")
      ->required();
  solve->add_flag("--dump", dump_game, "Echo the parsed matrices");

  // run
  std::string scenario_path, planner, out_dir = ".";
  std::string disturb_rounds;
  double disturb_prob = -1.0, pfail_a = -1.0, pfail_b = -1.0;
  bool zero_trust = false;
  int horizon = 0;
  std::int64_t seed = -1;
  auto* run = app.add_subcommand("run", "Run one scenario episode");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--planner", planner, "sgcm or greedy");
  run->add_option("--horizon", horizon, "Prediction horizon override");
  run->add_option("--pfail-a", pfail_a, "Leader failure probability override");
  run->add_option("--pfail-b", pfail_b, "Follower failure probability override");
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--disturb-rounds", disturb_rounds, "Comma-separated rounds with random deviation");
  run->add_option("--disturb-prob", disturb_prob, "Per-round random deviation probability");
  run->add_flag("--zero-trust", zero_trust, "Follower ignores recommendations, acts greedily");
  run->add_option("--out", out_dir, "Output directory");

  // compare
  std::string cases_dir, compare_out;
  auto* compare = app.add_subcommand("compare", "Run sgcm and greedy across a case directory");
  compare->add_option("--cases", cases_dir, "Directory of scenario JSON files")->required();
  compare->add_option("--out", compare_out, "Output CSV path")->required();

  // plot
  std::vector<std::string> report_paths;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Plot stage-wise utility from report JSON files");
  plot->add_option("--reports", report_paths, "Report JSON files")->required()->expected(-1);
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(stage_game_path, dump_game);

    if (run->parsed()) {
      sgcm::ScenarioConfig cfg = sgcm::load_scenario(scenario_path);
      if (!planner.empty()) cfg.planner = planner;
      if (horizon > 0) cfg.horizon = horizon;
      if (pfail_a >= 0) cfg.costs.p_fail_a = pfail_a;
      if (pfail_b >= 0) cfg.costs.p_fail_b = pfail_b;
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      int model_flags = (!disturb_rounds.empty() ? 1 : 0) + (disturb_prob >= 0 ? 1 : 0) +
                        (zero_trust ? 1 : 0);
      if (model_flags > 1)
        throw sgcm::ValidationError("choose one of --disturb-rounds, --disturb-prob, --zero-trust");
      if (!disturb_rounds.empty())
        cfg.follower = sgcm::FollowerModel::random_at_rounds(parse_round_list(disturb_rounds));
      else if (disturb_prob >= 0)
        cfg.follower = sgcm::FollowerModel::random_with_prob(disturb_prob);
      else if (zero_trust)
        cfg.follower = sgcm::FollowerModel::zero_trust();
      cfg.validate();
      sgcm::EpisodeReport report = sgcm::run_experiment(cfg, out_dir);
      std::cout << cfg.name << ": " << sgcm::to_string(report.status) << " in "
                << report.num_rounds() << " rounds, total utility "
                << sgcm::detail::fmt_double(report.total_utility_a) << "\n";
      return 0;
    }

    if (compare->parsed()) {
      std::vector<sgcm::ScenarioConfig> cases;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(cases_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw sgcm::ValidationError("no .json cases in " + cases_dir);
      for (const auto& f : files) cases.push_back(sgcm::load_scenario(f.string()));
      auto rows = sgcm::compare_cases(cases);
      std::ofstream out(compare_out);
      if (!out) throw sgcm::ValidationError("cannot write " + compare_out);
      out << sgcm::comparison_to_csv(rows);
      std::cout << sgcm::comparison_to_csv(rows);
      return 0;
    }

    if (plot->parsed()) {
      std::vector<std::pair<std::string, sgcm::EpisodeReport>> reports;
      for (const auto& path : report_paths) {
        auto j = sgcm::detail::parse_json_file(path);
        sgcm::EpisodeReport r;
        r.planner = j.value("planner", "?");
        for (const auto& e : j.at("round_log")) {
          sgcm::RoundRecord rec;
          rec.round = e.at("round").get<int>();
          rec.utility_a = e.at("utility_a").get<double>();
          rec.follower_deviated = e.value("follower_deviated", false);
          r.rounds.push_back(rec);
        }
        reports.emplace_back(std::filesystem::path(path).stem().string(), std::move(r));
      }
      sgcm::emit_utility_plot(reports, plot_out);
      return 0;
    }
  } catch (const sgcm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sgcm::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
