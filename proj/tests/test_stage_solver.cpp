#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sgcm/stage_solver.hpp"

using namespace sgcm;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int na, int nb, double lo = -10, double hi = 10) {
  Matrix m(na, std::vector<double>(nb));
  for (auto& row : m)
    for (auto& v : row) v = lo + uniform01(rng) * (hi - lo);
  return m;
}

void check_solution_invariants(const StageMatrices& m, const StageSolution& sol) {
  REQUIRE(is_distribution(sol.leader_policy));
  auto br = follower_best_response_set(m.follower, sol.leader_policy);
  CHECK(std::find(br.begin(), br.end(), sol.follower_action) != br.end());
  CHECK(sol.leader_value ==
        Catch::Approx(expected_stage_value(m.leader, sol.leader_policy, sol.follower_action))
            .margin(1e-9));
  CHECK(sol.follower_value ==
        Catch::Approx(expected_stage_value(m.follower, sol.leader_policy, sol.follower_action))
            .margin(1e-9));
}

}  // namespace

TEST_CASE("follower_best_response_set examples") {
  CHECK(follower_best_response_set({{1, 0}, {0, 1}}, {1.0, 0.0}) == std::vector<int>{0});
  CHECK(follower_best_response_set({{1, 0}, {0, 1}}, {0.5, 0.5}) == std::vector<int>{0, 1});
  CHECK(follower_best_response_set({{1, 0}, {0, 2}}, {0.5, 0.5}) == std::vector<int>{1});
}

TEST_CASE("follower_best_response_set is invariant to constant shifts") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int na = 1 + static_cast<int>(rng() % 4), nb = 1 + static_cast<int>(rng() % 4);
    Matrix m = random_matrix(rng, na, nb);
    MixedPolicy pi(na, 1.0 / na);
    Matrix shifted = m;
    double c = uniform01(rng) * 20 - 10;
    for (auto& row : shifted)
      for (auto& v : row) v += c;
    CHECK(follower_best_response_set(m, pi) == follower_best_response_set(shifted, pi));
  }
}

TEST_CASE("stage solvers: 1x1 game") {
  StageMatrices m{{{3.0}}, {{3.0}}};
  for (StageSolution sol : {solve_stackelberg_milp(m), solve_stackelberg_multilp(m)}) {
    CHECK(sol.leader_policy == MixedPolicy{1.0});
    CHECK(sol.follower_action == 0);
    CHECK(sol.leader_value == Catch::Approx(3.0));
    CHECK(sol.follower_value == Catch::Approx(3.0));
  }
}

TEST_CASE("stage solvers: known commitment game") {
  // The follower matching constraint forces pi(row2) >= 0.5; optimistic
  // tie-breaking puts the leader exactly on the boundary.
  StageMatrices m{{{2, 4}, {1, 3}}, {{1, 0}, {0, 1}}};
  for (StageSolution sol : {solve_stackelberg_milp(m), solve_stackelberg_multilp(m)}) {
    check_solution_invariants(m, sol);
    CHECK(sol.leader_value == Catch::Approx(3.5).margin(1e-6));
    CHECK(sol.leader_policy[0] == Catch::Approx(0.5).margin(1e-6));
    CHECK(sol.leader_policy[1] == Catch::Approx(0.5).margin(1e-6));
    CHECK(sol.follower_action == 1);
    CHECK(sol.follower_value == Catch::Approx(0.5).margin(1e-6));
  }
}

TEST_CASE("stage solvers: aligned matrices select the global maximum entry") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    int na = 1 + static_cast<int>(rng() % 5), nb = 1 + static_cast<int>(rng() % 5);
    Matrix u = random_matrix(rng, na, nb);
    double best = -kInf;
    for (auto& row : u)
      for (double v : row) best = std::max(best, v);
    StageMatrices m{u, u};
    for (StageSolution sol : {solve_stackelberg_milp(m), solve_stackelberg_multilp(m)}) {
      check_solution_invariants(m, sol);
      CHECK(sol.leader_value == Catch::Approx(best).margin(1e-7));
      CHECK(sol.follower_value == Catch::Approx(best).margin(1e-7));
    }
  }
}

TEST_CASE("stage solvers: zero leader matrix gives zero value") {
  StageMatrices m{{{0, 0}, {0, 0}}, {{1, 2}, {3, -1}}};
  StageSolution sol = solve_stackelberg_multilp(m);
  CHECK(sol.leader_value == Catch::Approx(0.0).margin(1e-9));
  check_solution_invariants(m, sol);
}

TEST_CASE("stage solvers: single leader row picks the follower argmax") {
  StageMatrices m{{{7, 1, 5}}, {{2, 9, 4}}};
  for (StageSolution sol : {solve_stackelberg_milp(m), solve_stackelberg_multilp(m)}) {
    CHECK(sol.leader_policy == MixedPolicy{1.0});
    CHECK(sol.follower_action == 1);
    CHECK(sol.leader_value == Catch::Approx(1.0));
  }
}

TEST_CASE("stage solvers: optimistic tie-breaking favors the leader") {
  // Both follower columns are always best responses; leader prefers column 1.
  StageMatrices m{{{1, 5}, {2, 3}}, {{0, 0}, {0, 0}}};
  for (StageSolution sol : {solve_stackelberg_milp(m), solve_stackelberg_multilp(m)}) {
    check_solution_invariants(m, sol);
    CHECK(sol.leader_value == Catch::Approx(5.0).margin(1e-7));
    CHECK(sol.follower_action == 1);
  }
}

TEST_CASE("stage solvers: milp and multilp agree on random games") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    int na = 1 + static_cast<int>(rng() % 6), nb = 1 + static_cast<int>(rng() % 6);
    StageMatrices m{random_matrix(rng, na, nb), random_matrix(rng, na, nb)};
    StageSolution a = solve_stackelberg_milp(m);
    StageSolution b = solve_stackelberg_multilp(m);
    check_solution_invariants(m, a);
    check_solution_invariants(m, b);
    CHECK(a.leader_value == Catch::Approx(b.leader_value).margin(1e-6));

    // leader value dominates every pure commitment under optimistic response
    double best_pure = -kInf;
    for (int i = 0; i < na; ++i) {
      MixedPolicy pure(na, 0.0);
      pure[i] = 1.0;
      double row_best = -kInf;
      for (int j : follower_best_response_set(m.follower, pure))
        row_best = std::max(row_best, m.leader[i][j]);
      best_pure = std::max(best_pure, row_best);
    }
    CHECK(a.leader_value >= best_pure - 1e-9);
  }
}

TEST_CASE("build_stage_matrices: constant utility, zero continuation") {
  GameSpec g;
  g.horizon = 1;
  g.leader_action_count = [](const StateId&) { return 2; };
  g.follower_action_count = [](const StateId&) { return 3; };
  g.transition = [](const StateId& s, int, int) { return Distribution{{s, 1.0}}; };
  g.stage_utility = [](const StateId&, int, int) { return std::pair{4.0, 4.0}; };
  g.terminal_utility = [](const StateId&) { return std::pair{0.0, 0.0}; };
  StageMatrices m = build_stage_matrices({"s"}, g, nullptr);
  for (auto& row : m.leader)
    for (double v : row) CHECK(v == Catch::Approx(4.0));
}

TEST_CASE("build_stage_matrices: deterministic transition to valued successor") {
  GameSpec g;
  g.horizon = 2;
  g.leader_action_count = [](const StateId&) { return 2; };
  g.follower_action_count = [](const StateId&) { return 2; };
  g.transition = [](const StateId&, int, int) { return Distribution{{{"next"}, 1.0}}; };
  g.stage_utility = [](const StateId&, int, int) { return std::pair{0.0, 0.0}; };
  g.terminal_utility = [](const StateId&) { return std::pair{0.0, 0.0}; };
  ValueTable v;
  v.values[{"next"}] = {10.0, -2.0};
  StageMatrices m = build_stage_matrices({"s"}, g, &v);
  for (auto& row : m.leader)
    for (double val : row) CHECK(val == Catch::Approx(10.0));
  for (auto& row : m.follower)
    for (double val : row) CHECK(val == Catch::Approx(-2.0));
}

TEST_CASE("build_stage_matrices: four-outcome expectation") {
  // hand expectation over the failure-split branches
  GameSpec g;
  g.horizon = 2;
  g.leader_action_count = [](const StateId&) { return 1; };
  g.follower_action_count = [](const StateId&) { return 1; };
  g.transition = [](const StateId&, int, int) {
    return Distribution{{{"s1"}, 0.81}, {{"s2"}, 0.09}, {{"s3"}, 0.09}, {{"s4"}, 0.01}};
  };
  g.stage_utility = [](const StateId&, int, int) { return std::pair{0.0, 0.0}; };
  g.terminal_utility = [](const StateId&) { return std::pair{0.0, 0.0}; };
  ValueTable v;
  v.values[{"s1"}] = {3.0, 3.0};
  v.values[{"s2"}] = {-1.0, -1.0};
  v.values[{"s3"}] = {5.0, 5.0};
  v.values[{"s4"}] = {100.0, 100.0};
  double expected = 0.81 * 3.0 + 0.09 * -1.0 + 0.09 * 5.0 + 0.01 * 100.0;
  StageMatrices m = build_stage_matrices({"s"}, g, &v);
  CHECK(m.leader[0][0] == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("build_stage_matrices: missing successor value names the state") {
  GameSpec g;
  g.horizon = 2;
  g.leader_action_count = [](const StateId&) { return 1; };
  g.follower_action_count = [](const StateId&) { return 1; };
  g.transition = [](const StateId&, int, int) { return Distribution{{{"ghost"}, 1.0}}; };
  g.stage_utility = [](const StateId&, int, int) { return std::pair{0.0, 0.0}; };
  g.terminal_utility = [](const StateId&) { return std::pair{0.0, 0.0}; };
  ValueTable v;
  CHECK_THROWS_WITH(build_stage_matrices({"s"}, g, &v),
                    Catch::Matchers::ContainsSubstring("ghost"));
}

TEST_CASE("dump_stage_game prints both labeled matrices") {
  StageMatrices m{{{1.5, 2}, {3, 4}}, {{5, 6}, {7, 8}}};
  std::string dump = dump_stage_game(m);
  CHECK(dump.find("U_A\n1.5 2\n3 4\n") != std::string::npos);
  CHECK(dump.find("U_B\n5 6\n7 8\n") != std::string::npos);
}
