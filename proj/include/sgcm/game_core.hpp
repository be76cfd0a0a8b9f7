#pragma once

#include <compare>
#include <functional>
#include <map>
#include <utility>

#include "sgcm/common.hpp"

namespace sgcm {

// Canonical encoding of a concrete game state. Encodings must be injective:
// two states compare equal iff the underlying concrete states are equal.
struct StateId {
  std::string key;
  auto operator<=>(const StateId&) const = default;
};

// Leader mixed strategy over a state's action list, one probability per action.
using MixedPolicy = std::vector<double>;

inline bool is_distribution(const MixedPolicy& p, double tol = 1e-9) {
  double sum = 0.0;
  for (double v : p) {
    if (v < -tol || v > 1.0 + tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

struct Outcome {
  StateId to;
  double prob;
};
using Distribution = std::vector<Outcome>;

// Drops probability dust, merges duplicate successors and renormalizes.
inline Distribution clean_distribution(Distribution d) {
  std::map<StateId, double> merged;
  for (auto& o : d) {
    if (o.prob < 0.0) throw ContractViolation("transition: negative probability");
    merged[o.to] += o.prob;
  }
  Distribution out;
  double sum = 0.0;
  for (auto& [id, p] : merged) {
    if (p < 1e-15) continue;
    out.push_back({id, p});
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ContractViolation("transition: probabilities sum to " + std::to_string(sum));
  for (auto& o : out) o.prob /= sum;
  return out;
}

// Finite-horizon two-player stochastic game with leader commitment.
// Action sets are state-dependent and indexed 0..count-1; index 0 is
// conventionally the no-op. All callables must be pure.
struct GameSpec {
  int horizon = 1;
  double discount = 1.0;
  std::function<int(const StateId&)> leader_action_count;
  std::function<int(const StateId&)> follower_action_count;
  std::function<Distribution(const StateId&, int, int)> transition;
  std::function<std::pair<double, double>(const StateId&, int, int)> stage_utility;
  std::function<std::pair<double, double>(const StateId&)> terminal_utility;
};

// Per-stage value function, defined exactly on that stage's reachable set.
struct ValueTable {
  std::map<StateId, std::pair<double, double>> values;

  bool contains(const StateId& s) const { return values.count(s) != 0; }
  const std::pair<double, double>& at(const StateId& s) const {
    auto it = values.find(s);
    if (it == values.end())
      throw SolverError("value table missing state " + s.key);
    return it->second;
  }
};

// pi_A^T U e_b for a pure follower column b.
inline double expected_stage_value(const Matrix& u, const MixedPolicy& pi_a, int b) {
  if (pi_a.size() != matrix_rows(u))
    throw ContractViolation("expected_stage_value: policy/row mismatch");
  if (b < 0 || static_cast<std::size_t>(b) >= matrix_cols(u))
    throw ContractViolation("expected_stage_value: column out of range");
  double v = 0.0;
  for (std::size_t i = 0; i < pi_a.size(); ++i) v += pi_a[i] * u[i][b];
  return v;
}

// gamma^T * terminal + sum_t gamma^t * stage_utilities[t]
inline double discounted_return(const std::vector<double>& stage_utilities,
                                double terminal, double gamma, int horizon) {
  if (static_cast<int>(stage_utilities.size()) != horizon)
    throw ContractViolation("discounted_return: expected " + std::to_string(horizon) +
                            " stage utilities, got " + std::to_string(stage_utilities.size()));
  double acc = 0.0;
  double g = 1.0;
  for (double u : stage_utilities) {
    acc += g * u;
    g *= gamma;
  }
  return acc + g * terminal;
}

}  // namespace sgcm
