#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgcm {

using Matrix = std::vector<std::vector<double>>;

// Contract violations are programming errors (bad dimensions, broken preconditions).
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Numerical failures inside a solver (cycling guard, unexpected infeasibility).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// User-facing input problems (bad config files, malformed matrices).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Search exceeded a configured cap.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

inline std::size_t matrix_rows(const Matrix& m) { return m.size(); }
inline std::size_t matrix_cols(const Matrix& m) { return m.empty() ? 0 : m[0].size(); }

inline void check_rectangular(const Matrix& m, const char* name) {
  for (const auto& row : m) {
    if (row.size() != matrix_cols(m))
      throw ContractViolation(std::string(name) + ": ragged matrix");
    for (double v : row)
      if (!std::isfinite(v))
        throw ContractViolation(std::string(name) + ": non-finite entry");
  }
}

// Uniform double in [0,1) from a raw 64-bit generator draw. Used instead of
// std::uniform_real_distribution so that episode logs are reproducible across
// standard library implementations.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sgcm
