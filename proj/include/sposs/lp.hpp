#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sposs {

struct SppInstance;

/// max c·x  s.t.  A x <= b,  0 <= x <= u.  Requires b >= 0 so that x = 0 is
/// a feasible starting vertex.
struct DenseLp {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  /// Per-variable upper bound; +infinity allowed.
  std::vector<double> upper;
  /// Optional variable names used by dump().
  std::vector<std::string> names;

  std::size_t variables() const { return objective.size(); }
  /// Plain-text equation listing.
  std::string dump() const;
};

enum class LpStatus { kOptimal, kIterationLimit };

struct LpSolution {
  std::vector<double> x;
  double value = 0.0;
  LpStatus status = LpStatus::kOptimal;
  std::size_t iterations = 0;
  double max_residual = 0.0;
};

inline constexpr double kLpTolerance = 1e-9;

/// Bounded-variable primal simplex on a dense tableau with Bland's rule.
/// Throws InvariantError if the final point violates a constraint by more
/// than kLpTolerance or the problem is unbounded.
LpSolution solve(const DenseLp& lp, std::size_t max_iterations = 100000);

/// Largest violation of any row or bound by x.
double lp_max_residual(const DenseLp& lp, const std::vector<double>& x);

/// Variables: x_0..x_{n-1} (elements), then y_0..y_{U-1} (points).
/// Rows: y_j - sum_{i covers j} x_i <= 0 for each point, then the
/// matroid polytope rows. Bounds: x_i <= p, y_j <= 1. Objective weight of
/// y_j is the objective's point value.
struct CoverageLp {
  DenseLp lp;
  std::size_t elements = 0;
  std::size_t points = 0;
};

/// Uniform and Partition matroids (no views) and Rank1 systems are
/// supported; anything else throws KindError.
CoverageLp build_coverage_lp(const SppInstance& inst);

struct CoverageLpSolution {
  std::vector<double> x;
  std::vector<double> y;
  double value = 0.0;
  LpStatus status = LpStatus::kOptimal;
};

CoverageLpSolution solve_coverage_lp(const SppInstance& inst);

}  // namespace sposs
