#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sposs/element_set.hpp"
#include "sposs/rng.hpp"
#include "sposs/set_system.hpp"

namespace sposs {

/// Contention resolution scheme: maps an active set A to a feasible subset.
///
/// Random choices are made through one priority per ground element drawn in
/// ground order, so two calls with equally seeded generators see the same
/// priorities regardless of A. monotonicity_probe relies on that coupling.
class CrsScheme {
 public:
  enum class Kind { kOrderedGreedyRandom, kOrderedGreedyWeight, kRank1Uniform };

  static CrsScheme ordered_greedy_random(SetSystem sys);
  /// Scan order: weight descending, ties by ascending id.
  static CrsScheme ordered_greedy_weight(SetSystem sys, WeightVector w);
  /// Keeps one uniformly random element of A. Rank1 systems only.
  static CrsScheme rank1_uniform(SetSystem sys);

  Kind kind() const { return kind_; }
  const char* name() const;
  const SetSystem& system() const { return system_; }

  /// x is accepted for interface parity; the shipped schemes ignore it.
  ElementSet resolve(const std::vector<double>& x, const ElementSet& a,
                     Rng& rng) const;

 private:
  CrsScheme(Kind kind, SetSystem sys) : kind_(kind), system_(std::move(sys)) {}

  Kind kind_;
  SetSystem system_;
  WeightVector weights_;
};

struct BalanceReport {
  /// Pr[e kept | e active]; empty when e was never active.
  std::vector<std::optional<double>> balance;
  std::vector<double> std_error;
  std::vector<std::size_t> active_count;
  double min_balance = 1.0;
  /// Element attaining min_balance, if any element was ever active.
  std::optional<ElementId> argmin;
  std::vector<ElementId> undefined;
  std::size_t trials = 0;
};

/// Draws R(x) (each e independently with probability x_e), resolves it, and
/// tallies survival per element.
BalanceReport empirical_balance(const CrsScheme& crs,
                                const std::vector<double>& x,
                                std::size_t trials, std::uint64_t seed);

struct MonotonicityReport {
  double prob_small = 0.0;  // Pr[e in resolve(A1)]
  double prob_large = 0.0;  // Pr[e in resolve(A2)]
  double std_error = 0.0;   // of the coupled difference
  bool holds = true;
  std::size_t trials = 0;
};

/// Estimates both survival probabilities under shared randomness and checks
/// prob_small >= prob_large - tolerance.
MonotonicityReport monotonicity_probe(const CrsScheme& crs,
                                      const std::vector<double>& x,
                                      ElementId e, const ElementSet& a1,
                                      const ElementSet& a2, std::size_t trials,
                                      std::uint64_t seed,
                                      double tolerance = 0.0);

}  // namespace sposs
