#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sposs/element_set.hpp"
#include "sposs/rng.hpp"
#include "sposs/stochastic.hpp"

namespace sposs {

/// Output of a sparsifier: one realization `q` plus a producer that draws
/// fresh realizations for evaluation.
struct SparseSet {
  std::string algorithm;
  nlohmann::json params = nlohmann::json::object();
  ElementSet q;
  bool randomized = false;
  QueryProducer producer;

  /// Stochastic-optimum samples (intersection sampling, greedy phase of the
  /// matching hybrid), in draw order.
  std::vector<ElementSet> samples;
  /// Matching hybrid split.
  ElementSet crs_part;
  ElementSet greedy_part;
  /// Bases removed by the nested spanning-set construction, in order.
  std::vector<ElementSet> nss_rounds;
  /// Fractional LP point for the coverage sparsifier.
  std::vector<double> fractional;
  std::vector<std::string> notes;
};

/// max(1, ceil(ln(1/eps) / p))
std::size_t nss_round_count(double p, double eps);
/// max(1, ceil((2/(eps p)) ln(2/eps)))
std::size_t intersection_round_count(double p, double eps);
/// ceil(2000 ln(1/eps)^2 / (eps^4 p))
std::size_t matching_greedy_round_count(double p, double eps);

/// Greedy rounds above this need an explicit T override.
inline constexpr std::size_t kMaxGreedyRounds = 1000000;

/// Includes e independently with probability min(1, q_e/p).
SparseSet crs_sparsify(const SppInstance& inst, const Marginals& q, Rng& rng);

/// Union of ceil(ln(1/eps)/p) successively deleted max-weight bases.
/// Deterministic. Single matroid, additive objective.
SparseSet matroid_nss_sparsify(const SppInstance& inst, double eps);

/// Union of ceil((2/(eps p)) ln(2/eps)) stochastic-optimum samples.
/// Intersection or single matroid, additive objective.
SparseSet intersection_sample_sparsify(const SppInstance& inst, double eps,
                                       Rng& rng);

/// CRS phase on q plus T stochastic-optimum samples. Matching, additive.
SparseSet matching_hybrid_sparsify(const SppInstance& inst, double eps,
                                   const Marginals& q, Rng& rng,
                                   std::optional<std::size_t> t_override);

/// Solves the coverage LP once and rounds x_i/p independently per draw.
SparseSet coverage_lp_sparsify(const SppInstance& inst, Rng& rng);

struct DegreeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean of |Q| / rank over `trials` draws.
DegreeEstimate measure_degree(const QueryProducer& producer,
                              const SppInstance& inst, std::size_t trials,
                              std::uint64_t seed);

/// Q = E.
SparseSet identity_sparsify(const SppInstance& inst);

}  // namespace sposs
