#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sposs/crs.hpp"
#include "sposs/element_set.hpp"
#include "sposs/matroid.hpp"
#include "sposs/stochastic.hpp"

namespace sposs {

struct ExchangeStep {
  enum class Action { kAdd, kDrop, kSwap };
  ElementId element = 0;
  Action action = Action::kAdd;
  /// Exchange partner f for swaps.
  std::optional<ElementId> partner;
  bool active = false;
};

struct ExchangeTrace {
  ElementSet s1;
  ElementSet s2;
  std::vector<ExchangeStep> steps;

  nlohmann::json to_json() const;
  static ExchangeTrace from_json(const nlohmann::json& j);
  /// Re-applies the steps to (s1, s2) and returns the final S2.
  ElementSet replay() const;
};

struct ExchangeResult {
  ElementSet t;
  ExchangeTrace trace;
};

/// Walks S1∖S2 in ascending id. An element outside span(S2) is added to S2
/// when active and dropped from S1 otherwise; a spanned element e is swapped
/// with its exchange partner f: active means S2 ← S2 − f + e, inactive means
/// S1 ← S1 − e + f. Returns the final S2 and checks its guarantees.
ExchangeResult construct_t(const MatroidOracle& m, const ElementSet& s1,
                           const ElementSet& s2, const ElementSet& r);

/// Stitches the samples Q_1..Q_tau into one set feasible in every matroid.
/// For t = 1..tau: I ← Q_t ∩ R, and every later Q_i is replaced by the
/// intersection over matroids of construct_t(M_l, Q_t, Q_i, R). Returns the
/// final I.
ElementSet construct_i(const std::vector<MatroidOracle>& matroids,
                       const std::vector<ElementSet>& samples,
                       const ElementSet& r);

/// eps^3 p / (20 ln(1/eps))
double crucial_threshold(double p, double eps);

struct CrucialSplit {
  ElementSet crucial;
  ElementSet non_crucial;
  double threshold = 0.0;
};

CrucialSplit classify_crucial(const Marginals& q, double p, double eps);

/// Adds edges of m_nc in ascending id when both endpoints are still free.
ElementSet augment_matching(const ElementSet& m_crs, const ElementSet& m_nc,
                            const Graph& g);

struct SplitInstance {
  SppInstance instance;
  /// origin[new_edge] = original edge.
  std::vector<ElementId> origin;
  double copies_exact = 0.0;
  std::size_t copies = 0;
  double split_p = 0.0;
};

/// Replaces each edge with ceil(c) parallel copies, c = ln(1/(1-p)) /
/// ln(1/(1-eps^4 p)), and activates copies with probability eps^4 p.
SplitInstance split_edges(const SppInstance& inst, double eps);

/// Probability that at least one of `copies` copies is active.
double copy_activation_probability(double split_p, double copies);

/// e is in the result iff some copy of e is in q_split.
ElementSet pull_back(const SplitInstance& split, const ElementSet& q_split);

/// Each round spans the matroid left after deleting all earlier rounds.
bool is_nss(const MatroidOracle& m, const std::vector<ElementSet>& rounds);

struct HybridWitness {
  ElementSet m_crs;
  ElementSet m_nc;
  ElementSet m_aug;
  double weight_crs = 0.0;
  double weight_aug = 0.0;
};

/// Builds the augmented matching for one activation R: M_CRS resolves the
/// active crucial CRS-phase edges, M_NC is the max-weight matching on the
/// active non-crucial greedy-phase edges.
HybridWitness hybrid_witness(const SppInstance& inst, const CrucialSplit& split,
                             const ElementSet& crs_part,
                             const ElementSet& greedy_part, const ElementSet& r,
                             const CrsScheme& crs, const std::vector<double>& x,
                             Rng& rng);

}  // namespace sposs
