#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sposs/element_set.hpp"
#include "sposs/matroid.hpp"

namespace sposs {

/// Undirected multigraph; edge i is element i.
struct Graph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool is_bipartite() const;
};

struct FeasibleSet {
  ElementSet elements;
  double weight = 0.0;
};

struct RankInfo {
  std::size_t value = 0;
  bool exact = true;
};

/// Largest |S| the exact branch and bound accepts (general matching and
/// matroid intersection).
inline constexpr std::size_t kExactSearchLimit = 22;
/// Largest ground set for which system rank is computed exactly by search.
inline constexpr std::size_t kExactRankLimit = 20;

/// Downward-closed feasibility system.
class SetSystem {
 public:
  enum class Kind { kSingleMatroid, kIntersection, kMatching, kRank1, kBlocks };

  static SetSystem single_matroid(MatroidOracle m);
  /// All matroids must share one ground set.
  static SetSystem intersection(std::vector<MatroidOracle> ms);
  static SetSystem matching(Graph g);
  static SetSystem rank1(std::size_t n);
  /// m blocks of k elements; block i holds ids [i*k, (i+1)*k).
  static SetSystem blocks(std::size_t m, std::size_t k);

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  const ElementSet& ground() const { return ground_; }

  /// SingleMatroid holds one entry, Intersection k entries.
  const std::vector<MatroidOracle>& matroids() const { return matroids_; }
  const Graph& graph() const { return graph_; }
  std::size_t block_count() const { return block_m_; }
  std::size_t block_size() const { return block_k_; }

  bool is_feasible(const ElementSet& s) const;

  RankInfo rank_info() const { return rank_; }
  std::size_t rank() const { return rank_.value; }

  /// Exact max-weight feasible subset of s. Throws SizeLimitError when the
  /// dispatch would need a search over more than kExactSearchLimit elements.
  FeasibleSet max_weight_feasible(const WeightVector& w,
                                  const ElementSet& s) const;

  /// Weight-descending greedy (ties by ascending id). Exact for matroids and
  /// a 1/k approximation for k-intersections; never throws on size.
  FeasibleSet greedy_weight_feasible(const WeightVector& w,
                                     const ElementSet& s) const;

 private:
  SetSystem() = default;
  void check_in_ground(const ElementSet& s) const;
  void init_rank();

  FeasibleSet bipartite_matching(const WeightVector& w,
                                 const ElementSet& s) const;
  FeasibleSet search_matching(const WeightVector& w, const ElementSet& s) const;
  FeasibleSet search_intersection(const WeightVector& w,
                                  const ElementSet& s) const;

  Kind kind_ = Kind::kRank1;
  ElementSet ground_;
  std::vector<MatroidOracle> matroids_;
  Graph graph_;
  bool bipartite_ = false;
  std::size_t block_m_ = 0;
  std::size_t block_k_ = 0;
  RankInfo rank_;
};

}  // namespace sposs
