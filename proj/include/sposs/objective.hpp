#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sposs/element_set.hpp"

namespace sposs {

/// Largest atom count equal_partition_instance will materialize.
inline constexpr std::size_t kEqualPartitionAtomLimit = std::size_t{1} << 24;

/// Set function over elements 0..size()-1.
class Objective {
 public:
  enum class Kind { kAdditive, kCoverage, kEqualPartition };

  static Objective additive(WeightVector w);
  /// sets[i] lists the universe points covered by element i. When
  /// `normalized` is set, values are covered/|U| instead of raw counts.
  static Objective coverage(std::size_t universe,
                            std::vector<std::vector<std::size_t>> sets,
                            bool normalized = false);
  /// Equal r-partition family over t = n/r rows, discretized into r^t atoms.
  /// Element (i, j) for row i in [1, t] and part j in [1, r] has id
  /// (i-1)*r + (j-1) and covers atom a iff the i-th most significant base-r
  /// digit of a equals j-1. Normalized measure.
  static Objective equal_partition(std::size_t n, std::size_t r);

  Kind kind() const { return kind_; }
  bool is_additive() const { return kind_ == Kind::kAdditive; }
  /// Number of elements.
  std::size_t size() const { return size_; }

  const WeightVector& weights() const { return weights_; }
  std::size_t universe() const { return universe_; }
  const std::vector<std::vector<std::size_t>>& sets() const { return sets_; }
  bool normalized() const { return normalized_; }
  std::size_t partition_n() const { return ep_n_; }
  std::size_t partition_r() const { return ep_r_; }

  double evaluate(const ElementSet& s) const;
  /// Number of universe points covered by s (coverage kinds only).
  std::size_t covered_points(const ElementSet& s) const;
  /// Gain of adding e to the coverage bitmap `acc`.
  std::size_t coverage_gain(const std::vector<std::uint64_t>& acc,
                            ElementId e) const;
  const std::vector<std::uint64_t>& bitmap(ElementId e) const {
    return bits_[e];
  }
  /// Scale turning a point count into an objective value.
  double point_value() const;

 private:
  Objective() = default;
  void check(const ElementSet& s) const;

  Kind kind_ = Kind::kAdditive;
  std::size_t size_ = 0;
  WeightVector weights_;
  std::size_t universe_ = 0;
  std::vector<std::vector<std::size_t>> sets_;
  std::vector<std::vector<std::uint64_t>> bits_;
  bool normalized_ = false;
  std::size_t ep_n_ = 0;
  std::size_t ep_r_ = 0;
};

/// 1 - prod_i (1 - s_i / r) for an incidence vector s with entries in [0, r].
double incidence_value(const std::vector<std::size_t>& s, std::size_t r);

struct MultilinearEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Monte Carlo estimate of the multilinear extension at x.
MultilinearEstimate estimate_multilinear(const Objective& obj,
                                         const std::vector<double>& x,
                                         std::size_t trials,
                                         std::uint64_t seed);

}  // namespace sposs
