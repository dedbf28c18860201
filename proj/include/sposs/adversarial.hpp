#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sposs/stochastic.hpp"

namespace sposs {

enum class Rank1Mode {
  kExample31,  // p = 1/n
  kProp45,     // p = 1/sqrt(n)
};

Rank1Mode parse_rank1_mode(const std::string& s);
const char* rank1_mode_name(Rank1Mode mode);

/// Rank1(n), unit weights.
SppInstance rank1_hard_instance(std::size_t n, Rank1Mode mode,
                                std::uint64_t seed = 0);

/// Blocks(m, k), unit weights, p = 1/k. Metadata records block_reference_m(k).
SppInstance block_hard_instance(std::size_t m, std::size_t k,
                                std::uint64_t seed = 0);

/// ceil(k^k ln k): the block count the lower-bound construction asks for.
std::size_t block_reference_m(std::size_t k);

/// Uniform(n, r) over the equal r-partition coverage objective.
SppInstance equal_partition_hard_instance(std::size_t n, std::size_t r,
                                          double p, std::uint64_t seed = 0);

/// 1 - (1-p)^n
double rank1_expected_opt(std::size_t n, double p);
/// (1 - (1-p)^s) / (1 - (1-p)^n) for any fixed query set of size s.
double rank1_fixed_query_ratio(std::size_t n, double p, std::size_t s);
/// q_e = p (1-p)^e under ascending-id tie-breaking.
Marginals rank1_exact_marginals(std::size_t n, double p);

/// E[max_b Bin(counts[b], p)] for independent blocks.
double blocks_expected_max(const std::vector<std::size_t>& counts, double p);

struct BlockQueryResult {
  std::vector<std::size_t> counts;  // elements queried per block
  double ratio = 0.0;
  double query_opt = 0.0;
  double full_opt = 0.0;
};

/// Best fixed query set of at most `budget` elements on Blocks(m, k), by
/// exhaustive search over per-block counts (blocks are interchangeable).
BlockQueryResult best_block_query(std::size_t m, std::size_t k, double p,
                                  std::size_t budget);

}  // namespace sposs
