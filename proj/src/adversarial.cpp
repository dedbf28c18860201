#include "sposs/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sposs/error.hpp"

namespace sposs {

Rank1Mode parse_rank1_mode(const std::string& s) {
  if (s == "example31") return Rank1Mode::kExample31;
  if (s == "prop45") return Rank1Mode::kProp45;
  throw InvalidArgumentError("unknown rank1 mode '" + s +
                             "' (expected example31 or prop45)");
}

const char* rank1_mode_name(Rank1Mode mode) {
  return mode == Rank1Mode::kExample31 ? "example31" : "prop45";
}

SppInstance rank1_hard_instance(std::size_t n, Rank1Mode mode,
                                std::uint64_t seed) {
  if (n == 0) throw InvalidArgumentError("rank1 instance needs n >= 1");
  const double p = mode == Rank1Mode::kExample31
                       ? 1.0 / static_cast<double>(n)
                       : 1.0 / std::sqrt(static_cast<double>(n));
  SppInstance inst("rank1_" + std::string(rank1_mode_name(mode)) + "_n" +
                       std::to_string(n),
                   SetSystem::rank1(n), Objective::additive(WeightVector(n, 1.0)),
                   p, seed);
  inst.metadata = {{"generator", "rank1"},
                   {"n", n},
                   {"mode", rank1_mode_name(mode)}};
  return inst;
}

std::size_t block_reference_m(std::size_t k) {
  if (k <= 1) return 1;
  const double kk = static_cast<double>(k);
  return static_cast<std::size_t>(
      std::ceil(std::pow(kk, kk) * std::log(kk) - 1e-9));
}

SppInstance block_hard_instance(std::size_t m, std::size_t k,
                                std::uint64_t seed) {
  if (m == 0 || k == 0) {
    throw InvalidArgumentError("block instance needs m >= 1 and k >= 1");
  }
  SppInstance inst("blocks_m" + std::to_string(m) + "_k" + std::to_string(k),
                   SetSystem::blocks(m, k),
                   Objective::additive(WeightVector(m * k, 1.0)),
                   1.0 / static_cast<double>(k), seed);
  inst.metadata = {{"generator", "blocks"},
                   {"m", m},
                   {"k", k},
                   {"reference_m", block_reference_m(k)}};
  return inst;
}

SppInstance equal_partition_hard_instance(std::size_t n, std::size_t r,
                                          double p, std::uint64_t seed) {
  SppInstance inst(
      "equal_partition_n" + std::to_string(n) + "_r" + std::to_string(r),
      SetSystem::single_matroid(MatroidOracle::uniform(n, r)),
      Objective::equal_partition(n, r), p, seed);
  inst.metadata = {{"generator", "equal_partition"},
                   {"n", n},
                   {"r", r},
                   {"hard_regime", p <= 1.0 / 3.0}};
  return inst;
}

double rank1_expected_opt(std::size_t n, double p) {
  return 1.0 - std::pow(1.0 - p, static_cast<double>(n));
}

double rank1_fixed_query_ratio(std::size_t n, double p, std::size_t s) {
  const double full = rank1_expected_opt(n, p);
  return full > 0.0 ? rank1_expected_opt(s, p) / full : 1.0;
}

Marginals rank1_exact_marginals(std::size_t n, double p) {
  Marginals m;
  m.estimator = Marginals::Estimator::kClosedForm;
  m.q.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    m.q[e] = p * std::pow(1.0 - p, static_cast<double>(e));
  }
  return m;
}

namespace {

// P[Bin(c, p) <= t]
double binomial_cdf(std::size_t c, double p, std::size_t t) {
  if (t >= c) return 1.0;
  double sum = 0.0;
  double coef = 1.0;
  for (std::size_t i = 0; i <= t; ++i) {
    sum += coef * std::pow(p, static_cast<double>(i)) *
           std::pow(1.0 - p, static_cast<double>(c - i));
    coef = coef * static_cast<double>(c - i) / static_cast<double>(i + 1);
  }
  return sum;
}

}  // namespace

double blocks_expected_max(const std::vector<std::size_t>& counts, double p) {
  std::size_t top = 0;
  for (std::size_t c : counts) top = std::max(top, c);
  double e = 0.0;
  for (std::size_t t = 1; t <= top; ++t) {
    double all_below = 1.0;
    for (std::size_t c : counts) all_below *= binomial_cdf(c, p, t - 1);
    e += 1.0 - all_below;
  }
  return e;
}

BlockQueryResult best_block_query(std::size_t m, std::size_t k, double p,
                                  std::size_t budget) {
  BlockQueryResult best;
  best.full_opt = blocks_expected_max(std::vector<std::size_t>(m, k), p);
  std::vector<std::size_t> counts;
  // Nonincreasing count vectors: blocks are interchangeable.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t cap,
                                                          std::size_t left) {
    double v = blocks_expected_max(counts, p);
    if (v > best.query_opt) {
      best.query_opt = v;
      best.counts = counts;
    }
    if (counts.size() == m) return;
    for (std::size_t c = std::min(cap, left); c >= 1; --c) {
      counts.push_back(c);
      rec(c, left - c);
      counts.pop_back();
    }
  };
  rec(k, budget);
  best.ratio = best.full_opt > 0.0 ? best.query_opt / best.full_opt : 1.0;
  return best;
}

}  // namespace sposs
