#include "sposs/objective.hpp"

#include <bit>
#include <cmath>

#include "sposs/error.hpp"
#include "sposs/rng.hpp"

namespace sposs {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

Objective Objective::additive(WeightVector w) {
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgumentError("additive weights must be finite and >= 0");
    }
  }
  Objective obj;
  obj.kind_ = Kind::kAdditive;
  obj.size_ = w.size();
  obj.weights_ = std::move(w);
  return obj;
}

Objective Objective::coverage(std::size_t universe,
                              std::vector<std::vector<std::size_t>> sets,
                              bool normalized) {
  Objective obj;
  obj.kind_ = Kind::kCoverage;
  obj.size_ = sets.size();
  obj.universe_ = universe;
  obj.normalized_ = normalized;
  obj.bits_.assign(sets.size(),
                   std::vector<std::uint64_t>(words_for(universe), 0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t point : sets[i]) {
      if (point >= universe) {
        throw InvalidArgumentError("coverage point " + std::to_string(point) +
                                   " outside universe of size " +
                                   std::to_string(universe));
      }
      obj.bits_[i][point / 64] |= std::uint64_t{1} << (point % 64);
    }
  }
  obj.sets_ = std::move(sets);
  return obj;
}

Objective Objective::equal_partition(std::size_t n, std::size_t r) {
  if (r < 2) throw InvalidArgumentError("equal partition needs r >= 2");
  if (n == 0 || n % r != 0) {
    throw InvalidArgumentError("equal partition needs r to divide n");
  }
  const std::size_t rows = n / r;
  std::size_t atoms = 1;
  for (std::size_t i = 0; i < rows; ++i) {
    if (atoms > kEqualPartitionAtomLimit / r) {
      throw SizeLimitError("equal partition needs more than 2^24 atoms");
    }
    atoms *= r;
  }
  Objective obj;
  obj.kind_ = Kind::kEqualPartition;
  obj.size_ = n;
  obj.universe_ = atoms;
  obj.normalized_ = true;
  obj.ep_n_ = n;
  obj.ep_r_ = r;
  obj.bits_.assign(n, std::vector<std::uint64_t>(words_for(atoms), 0));
  // Row i (0-based) reads digit i from the most significant end.
  std::vector<std::size_t> place(rows);
  std::size_t value = 1;
  for (std::size_t i = rows; i-- > 0;) {
    place[i] = value;
    value *= r;
  }
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t i = 0; i < rows; ++i) {
      std::size_t digit = (a / place[i]) % r;
      std::size_t e = i * r + digit;
      obj.bits_[e][a / 64] |= std::uint64_t{1} << (a % 64);
    }
  }
  return obj;
}

void Objective::check(const ElementSet& s) const {
  if (!s.empty() && s.ids().back() >= size_) {
    throw DomainError("element " + std::to_string(s.ids().back()) +
                      " outside objective ground of size " +
                      std::to_string(size_));
  }
}

double Objective::point_value() const {
  if (!normalized_) return 1.0;
  return universe_ == 0 ? 0.0 : 1.0 / static_cast<double>(universe_);
}

std::size_t Objective::covered_points(const ElementSet& s) const {
  check(s);
  if (kind_ == Kind::kAdditive) {
    throw KindError("covered_points needs a coverage objective");
  }
  if (s.empty()) return 0;
  std::size_t count = 0;
  const std::size_t words = words_for(universe_);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t acc = 0;
    for (ElementId e : s) acc |= bits_[e][w];
    count += static_cast<std::size_t>(std::popcount(acc));
  }
  return count;
}

std::size_t Objective::coverage_gain(const std::vector<std::uint64_t>& acc,
                                     ElementId e) const {
  std::size_t gain = 0;
  const auto& b = bits_[e];
  for (std::size_t w = 0; w < b.size(); ++w) {
    gain += static_cast<std::size_t>(std::popcount(b[w] & ~acc[w]));
  }
  return gain;
}

double Objective::evaluate(const ElementSet& s) const {
  check(s);
  if (kind_ == Kind::kAdditive) return total_weight(weights_, s);
  return static_cast<double>(covered_points(s)) * point_value();
}

double incidence_value(const std::vector<std::size_t>& s, std::size_t r) {
  if (r == 0) throw InvalidArgumentError("incidence_value needs r >= 1");
  double miss = 1.0;
  for (std::size_t si : s) {
    if (si > r) throw InvalidArgumentError("incidence entry exceeds r");
    miss *= 1.0 - static_cast<double>(si) / static_cast<double>(r);
  }
  return 1.0 - miss;
}

MultilinearEstimate estimate_multilinear(const Objective& obj,
                                         const std::vector<double>& x,
                                         std::size_t trials,
                                         std::uint64_t seed) {
  if (trials == 0) throw InvalidArgumentError("trials must be >= 1");
  if (x.size() != obj.size()) {
    throw InvalidArgumentError("x must have one entry per element");
  }
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
      throw InvalidArgumentError("x must lie in [0,1]");
    }
  }
  Rng rng(seed, stream_tag::kMultilinear);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<ElementId> pick;
  for (std::size_t t = 0; t < trials; ++t) {
    pick.clear();
    for (std::size_t e = 0; e < x.size(); ++e) {
      if (rng.bernoulli(x[e])) pick.push_back(static_cast<ElementId>(e));
    }
    double v = obj.evaluate(ElementSet(pick));
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  double var = trials > 1 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
  if (var < 0.0) var = 0.0;
  return {mean, std::sqrt(var / n), trials};
}

}  // namespace sposs
