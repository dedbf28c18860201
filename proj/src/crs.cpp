#include "sposs/crs.hpp"

#include <algorithm>
#include <cmath>

#include "sposs/error.hpp"

namespace sposs {

CrsScheme CrsScheme::ordered_greedy_random(SetSystem sys) {
  return CrsScheme(Kind::kOrderedGreedyRandom, std::move(sys));
}

CrsScheme CrsScheme::ordered_greedy_weight(SetSystem sys, WeightVector w) {
  CrsScheme crs(Kind::kOrderedGreedyWeight, std::move(sys));
  for (ElementId e : crs.system_.ground()) {
    if (e >= w.size()) {
      throw DomainError("weight vector has no entry for element " +
                        std::to_string(e));
    }
  }
  crs.weights_ = std::move(w);
  return crs;
}

CrsScheme CrsScheme::rank1_uniform(SetSystem sys) {
  if (sys.kind() != SetSystem::Kind::kRank1) {
    throw KindError("rank1_uniform needs a rank1 system");
  }
  return CrsScheme(Kind::kRank1Uniform, std::move(sys));
}

const char* CrsScheme::name() const {
  switch (kind_) {
    case Kind::kOrderedGreedyRandom: return "ordered_greedy_random";
    case Kind::kOrderedGreedyWeight: return "ordered_greedy_weight";
    case Kind::kRank1Uniform: return "rank1_uniform";
  }
  return "unknown";
}

ElementSet CrsScheme::resolve(const std::vector<double>& /*x*/,
                              const ElementSet& a, Rng& rng) const {
  if (!a.is_subset_of(system_.ground())) {
    throw DomainError("resolve: active set leaves the ground set");
  }
  const ElementSet& ground = system_.ground();
  std::vector<ElementId> order(a.begin(), a.end());
  if (kind_ != Kind::kOrderedGreedyWeight) {
    // One priority per ground element, drawn in ground order.
    std::vector<double> prio(ground.empty() ? 0 : ground.ids().back() + 1, 0.0);
    for (ElementId e : ground) prio[e] = rng.uniform();
    std::stable_sort(order.begin(), order.end(), [&](ElementId x, ElementId y) {
      return prio[x] < prio[y];
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](ElementId x, ElementId y) {
      return weights_[x] > weights_[y];
    });
  }

  ElementSet out;
  if (kind_ == Kind::kRank1Uniform) {
    if (!order.empty()) out.insert(order.front());
  } else {
    for (ElementId e : order) {
      ElementSet grown = out.with(e);
      if (system_.is_feasible(grown)) out = std::move(grown);
    }
  }
  if (!out.is_subset_of(a) || !system_.is_feasible(out)) {
    throw InvariantError("CRS produced an infeasible or foreign set");
  }
  return out;
}

BalanceReport empirical_balance(const CrsScheme& crs,
                                const std::vector<double>& x,
                                std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidArgumentError("trials must be >= 1");
  const ElementSet& ground = crs.system().ground();
  const std::size_t n = ground.empty() ? 0 : ground.ids().back() + 1;
  if (x.size() < n) throw InvalidArgumentError("x must cover every element");

  std::vector<std::size_t> active(n, 0), kept(n, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, derive_stream(stream_tag::kBalance, t));
    std::vector<ElementId> drawn;
    for (ElementId e : ground) {
      if (rng.bernoulli(x[e])) drawn.push_back(e);
    }
    ElementSet a(std::move(drawn));
    for (ElementId e : a) ++active[e];
    for (ElementId e : crs.resolve(x, a, rng)) ++kept[e];
  }

  BalanceReport rep;
  rep.trials = trials;
  rep.balance.assign(n, std::nullopt);
  rep.std_error.assign(n, 0.0);
  rep.active_count = active;
  for (ElementId e : ground) {
    if (active[e] == 0) {
      rep.undefined.push_back(e);
      continue;
    }
    double b = static_cast<double>(kept[e]) / static_cast<double>(active[e]);
    rep.balance[e] = b;
    rep.std_error[e] = std::sqrt(b * (1.0 - b) / static_cast<double>(active[e]));
    if (!rep.argmin || b < rep.min_balance) {
      rep.min_balance = b;
      rep.argmin = e;
    }
  }
  return rep;
}

MonotonicityReport monotonicity_probe(const CrsScheme& crs,
                                      const std::vector<double>& x,
                                      ElementId e, const ElementSet& a1,
                                      const ElementSet& a2, std::size_t trials,
                                      std::uint64_t seed, double tolerance) {
  if (trials == 0) throw InvalidArgumentError("trials must be >= 1");
  if (!a1.contains(e) || !a1.is_subset_of(a2)) {
    throw PreconditionError("monotonicity_probe needs e in A1 and A1 ⊆ A2");
  }
  std::size_t hit1 = 0, hit2 = 0;
  double sum_d = 0.0, sum_d2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng1(seed, derive_stream(stream_tag::kCrs, t));
    Rng rng2 = rng1;
    int k1 = crs.resolve(x, a1, rng1).contains(e) ? 1 : 0;
    int k2 = crs.resolve(x, a2, rng2).contains(e) ? 1 : 0;
    hit1 += static_cast<std::size_t>(k1);
    hit2 += static_cast<std::size_t>(k2);
    double d = k1 - k2;
    sum_d += d;
    sum_d2 += d * d;
  }
  MonotonicityReport rep;
  const double n = static_cast<double>(trials);
  rep.trials = trials;
  rep.prob_small = static_cast<double>(hit1) / n;
  rep.prob_large = static_cast<double>(hit2) / n;
  if (trials > 1) {
    double mean = sum_d / n;
    double var = std::max(0.0, (sum_d2 - n * mean * mean) / (n - 1.0));
    rep.std_error = std::sqrt(var / n);
  }
  rep.holds = rep.prob_small + tolerance >= rep.prob_large;
  return rep;
}

}  // namespace sposs
