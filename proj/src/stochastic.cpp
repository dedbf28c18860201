#include "sposs/stochastic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "sposs/error.hpp"

namespace sposs {

SppInstance::SppInstance(std::string name_, SetSystem system_,
                         Objective objective_, double p_, std::uint64_t seed_)
    : name(std::move(name_)),
      system(std::move(system_)),
      objective(std::move(objective_)),
      p(p_),
      seed(seed_) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgumentError("activation probability must lie in [0,1]");
  }
  if (system.ground() != ElementSet::range(objective.size())) {
    throw InvalidArgumentError(
        "system ground must be {0..n-1} with n the objective size (system has " +
        std::to_string(system.ground().size()) + " elements, objective " +
        std::to_string(objective.size()) + ")");
  }
}

ElementSet sample_active(const SppInstance& inst, Rng& rng) {
  std::vector<ElementId> r;
  for (ElementId e : inst.ground()) {
    if (rng.bernoulli(inst.p)) r.push_back(e);
  }
  return ElementSet(std::move(r));
}

namespace {

FeasibleSet coverage_opt(const SppInstance& inst, const ElementSet& r) {
  const Objective& obj = inst.objective;
  std::vector<ElementId> cand;
  for (ElementId e : r) {
    if (obj.covered_points(ElementSet{e}) > 0) cand.push_back(e);
  }
  if (cand.size() > kExactSearchLimit) {
    throw SizeLimitError("exact coverage search limited to " +
                         std::to_string(kExactSearchLimit) +
                         " useful active elements, got " +
                         std::to_string(cand.size()));
  }
  std::stable_sort(cand.begin(), cand.end(), [&](ElementId a, ElementId b) {
    return obj.covered_points(ElementSet{a}) > obj.covered_points(ElementSet{b});
  });
  const std::size_t rank_cap = inst.system.rank_info().exact
                                   ? inst.system.rank()
                                   : std::numeric_limits<std::size_t>::max();
  const std::size_t words = (obj.universe() + 63) / 64;

  std::vector<ElementId> cur;
  std::vector<ElementId> best;
  std::size_t best_points = 0;
  std::vector<std::uint64_t> acc(words, 0);
  std::vector<std::size_t> gains;

  auto dfs = [&](auto&& self, std::size_t i, std::size_t points) -> void {
    if (points > best_points) {
      best_points = points;
      best = cur;
    }
    if (i == cand.size() || cur.size() >= rank_cap) return;
    // Submodular bound: the remaining picks gain at most their current
    // marginal gains, and at most rank - |cur| of them fit.
    gains.clear();
    for (std::size_t j = i; j < cand.size(); ++j) {
      gains.push_back(obj.coverage_gain(acc, cand[j]));
    }
    std::size_t slots = std::min(gains.size(), rank_cap - cur.size());
    std::partial_sort(gains.begin(), gains.begin() + slots, gains.end(),
                      std::greater<>());
    std::size_t bound = points;
    for (std::size_t j = 0; j < slots; ++j) bound += gains[j];
    if (bound <= best_points) return;

    ElementId e = cand[i];
    std::vector<ElementId> grown_ids = cur;
    grown_ids.push_back(e);
    if (inst.system.is_feasible(ElementSet(grown_ids))) {
      std::size_t gain = obj.coverage_gain(acc, e);
      std::vector<std::uint64_t> saved = acc;
      const auto& b = obj.bitmap(e);
      for (std::size_t w = 0; w < words; ++w) acc[w] |= b[w];
      cur.push_back(e);
      self(self, i + 1, points + gain);
      cur.pop_back();
      acc = std::move(saved);
    }
    self(self, i + 1, points);
  };
  dfs(dfs, 0, 0);
  ElementSet out(std::move(best));
  return {out, static_cast<double>(best_points) * obj.point_value()};
}

}  // namespace

FeasibleSet stochastic_opt(const SppInstance& inst, const ElementSet& r) {
  if (!r.is_subset_of(inst.ground())) {
    throw DomainError("active set " + r.to_string() + " leaves the ground set");
  }
  if (inst.objective.is_additive()) {
    return inst.system.max_weight_feasible(inst.objective.weights(), r);
  }
  return coverage_opt(inst, r);
}

const char* estimator_name(Marginals::Estimator e) {
  switch (e) {
    case Marginals::Estimator::kExact: return "exact";
    case Marginals::Estimator::kEmpirical: return "empirical";
    case Marginals::Estimator::kClosedForm: return "closed_form";
  }
  return "unknown";
}

Marginals estimate_marginals(const SppInstance& inst, std::size_t samples,
                             std::uint64_t seed, std::optional<double> clamp) {
  if (samples == 0) throw InvalidArgumentError("marginal samples must be >= 1");
  const std::size_t n = inst.size();
  std::vector<std::size_t> hits(n, 0);
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(seed, derive_stream(stream_tag::kMarginals, t));
    ElementSet r = sample_active(inst, rng);
    for (ElementId e : stochastic_opt(inst, r).elements) ++hits[e];
  }
  Marginals m;
  m.q.resize(n);
  m.sample_count = samples;
  m.estimator = Marginals::Estimator::kEmpirical;
  for (std::size_t e = 0; e < n; ++e) {
    m.q[e] = static_cast<double>(hits[e]) / static_cast<double>(samples);
    if (clamp) {
      m.q[e] = std::max(0.0, m.q[e] - *clamp / static_cast<double>(n));
    }
  }
  return m;
}

Marginals exact_marginals(const SppInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kExactMarginalLimit) {
    throw SizeLimitError("exact marginals limited to " +
                         std::to_string(kExactMarginalLimit) + " elements");
  }
  Marginals m;
  m.q.assign(n, 0.0);
  m.estimator = Marginals::Estimator::kExact;
  const ElementSet ground = inst.ground();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    ElementSet r = subset_from_mask(ground, mask);
    double prob = std::pow(inst.p, static_cast<double>(r.size())) *
                  std::pow(1.0 - inst.p, static_cast<double>(n - r.size()));
    if (prob == 0.0) continue;
    for (ElementId e : stochastic_opt(inst, r).elements) m.q[e] += prob;
  }
  return m;
}

double exact_expected_opt(const SppInstance& inst, const ElementSet& q) {
  if (q.size() > kExactExpectationLimit) {
    throw SizeLimitError("exact expectation limited to " +
                         std::to_string(kExactExpectationLimit) + " elements");
  }
  const std::size_t k = q.size();
  std::vector<double> terms;
  terms.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    ElementSet r = subset_from_mask(q, mask);
    double prob = std::pow(inst.p, static_cast<double>(r.size())) *
                  std::pow(1.0 - inst.p, static_cast<double>(k - r.size()));
    if (prob == 0.0) continue;
    terms.push_back(prob * stochastic_opt(inst, r).weight);
  }
  return compensated_sum(terms);
}

QueryProducer QueryProducer::fixed(ElementSet q) {
  return {[q = std::move(q)](Rng&) { return q; }, false};
}

double compensated_sum(const std::vector<double>& v) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : v) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> error_index(threads,
                                       std::numeric_limits<std::size_t>::max());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) {
        try {
          body(i);
        } catch (...) {
          errors[w] = std::current_exception();
          error_index[w] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::size_t first = threads;
  for (std::size_t w = 0; w < threads; ++w) {
    if (errors[w] && (first == threads || error_index[w] < error_index[first])) {
      first = w;
    }
  }
  if (first != threads) std::rethrow_exception(errors[first]);
}

EvalReport evaluate_sparsifier(const SppInstance& inst,
                               const QueryProducer& producer,
                               std::size_t trials, std::uint64_t seed,
                               std::size_t threads) {
  if (trials == 0) throw InvalidArgumentError("trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  std::optional<ElementSet> fixed_q;
  if (!producer.randomized) {
    Rng rng(seed, stream_tag::kQuery);
    fixed_q = producer.draw(rng);
  }

  std::vector<double> with_q(trials), full(trials), sizes(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng active_rng(seed, derive_stream(stream_tag::kActive, t));
    ElementSet q;
    if (fixed_q) {
      q = *fixed_q;
    } else {
      Rng query_rng(seed, derive_stream(stream_tag::kQuery, t));
      q = producer.draw(query_rng);
    }
    ElementSet r = sample_active(inst, active_rng);
    ElementSet qr = set_intersection(q, r);
    double opt_r = stochastic_opt(inst, r).weight;
    double opt_qr = qr == r ? opt_r : stochastic_opt(inst, qr).weight;
    with_q[t] = opt_qr;
    full[t] = opt_r;
    sizes[t] = static_cast<double>(q.size());
  });

  const double n = static_cast<double>(trials);
  const double sum_q = compensated_sum(with_q);
  const double sum_r = compensated_sum(full);
  EvalReport rep;
  rep.trials = trials;
  rep.opt_mean = sum_r / n;
  rep.query_opt_mean = sum_q / n;
  rep.ratio_mean = sum_r > 0.0 ? sum_q / sum_r : 1.0;

  if (trials > 1 && sum_r > 0.0) {
    std::vector<double> dev(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      dev[t] = with_q[t] - rep.ratio_mean * full[t];
    }
    const double mean_dev = compensated_sum(dev) / n;
    std::vector<double> sq(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      sq[t] = (dev[t] - mean_dev) * (dev[t] - mean_dev);
    }
    const double var = compensated_sum(sq) / (n - 1.0);
    rep.ratio_stderr = std::sqrt(var / n) / rep.opt_mean;
  }

  const double rank = static_cast<double>(inst.system.rank());
  const double mean_size = compensated_sum(sizes) / n;
  rep.degree_mean = rank > 0.0 ? mean_size / rank : 0.0;
  if (trials > 1 && rank > 0.0) {
    std::vector<double> sq(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      sq[t] = (sizes[t] - mean_size) * (sizes[t] - mean_size);
    }
    rep.degree_stderr =
        std::sqrt(compensated_sum(sq) / (n - 1.0) / n) / rank;
  }
  rep.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return rep;
}

}  // namespace sposs
