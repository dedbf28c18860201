#include "sposs/sparsifiers.hpp"

#include <algorithm>
#include <cmath>

#include "sposs/error.hpp"
#include "sposs/lp.hpp"

namespace sposs {

namespace {

void check_p_eps(double p, double eps) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgumentError("round counts need p in (0,1]");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgumentError("eps must lie in (0,1)");
  }
}

// Ceiling that ignores round-off just above an integer.
double ceil_count(double v) { return std::ceil(v - 1e-9); }

void require_additive(const SppInstance& inst, const char* who) {
  if (!inst.objective.is_additive()) {
    throw KindError(std::string(who) + " needs an additive objective");
  }
}

// Inclusion probabilities q_e / p, clamped to [0,1]. Returns the number of
// clamped entries.
std::size_t inclusion_probs(const SppInstance& inst, const Marginals& q,
                            std::vector<double>& out) {
  if (q.q.size() != inst.size()) {
    throw InvalidArgumentError("marginals must have one entry per element");
  }
  out.assign(q.q.size(), 0.0);
  std::size_t clamped = 0;
  if (inst.p <= 0.0) return 0;
  for (std::size_t e = 0; e < q.q.size(); ++e) {
    double v = q.q[e] / inst.p;
    if (v > 1.0) {
      ++clamped;
      v = 1.0;
    }
    out[e] = std::max(0.0, v);
  }
  return clamped;
}

ElementSet bernoulli_subset(const std::vector<double>& probs, Rng& rng) {
  std::vector<ElementId> picked;
  for (std::size_t e = 0; e < probs.size(); ++e) {
    if (rng.bernoulli(probs[e])) picked.push_back(static_cast<ElementId>(e));
  }
  return ElementSet(std::move(picked));
}

std::vector<ElementSet> optimum_samples(const SppInstance& inst,
                                        std::size_t count, Rng& rng) {
  std::vector<ElementSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ElementSet r = sample_active(inst, rng);
    out.push_back(stochastic_opt(inst, r).elements);
  }
  return out;
}

ElementSet union_all(const std::vector<ElementSet>& sets) {
  std::vector<ElementId> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  return ElementSet(std::move(all));
}

}  // namespace

std::size_t nss_round_count(double p, double eps) {
  check_p_eps(p, eps);
  return static_cast<std::size_t>(
      std::max(1.0, ceil_count(std::log(1.0 / eps) / p)));
}

std::size_t intersection_round_count(double p, double eps) {
  check_p_eps(p, eps);
  return static_cast<std::size_t>(
      std::max(1.0, ceil_count(2.0 / (eps * p) * std::log(2.0 / eps))));
}

std::size_t matching_greedy_round_count(double p, double eps) {
  check_p_eps(p, eps);
  const double l = std::log(1.0 / eps);
  double t = ceil_count(2000.0 * l * l / (std::pow(eps, 4) * p));
  if (t > 1e18) throw SizeLimitError("greedy round count overflows");
  return static_cast<std::size_t>(t);
}

SparseSet crs_sparsify(const SppInstance& inst, const Marginals& q, Rng& rng) {
  std::vector<double> probs;
  const std::size_t clamped = inclusion_probs(inst, q, probs);
  SparseSet out;
  out.algorithm = "crs";
  out.randomized = true;
  out.params = {{"p", inst.p},
                {"marginals", estimator_name(q.estimator)},
                {"marginal_samples", q.sample_count}};
  if (clamped > 0) {
    out.notes.push_back("clamped " + std::to_string(clamped) +
                        " marginals above p");
  }
  out.producer = {[probs](Rng& r) { return bernoulli_subset(probs, r); }, true};
  out.q = out.producer.draw(rng);
  return out;
}

SparseSet matroid_nss_sparsify(const SppInstance& inst, double eps) {
  if (inst.system.kind() != SetSystem::Kind::kSingleMatroid) {
    throw KindError("matroid_nss needs a single matroid system, got " +
                    inst.system.kind_name());
  }
  require_additive(inst, "matroid_nss");
  const std::size_t tau = nss_round_count(inst.p, eps);
  const WeightVector& w = inst.objective.weights();

  SparseSet out;
  out.algorithm = "matroid_nss";
  out.randomized = false;
  out.params = {{"eps", eps}, {"tau", tau}, {"p", inst.p}};
  MatroidOracle view = inst.system.matroids().front();
  for (std::size_t t = 0; t < tau; ++t) {
    ElementSet base = view.max_weight_independent(w);
    if (view.rank(base) != view.rank()) {
      throw InvariantError("round " + std::to_string(t + 1) +
                           " basis does not span the remaining matroid");
    }
    out.nss_rounds.push_back(base);
    view = view.deleted(base);
  }
  out.q = union_all(out.nss_rounds);
  out.producer = QueryProducer::fixed(out.q);
  return out;
}

SparseSet intersection_sample_sparsify(const SppInstance& inst, double eps,
                                       Rng& rng) {
  const auto kind = inst.system.kind();
  if (kind != SetSystem::Kind::kIntersection &&
      kind != SetSystem::Kind::kSingleMatroid) {
    throw KindError("intersection_sample needs a matroid intersection, got " +
                    inst.system.kind_name());
  }
  require_additive(inst, "intersection_sample");
  const std::size_t tau = intersection_round_count(inst.p, eps);

  SparseSet out;
  out.algorithm = "intersection_sample";
  out.randomized = true;
  out.params = {{"eps", eps}, {"tau", tau}, {"p", inst.p}};
  out.producer = {[inst, tau](Rng& r) {
                    return union_all(optimum_samples(inst, tau, r));
                  },
                  true};
  out.samples = optimum_samples(inst, tau, rng);
  out.q = union_all(out.samples);
  return out;
}

SparseSet matching_hybrid_sparsify(const SppInstance& inst, double eps,
                                   const Marginals& q, Rng& rng,
                                   std::optional<std::size_t> t_override) {
  if (inst.system.kind() != SetSystem::Kind::kMatching) {
    throw KindError("matching_hybrid needs a matching system, got " +
                    inst.system.kind_name());
  }
  require_additive(inst, "matching_hybrid");
  check_p_eps(inst.p, eps);
  const double l = std::log(1.0 / eps);
  const double t_formula = 2000.0 * l * l / (std::pow(eps, 4) * inst.p);
  std::size_t t_rounds;
  if (t_override) {
    t_rounds = *t_override;
  } else {
    t_rounds = matching_greedy_round_count(inst.p, eps);
    if (t_rounds > kMaxGreedyRounds) {
      throw SizeLimitError("greedy phase needs " + std::to_string(t_rounds) +
                           " rounds; pass a T override");
    }
  }

  std::vector<double> probs;
  const std::size_t clamped = inclusion_probs(inst, q, probs);

  SparseSet out;
  out.algorithm = "matching_hybrid";
  out.randomized = true;
  out.params = {{"eps", eps},
                {"p", inst.p},
                {"T", t_rounds},
                {"T_source", t_override ? "override" : "formula"},
                {"T_formula", std::ceil(t_formula - 1e-9)},
                {"T_reading", "2000*ln(1/eps)^2/(eps^4*p)"},
                {"marginals", estimator_name(q.estimator)}};
  if (clamped > 0) {
    out.notes.push_back("clamped " + std::to_string(clamped) +
                        " marginals above p");
  }

  auto draw_parts = [inst, probs, t_rounds](Rng& r, ElementSet& crs_part,
                                            std::vector<ElementSet>& samples) {
    Rng crs_rng = r.split(1);
    Rng greedy_rng = r.split(2);
    crs_part = bernoulli_subset(probs, crs_rng);
    samples = optimum_samples(inst, t_rounds, greedy_rng);
  };
  out.producer = {[draw_parts](Rng& r) {
                    ElementSet crs_part;
                    std::vector<ElementSet> samples;
                    draw_parts(r, crs_part, samples);
                    return set_union(crs_part, union_all(samples));
                  },
                  true};
  draw_parts(rng, out.crs_part, out.samples);
  out.greedy_part = union_all(out.samples);
  out.q = set_union(out.crs_part, out.greedy_part);
  return out;
}

SparseSet coverage_lp_sparsify(const SppInstance& inst, Rng& rng) {
  CoverageLpSolution sol = solve_coverage_lp(inst);
  std::vector<double> probs(sol.x.size(), 0.0);
  if (inst.p > 0.0) {
    for (std::size_t e = 0; e < probs.size(); ++e) {
      probs[e] = std::clamp(sol.x[e] / inst.p, 0.0, 1.0);
    }
  }
  SparseSet out;
  out.algorithm = "coverage_lp";
  out.randomized = true;
  out.params = {{"p", inst.p}, {"lp_value", sol.value}};
  out.fractional = sol.x;
  out.producer = {[probs](Rng& r) { return bernoulli_subset(probs, r); }, true};
  out.q = out.producer.draw(rng);
  return out;
}

SparseSet identity_sparsify(const SppInstance& inst) {
  SparseSet out;
  out.algorithm = "identity";
  out.q = inst.ground();
  out.producer = QueryProducer::fixed(out.q);
  return out;
}

DegreeEstimate measure_degree(const QueryProducer& producer,
                              const SppInstance& inst, std::size_t trials,
                              std::uint64_t seed) {
  if (trials == 0) throw InvalidArgumentError("trials must be >= 1");
  const double rank = static_cast<double>(inst.system.rank());
  if (rank == 0.0) return {};
  if (!producer.randomized) {
    Rng rng(seed, stream_tag::kQuery);
    return {static_cast<double>(producer.draw(rng).size()) / rank, 0.0};
  }
  std::vector<double> sizes(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, derive_stream(stream_tag::kQuery, t));
    sizes[t] = static_cast<double>(producer.draw(rng).size()) / rank;
  }
  const double n = static_cast<double>(trials);
  const double mean = compensated_sum(sizes) / n;
  double var = 0.0;
  for (double s : sizes) var += (s - mean) * (s - mean);
  var = trials > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace sposs
