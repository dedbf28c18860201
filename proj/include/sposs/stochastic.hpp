#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sposs/element_set.hpp"
#include "sposs/objective.hpp"
#include "sposs/rng.hpp"
#include "sposs/set_system.hpp"

namespace sposs {

/// Largest ground set exact_marginals will enumerate.
inline constexpr std::size_t kExactMarginalLimit = 12;
/// Largest query set exact_expected_opt will enumerate.
inline constexpr std::size_t kExactExpectationLimit = 20;

/// Set system, objective and activation probability. The objective is
/// indexed by element id and the system ground must be {0, ..., n-1}.
struct SppInstance {
  SppInstance(std::string name, SetSystem system, Objective objective,
              double p, std::uint64_t seed);

  std::string name;
  SetSystem system;
  Objective objective;
  double p;
  std::uint64_t seed;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const { return system.ground().size(); }
  const ElementSet& ground() const { return system.ground(); }
};

/// Each element independently with probability inst.p.
ElementSet sample_active(const SppInstance& inst, Rng& rng);

/// Best feasible subset of r. Additive objectives go through the system's
/// exact optimizer; coverage objectives are searched exhaustively with a
/// submodular bound (|r| <= kExactSearchLimit).
FeasibleSet stochastic_opt(const SppInstance& inst, const ElementSet& r);

struct Marginals {
  enum class Estimator { kExact, kEmpirical, kClosedForm };
  std::vector<double> q;
  std::size_t sample_count = 0;
  Estimator estimator = Estimator::kEmpirical;
};

const char* estimator_name(Marginals::Estimator e);

/// q_e = fraction of N sampled optima containing e. With `clamp` = delta the
/// estimate is shifted down by delta/n and floored at zero.
Marginals estimate_marginals(const SppInstance& inst, std::size_t samples,
                             std::uint64_t seed,
                             std::optional<double> clamp = std::nullopt);

/// Exact marginals by enumerating every active set (|E| <= 12).
Marginals exact_marginals(const SppInstance& inst);

/// E[opt(Q ∩ R)] computed exactly over the 2^|Q| activation patterns of Q.
double exact_expected_opt(const SppInstance& inst, const ElementSet& q);

/// Produces query sets. Deterministic producers are drawn once.
struct QueryProducer {
  std::function<ElementSet(Rng&)> draw;
  bool randomized = true;

  static QueryProducer fixed(ElementSet q);
};

struct EvalReport {
  double ratio_mean = 0.0;
  double ratio_stderr = 0.0;
  double degree_mean = 0.0;
  double degree_stderr = 0.0;
  double opt_mean = 0.0;
  double query_opt_mean = 0.0;
  std::size_t trials = 0;
  double wall_time = 0.0;
};

/// Monte Carlo ratio of means sum opt(Q∩R) / sum opt(R) and degree E|Q|/r.
/// Trial t uses substreams derived from (seed, t), so the report does not
/// depend on `threads`.
EvalReport evaluate_sparsifier(const SppInstance& inst,
                               const QueryProducer& producer,
                               std::size_t trials, std::uint64_t seed,
                               std::size_t threads = 1);

/// Runs body(t) for t in [0, n) on up to `threads` workers. Exceptions are
/// rethrown from the lowest failing index.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum in index order.
double compensated_sum(const std::vector<double>& v);

}  // namespace sposs
