#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sposs/error.hpp"
#include "sposs/stochastic.hpp"

using namespace sposs;

namespace {

// Distinct weights so the optimum of every active set is unique.
struct MatroidInstance {
  SppInstance inst;
  oracle::RandomPartition part;
  std::vector<double> w;
};

MatroidInstance partition_instance(std::size_t n, double p, std::mt19937_64& gen) {
  auto part = oracle::random_partition(n, gen);
  std::vector<std::vector<ElementId>> blocks(part.blocks.begin(), part.blocks.end());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + static_cast<double>(i) * 0.37 + (gen() % 5);
  SppInstance inst("t", SetSystem::single_matroid(MatroidOracle::partition(blocks, part.caps)),
                   Objective::additive(w), p, 1);
  return {std::move(inst), part, w};
}

}  // namespace

TEST(Stochastic, InstanceValidation) {
  EXPECT_THROW(SppInstance("x", SetSystem::rank1(3), Objective::additive({1, 1}), 0.5, 0),
               InvalidArgumentError);
  EXPECT_THROW(SppInstance("x", SetSystem::rank1(2), Objective::additive({1, 1}), 1.5, 0),
               InvalidArgumentError);
}

TEST(Stochastic, SampleActiveRate) {
  SppInstance inst("r", SetSystem::rank1(10), Objective::additive(WeightVector(10, 1)), 0.3, 0);
  std::size_t total = 0;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    Rng rng(1, t);
    total += sample_active(inst, rng).size();
  }
  EXPECT_NEAR(total / 20000.0, 3.0, 0.05);
}

TEST(Stochastic, ExactMarginalsMatchOracle) {
  std::mt19937_64 gen(31);
  for (int iter = 0; iter < 15; ++iter) {
    const std::size_t n = 4 + gen() % 6;
    auto mi = partition_instance(n, 0.2 + 0.1 * (iter % 5), gen);
    auto feasible = [&](const oracle::Ids& s) {
      return oracle::partition_indep(mi.part.blocks, mi.part.caps, s);
    };
    std::vector<double> expect(n, 0.0);
    auto all = oracle::iota_ids(n);
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      auto r = oracle::from_mask(all, mask);
      double best = -1;
      oracle::Ids arg;
      for (std::uint64_t sub = 0; sub < (1u << r.size()); ++sub) {
        auto s = oracle::from_mask(r, sub);
        double v = oracle::weight_of(mi.w, s);
        if (feasible(s) && v > best) {
          best = v;
          arg = s;
        }
      }
      const double pr = oracle::pattern_prob(n, mask, mi.inst.p);
      for (auto e : arg) expect[e] += pr;
    }
    Marginals q = exact_marginals(mi.inst);
    EXPECT_EQ(q.estimator, Marginals::Estimator::kExact);
    for (std::size_t e = 0; e < n; ++e) ASSERT_NEAR(q.q[e], expect[e], 1e-12);
  }
}

TEST(Stochastic, ExpectedOptMatchesOracle) {
  std::mt19937_64 gen(32);
  for (int iter = 0; iter < 15; ++iter) {
    auto mi = partition_instance(8, 0.35, gen);
    auto feasible = [&](const oracle::Ids& s) {
      return oracle::partition_indep(mi.part.blocks, mi.part.caps, s);
    };
    ElementSet q;
    for (ElementId e = 0; e < 8; ++e) {
      if (gen() % 2) q.insert(e);
    }
    EXPECT_NEAR(exact_expected_opt(mi.inst, q),
                oracle::expected_opt(feasible, mi.w, q.ids(), mi.inst.p), 1e-12);
  }
}

TEST(Stochastic, EmpiricalMarginalsConverge) {
  std::mt19937_64 gen(33);
  auto mi = partition_instance(8, 0.4, gen);
  Marginals exact = exact_marginals(mi.inst);
  Marginals est = estimate_marginals(mi.inst, 40000, 9);
  EXPECT_EQ(est.sample_count, 40000u);
  for (std::size_t e = 0; e < 8; ++e) {
    double sigma = std::sqrt(exact.q[e] * (1 - exact.q[e]) / 40000.0);
    EXPECT_NEAR(est.q[e], exact.q[e], 4 * sigma + 1e-12);
  }
  Marginals clamped = estimate_marginals(mi.inst, 40000, 9, 0.8);
  for (std::size_t e = 0; e < 8; ++e) {
    EXPECT_NEAR(clamped.q[e], std::max(0.0, est.q[e] - 0.1), 1e-12);
  }
}

TEST(Stochastic, ExactLimits) {
  SppInstance big("b", SetSystem::rank1(13), Objective::additive(WeightVector(13, 1)), 0.5, 0);
  EXPECT_THROW(exact_marginals(big), SizeLimitError);
  SppInstance huge("h", SetSystem::rank1(25), Objective::additive(WeightVector(25, 1)), 0.5, 0);
  EXPECT_THROW(exact_expected_opt(huge, ElementSet::range(21)), SizeLimitError);
}

TEST(Stochastic, CoverageOptMatchesBruteForce) {
  std::mt19937_64 gen(34);
  for (int iter = 0; iter < 20; ++iter) {
    const std::size_t n = 6 + gen() % 5, u = 12;
    std::vector<std::vector<std::size_t>> sets(n);
    for (auto& s : sets) {
      for (std::size_t j = 0; j < u; ++j) {
        if (gen() % 3 == 0) s.push_back(j);
      }
    }
    const std::size_t r = 1 + gen() % 3;
    SppInstance inst("c", SetSystem::single_matroid(MatroidOracle::uniform(n, r)),
                     Objective::coverage(u, sets), 0.5, 0);
    ElementSet active;
    for (ElementId e = 0; e < n; ++e) {
      if (gen() % 4) active.insert(e);
    }
    std::size_t best = 0;
    for (std::uint64_t m = 0; m < (1u << active.size()); ++m) {
      auto s = oracle::from_mask(active.ids(), m);
      if (s.size() <= r) best = std::max(best, oracle::covered(sets, s));
    }
    FeasibleSet got = stochastic_opt(inst, active);
    EXPECT_TRUE(got.elements.is_subset_of(active));
    EXPECT_LE(got.elements.size(), r);
    EXPECT_DOUBLE_EQ(got.weight, static_cast<double>(best));
  }
}

TEST(Stochastic, IdentityRatioIsOne) {
  std::mt19937_64 gen(35);
  auto mi = partition_instance(9, 0.3, gen);
  auto rep = evaluate_sparsifier(mi.inst, QueryProducer::fixed(mi.inst.ground()), 3000, 4);
  EXPECT_DOUBLE_EQ(rep.ratio_mean, 1.0);
  EXPECT_DOUBLE_EQ(rep.ratio_stderr, 0.0);
  EXPECT_NEAR(rep.degree_mean, 9.0 / static_cast<double>(mi.inst.system.rank()), 1e-12);
}

TEST(Stochastic, EvaluateAgreesWithExactExpectation) {
  std::mt19937_64 gen(36);
  auto mi = partition_instance(9, 0.4, gen);
  ElementSet q{0, 2, 3, 5, 8};
  auto rep = evaluate_sparsifier(mi.inst, QueryProducer::fixed(q), 60000, 8);
  const double exact = exact_expected_opt(mi.inst, q) /
                       exact_expected_opt(mi.inst, mi.inst.ground());
  EXPECT_NEAR(rep.ratio_mean, exact, 4 * rep.ratio_stderr);
  EXPECT_GT(rep.ratio_stderr, 0.0);
}

TEST(Stochastic, EvaluateIndependentOfThreads) {
  std::mt19937_64 gen(37);
  auto mi = partition_instance(10, 0.3, gen);
  QueryProducer producer;
  producer.draw = [](Rng& rng) {
    ElementSet q;
    for (ElementId e = 0; e < 10; ++e) {
      if (rng.bernoulli(0.5)) q.insert(e);
    }
    return q;
  };
  auto a = evaluate_sparsifier(mi.inst, producer, 5000, 12, 1);
  auto b = evaluate_sparsifier(mi.inst, producer, 5000, 12, 4);
  EXPECT_EQ(a.ratio_mean, b.ratio_mean);
  EXPECT_EQ(a.ratio_stderr, b.ratio_stderr);
  EXPECT_EQ(a.degree_mean, b.degree_mean);
  EXPECT_EQ(a.opt_mean, b.opt_mean);
}

TEST(Stochastic, ParallelForRethrowsLowestIndex) {
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 37 || i == 80) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "37");
  }
}

TEST(Stochastic, CompensatedSum) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  EXPECT_DOUBLE_EQ(compensated_sum(v), 2.0);
}
