#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sposs/adversarial.hpp"
#include "sposs/certificates.hpp"
#include "sposs/crs.hpp"
#include "sposs/error.hpp"
#include "sposs/sparsifiers.hpp"

using namespace sposs;

namespace {

SppInstance graphic_instance(std::mt19937_64& gen, double p) {
  const std::size_t v = 4 + gen() % 3, m = 8 + gen() % 4;
  auto edges = oracle::random_edges(v, m, gen, false);
  return SppInstance("g", SetSystem::single_matroid(MatroidOracle::graphic(v, edges)),
                     Objective::additive(oracle::random_weights(m, gen)), p, 0);
}

}  // namespace

TEST(RoundCounts, Formulas) {
  EXPECT_EQ(nss_round_count(0.5, 0.5), 2u);
  EXPECT_EQ(nss_round_count(1.0, 0.9), 1u);
  EXPECT_EQ(nss_round_count(0.1, 0.1), 24u);  // ln 10 / 0.1 = 23.03
  EXPECT_EQ(intersection_round_count(0.3, 0.25), 56u);
  EXPECT_EQ(intersection_round_count(0.5, 0.25), 34u);
  EXPECT_EQ(matching_greedy_round_count(0.5, 0.5), 30749u);
}

TEST(Crs, ResolveIsFeasibleSubset) {
  std::mt19937_64 gen(41);
  for (int iter = 0; iter < 20; ++iter) {
    SppInstance inst = graphic_instance(gen, 0.5);
    std::vector<CrsScheme> schemes{
        CrsScheme::ordered_greedy_random(inst.system),
        CrsScheme::ordered_greedy_weight(inst.system, inst.objective.weights())};
    std::vector<double> x(inst.size(), 0.3);
    for (const auto& crs : schemes) {
      for (std::uint64_t t = 0; t < 50; ++t) {
        Rng rng(iter, t);
        ElementSet a = sample_active(inst, rng);
        ElementSet out = crs.resolve(x, a, rng);
        ASSERT_TRUE(out.is_subset_of(a));
        ASSERT_TRUE(inst.system.is_feasible(out));
      }
    }
  }
  EXPECT_THROW(CrsScheme::rank1_uniform(SetSystem::blocks(2, 2)), KindError);
}

TEST(Crs, Rank1UniformBalanceMatchesClosedForm) {
  const std::size_t n = 6;
  std::vector<double> x{0.1, 0.2, 0.3, 0.15, 0.05, 0.2};
  auto crs = CrsScheme::rank1_uniform(SetSystem::rank1(n));
  auto rep = empirical_balance(crs, x, 200000, 3);
  for (std::size_t e = 0; e < n; ++e) {
    // E[1 / (1 + #other active)]
    double expect = 0.0;
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      if (mask >> e & 1) continue;
      double pr = 1.0;
      int k = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == e) continue;
        bool on = mask >> i & 1;
        pr *= on ? x[i] : 1 - x[i];
        k += on;
      }
      expect += pr / (k + 1);
    }
    ASSERT_TRUE(rep.balance[e].has_value());
    EXPECT_NEAR(*rep.balance[e], expect, 4 * rep.std_error[e] + 1e-9);
  }
  ASSERT_TRUE(rep.argmin.has_value());
  EXPECT_DOUBLE_EQ(rep.min_balance, *rep.balance[*rep.argmin]);
}

TEST(Crs, UndefinedBalanceWhenNeverActive) {
  auto crs = CrsScheme::ordered_greedy_random(SetSystem::rank1(3));
  auto rep = empirical_balance(crs, {0.5, 0.0, 0.5}, 1000, 1);
  EXPECT_FALSE(rep.balance[1].has_value());
  EXPECT_EQ(rep.undefined, (std::vector<ElementId>{1}));
}

TEST(Crs, OrderedGreedyIsMonotone) {
  std::mt19937_64 gen(42);
  for (int iter = 0; iter < 10; ++iter) {
    SppInstance inst = graphic_instance(gen, 0.5);
    auto crs = CrsScheme::ordered_greedy_random(inst.system);
    std::vector<double> x(inst.size(), 0.4);
    ElementSet a1{0, 1}, a2 = a1;
    for (ElementId e = 2; e < inst.size(); ++e) {
      if (gen() % 2) a2.insert(e);
    }
    auto rep = monotonicity_probe(crs, x, 0, a1, a2, 5000, iter);
    EXPECT_TRUE(rep.holds);
    EXPECT_GE(rep.prob_small, rep.prob_large);
  }
}

TEST(Sparsifiers, CrsSparsifyDegree) {
  auto inst = rank1_hard_instance(50, Rank1Mode::kExample31);
  auto q = rank1_exact_marginals(50, inst.p);
  double expect = 0;
  for (double v : q.q) expect += std::min(1.0, v / inst.p);
  Rng rng(1, 1);
  auto sp = crs_sparsify(inst, q, rng);
  EXPECT_TRUE(sp.randomized);
  auto deg = measure_degree(sp.producer, inst, 20000, 3);
  EXPECT_NEAR(deg.mean, expect, 4 * deg.std_error);
}

TEST(Sparsifiers, MatroidNssIsNestedSpanning) {
  std::mt19937_64 gen(43);
  for (int iter = 0; iter < 10; ++iter) {
    SppInstance inst = graphic_instance(gen, 0.5);
    auto sp = matroid_nss_sparsify(inst, 0.25);
    const auto& m = inst.system.matroids().front();
    EXPECT_FALSE(sp.randomized);
    EXPECT_EQ(sp.nss_rounds.size(), nss_round_count(0.5, 0.25));
    EXPECT_TRUE(is_nss(m, sp.nss_rounds));
    ElementSet all;
    for (const auto& b : sp.nss_rounds) {
      EXPECT_TRUE(m.is_independent(b));
      EXPECT_TRUE(set_intersection(all, b).empty());
      all = set_union(all, b);
    }
    EXPECT_EQ(all, sp.q);
    EXPECT_LE(sp.q.size(), nss_round_count(0.5, 0.25) * inst.system.rank());
  }
  SppInstance cov("c", SetSystem::single_matroid(MatroidOracle::uniform(2, 1)),
                  Objective::coverage(2, {{0}, {1}}), 0.5, 0);
  EXPECT_THROW(matroid_nss_sparsify(cov, 0.5), KindError);
}

TEST(Sparsifiers, IntersectionSamplesAreFeasible) {
  std::mt19937_64 gen(44);
  auto p1 = oracle::random_partition(10, gen), p2 = oracle::random_partition(10, gen);
  std::vector<std::vector<ElementId>> b1(p1.blocks.begin(), p1.blocks.end());
  std::vector<std::vector<ElementId>> b2(p2.blocks.begin(), p2.blocks.end());
  SppInstance inst("i",
                   SetSystem::intersection({MatroidOracle::partition(b1, p1.caps),
                                            MatroidOracle::partition(b2, p2.caps)}),
                   Objective::additive(oracle::random_weights(10, gen)), 0.5, 0);
  Rng rng(2, 2);
  auto sp = intersection_sample_sparsify(inst, 0.25, rng);
  EXPECT_EQ(sp.samples.size(), intersection_round_count(0.5, 0.25));
  ElementSet all;
  for (const auto& s : sp.samples) {
    EXPECT_TRUE(inst.system.is_feasible(s));
    all = set_union(all, s);
  }
  EXPECT_EQ(all, sp.q);
}

TEST(Sparsifiers, MatchingHybridGuardsHugeT) {
  SppInstance inst("m", SetSystem::matching(Graph{3, {{0, 1}, {1, 2}}}),
                   Objective::additive({1, 2}), 0.5, 0);
  Marginals q = exact_marginals(inst);
  Rng rng(1, 1);
  EXPECT_THROW(matching_hybrid_sparsify(inst, 0.1, q, rng, std::nullopt), SizeLimitError);
  auto sp = matching_hybrid_sparsify(inst, 0.1, q, rng, 5);
  EXPECT_EQ(sp.params.at("T").get<std::size_t>(), 5u);
  EXPECT_EQ(sp.samples.size(), 5u);
  EXPECT_EQ(set_union(sp.crs_part, sp.greedy_part), sp.q);
}

TEST(Sparsifiers, CoverageLpPointIsInPolytope) {
  SppInstance inst("c", SetSystem::single_matroid(MatroidOracle::uniform(5, 2)),
                   Objective::coverage(6, {{0, 1}, {1, 2}, {3}, {4, 5}, {0, 5}}), 0.4, 0);
  Rng rng(3, 3);
  auto sp = coverage_lp_sparsify(inst, rng);
  ASSERT_EQ(sp.fractional.size(), 5u);
  double sum = 0;
  for (double v : sp.fractional) {
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 0.4 + 1e-12);
    sum += v;
  }
  EXPECT_LE(sum, 2.0 + 1e-9);
  auto deg = measure_degree(sp.producer, inst, 20000, 5);
  EXPECT_NEAR(deg.mean, sum / 0.4 / 2.0, 4 * deg.std_error + 1e-12);
}

TEST(Sparsifiers, IdentityIsWholeGround) {
  SppInstance inst("r", SetSystem::rank1(4), Objective::additive({1, 1, 1, 1}), 0.5, 0);
  auto sp = identity_sparsify(inst);
  EXPECT_EQ(sp.q, ElementSet::range(4));
  EXPECT_FALSE(sp.randomized);
}
