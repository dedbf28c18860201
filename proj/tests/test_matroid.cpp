#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sposs/error.hpp"
#include "sposs/matroid.hpp"

using namespace sposs;

namespace {

struct Case {
  MatroidOracle m;
  oracle::Indep indep;
  std::size_t n;
};

Case random_case(std::mt19937_64& gen, int kind) {
  const std::size_t n = 4 + gen() % 6;
  if (kind == 0) {
    std::size_t r = gen() % (n + 1);
    return {MatroidOracle::uniform(n, r),
            [r](const oracle::Ids& s) { return s.size() <= r; }, n};
  }
  if (kind == 1) {
    auto part = oracle::random_partition(n, gen);
    std::vector<std::vector<ElementId>> blocks(part.blocks.begin(), part.blocks.end());
    return {MatroidOracle::partition(blocks, part.caps),
            [part](const oracle::Ids& s) {
              return oracle::partition_indep(part.blocks, part.caps, s);
            },
            n};
  }
  const std::size_t v = 2 + gen() % 4;
  auto edges = oracle::random_edges(v, n, gen);
  return {MatroidOracle::graphic(v, edges),
          [v, edges](const oracle::Ids& s) { return oracle::is_forest(v, edges, s); },
          n};
}

ElementSet to_set(const oracle::Ids& ids) { return ElementSet(ids); }

}  // namespace

TEST(Matroid, IndependenceAndRankMatchBruteForce) {
  std::mt19937_64 gen(1);
  for (int iter = 0; iter < 60; ++iter) {
    Case c = random_case(gen, iter % 3);
    auto all = oracle::iota_ids(c.n);
    for (std::uint64_t mask = 0; mask < (1u << c.n); ++mask) {
      auto s = oracle::from_mask(all, mask);
      ASSERT_EQ(c.m.is_independent(to_set(s)), c.indep(s)) << c.m.family_name();
      ASSERT_EQ(c.m.rank(to_set(s)), oracle::rank_of(c.indep, s));
    }
  }
}

TEST(Matroid, AxiomsHold) {
  std::mt19937_64 gen(2);
  for (int iter = 0; iter < 30; ++iter) {
    Case c = random_case(gen, iter % 3);
    auto all = oracle::iota_ids(c.n);
    std::vector<ElementSet> ind;
    for (std::uint64_t mask = 0; mask < (1u << c.n); ++mask) {
      ElementSet s = subset_from_mask(ElementSet::range(c.n), mask);
      if (c.m.is_independent(s)) ind.push_back(s);
    }
    ASSERT_TRUE(c.m.is_independent(ElementSet{}));
    for (const auto& a : ind) {
      for (ElementId e : a) ASSERT_TRUE(c.m.is_independent(a.without(e)));
      for (const auto& b : ind) {
        if (b.size() <= a.size()) continue;
        bool augment = false;
        for (ElementId e : set_difference(b, a)) {
          augment |= c.m.is_independent(a.with(e));
        }
        ASSERT_TRUE(augment);
      }
    }
  }
}

TEST(Matroid, SpanIsClosure) {
  std::mt19937_64 gen(3);
  for (int iter = 0; iter < 30; ++iter) {
    Case c = random_case(gen, iter % 3);
    auto all = oracle::iota_ids(c.n);
    for (std::uint64_t mask = 0; mask < (1u << c.n); mask += 3) {
      auto s = oracle::from_mask(all, mask);
      ElementSet span = c.m.span(to_set(s));
      const std::size_t r = oracle::rank_of(c.indep, s);
      for (std::uint32_t e = 0; e < c.n; ++e) {
        oracle::Ids with = s;
        if (!std::count(with.begin(), with.end(), e)) with.push_back(e);
        std::sort(with.begin(), with.end());
        ASSERT_EQ(span.contains(e), oracle::rank_of(c.indep, with) == r);
      }
    }
  }
}

TEST(Matroid, ContractionShiftsRank) {
  std::mt19937_64 gen(4);
  for (int iter = 0; iter < 30; ++iter) {
    Case c = random_case(gen, iter % 3);
    ElementSet s;
    for (ElementId e = 0; e < c.n; ++e) {
      if (gen() % 3 == 0 && c.m.is_independent(s.with(e))) s.insert(e);
    }
    MatroidOracle mc = c.m.contracted(s);
    EXPECT_EQ(mc.ground(), set_difference(ElementSet::range(c.n), s));
    const std::size_t rs = c.m.rank(s);
    for (std::uint64_t mask = 0; mask < (1u << mc.ground().size()); ++mask) {
      ElementSet t = subset_from_mask(mc.ground(), mask);
      ASSERT_EQ(mc.rank(t), c.m.rank(set_union(t, s)) - rs);
      ASSERT_EQ(mc.is_independent(t), c.m.is_independent(set_union(t, s)));
    }
  }
}

TEST(Matroid, ContractionRequiresIndependentSet) {
  auto m = MatroidOracle::uniform(4, 1);
  EXPECT_THROW(m.contracted(ElementSet{0, 1}), PreconditionError);
  EXPECT_THROW(m.contracted(ElementSet{9}), DomainError);
}

TEST(Matroid, DeletionAndRestriction) {
  auto m = MatroidOracle::graphic(3, {{0, 1}, {1, 2}, {0, 2}, {0, 1}});
  auto d = m.deleted(ElementSet{2});
  EXPECT_EQ(d.ground(), (ElementSet{0, 1, 3}));
  EXPECT_EQ(d.rank(), 2u);
  EXPECT_THROW(d.is_independent(ElementSet{2}), DomainError);
  auto r = m.restricted(ElementSet{0, 3});
  EXPECT_EQ(r.rank(), 1u);
  EXPECT_FALSE(r.is_independent(ElementSet{0, 3}));
}

TEST(Matroid, NestedViewsCompose) {
  auto m = MatroidOracle::uniform(6, 3);
  auto v = m.contracted(ElementSet{0}).deleted(ElementSet{1}).contracted(ElementSet{2});
  EXPECT_EQ(v.ground(), (ElementSet{3, 4, 5}));
  EXPECT_EQ(v.rank(), 1u);
  EXPECT_EQ(v.contracted_set(), (ElementSet{0, 2}));
  EXPECT_EQ(v.view_stack().size(), 3u);
}

TEST(Matroid, MaxWeightMatchesBruteForce) {
  std::mt19937_64 gen(5);
  for (int iter = 0; iter < 60; ++iter) {
    Case c = random_case(gen, iter % 3);
    auto w = oracle::random_weights(c.n, gen, 4);
    ElementSet b = c.m.max_weight_independent(w);
    ASSERT_TRUE(c.m.is_independent(b));
    EXPECT_DOUBLE_EQ(total_weight(w, b),
                     oracle::max_weight(c.indep, w, oracle::iota_ids(c.n)));
  }
}

TEST(Matroid, MaxWeightTieBreakAscending) {
  auto m = MatroidOracle::uniform(4, 2);
  EXPECT_EQ(m.max_weight_independent({1, 1, 1, 1}), (ElementSet{0, 1}));
  EXPECT_EQ(m.max_weight_independent({1, 2, 2, 1}), (ElementSet{1, 2}));
  EXPECT_THROW(m.max_weight_independent({1, 2}), DomainError);
  EXPECT_THROW(m.max_weight_independent({1, -2, 0, 0}), InvalidArgumentError);
}

TEST(Matroid, CircuitIsMinimalDependent) {
  std::mt19937_64 gen(6);
  int checked = 0;
  for (int iter = 0; iter < 60; ++iter) {
    Case c = random_case(gen, iter % 3);
    ElementSet s;
    for (ElementId e = 0; e < c.n; ++e) {
      if (gen() % 2 && c.m.is_independent(s.with(e))) s.insert(e);
    }
    for (ElementId e = 0; e < c.n; ++e) {
      if (s.contains(e)) continue;
      if (c.m.is_independent(s.with(e))) {
        EXPECT_THROW(c.m.find_circuit(s, e), NoCircuitError);
        continue;
      }
      ElementSet circ = c.m.find_circuit(s, e);
      ASSERT_TRUE(circ.contains(e));
      ASSERT_TRUE(circ.is_subset_of(s.with(e)));
      ASSERT_FALSE(c.m.is_independent(circ));
      for (ElementId f : circ) ASSERT_TRUE(c.m.is_independent(circ.without(f)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Matroid, CircuitPreconditions) {
  auto m = MatroidOracle::uniform(4, 2);
  EXPECT_THROW(m.find_circuit(ElementSet{0, 1, 2}, 3), PreconditionError);
  EXPECT_THROW(m.find_circuit(ElementSet{0, 1}, 1), PreconditionError);
}

TEST(Matroid, ExchangePairIsValid) {
  std::mt19937_64 gen(7);
  int checked = 0;
  for (int iter = 0; iter < 90; ++iter) {
    Case c = random_case(gen, iter % 3);
    ElementSet s1, s2;
    for (ElementId e = 0; e < c.n; ++e) {
      if (gen() % 2 && c.m.is_independent(s1.with(e))) s1.insert(e);
      if (gen() % 2 && c.m.is_independent(s2.with(e))) s2.insert(e);
    }
    for (ElementId e : set_difference(s1, s2)) {
      if (!c.m.span(s2).contains(e)) continue;
      ElementId f = c.m.find_exchange_pair(s1, s2, e);
      ASSERT_TRUE(s2.contains(f));
      ASSERT_FALSE(s1.contains(f));
      ASSERT_TRUE(c.m.is_independent(s1.without(e).with(f)));
      ASSERT_TRUE(c.m.is_independent(s2.without(f).with(e)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Matroid, ExplicitFamily) {
  auto m = MatroidOracle::explicit_family({0, 1, 2}, {{}, {0}, {1}, {2}, {0, 1}});
  EXPECT_TRUE(m.is_independent(ElementSet{0, 1}));
  EXPECT_FALSE(m.is_independent(ElementSet{0, 2}));
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_EQ(m.family_name(), "explicit");
  EXPECT_THROW(MatroidOracle::explicit_family({0, 1}, {{}, {0, 1}}), PreconditionError);
  EXPECT_THROW(MatroidOracle::explicit_family({0, 1}, {{0}}), PreconditionError);
}

TEST(Matroid, FactoryValidation) {
  EXPECT_THROW(MatroidOracle::partition({{0, 1}, {1}}, {1, 1}), InvalidArgumentError);
  EXPECT_THROW(MatroidOracle::partition({{0, 1}}, {1, 1}), InvalidArgumentError);
  EXPECT_THROW(MatroidOracle::graphic(2, {{0, 3}}), InvalidArgumentError);
  auto loop = MatroidOracle::graphic(2, {{0, 0}, {0, 1}});
  EXPECT_FALSE(loop.is_independent(ElementSet{0}));
  EXPECT_EQ(loop.rank(), 1u);
}
