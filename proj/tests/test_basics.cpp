#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sposs/element_set.hpp"
#include "sposs/error.hpp"
#include "sposs/rng.hpp"

using namespace sposs;

TEST(ElementSet, SortsAndDeduplicates) {
  ElementSet s{5, 1, 3, 1};
  EXPECT_EQ(s.ids(), (std::vector<ElementId>{1, 3, 5}));
  EXPECT_EQ(s.to_string(), "{1,3,5}");
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
}

TEST(ElementSet, InsertEraseWithWithout) {
  ElementSet s;
  s.insert(4);
  s.insert(2);
  s.insert(4);
  EXPECT_EQ(s, (ElementSet{2, 4}));
  EXPECT_EQ(s.with(3), (ElementSet{2, 3, 4}));
  EXPECT_EQ(s.without(2), (ElementSet{4}));
  s.erase(7);
  EXPECT_EQ(s.size(), 2u);
}

TEST(ElementSet, SetAlgebraMatchesStdSet) {
  Rng rng(1, 2);
  for (int iter = 0; iter < 200; ++iter) {
    std::set<ElementId> a, b;
    for (ElementId e = 0; e < 20; ++e) {
      if (rng.bernoulli(0.4)) a.insert(e);
      if (rng.bernoulli(0.4)) b.insert(e);
    }
    ElementSet sa(std::vector<ElementId>(a.begin(), a.end()));
    ElementSet sb(std::vector<ElementId>(b.begin(), b.end()));
    std::set<ElementId> u = a, i, d;
    u.insert(b.begin(), b.end());
    for (auto e : a) (b.count(e) ? i : d).insert(e);
    EXPECT_EQ(set_union(sa, sb).ids(), std::vector<ElementId>(u.begin(), u.end()));
    EXPECT_EQ(set_intersection(sa, sb).ids(),
              std::vector<ElementId>(i.begin(), i.end()));
    EXPECT_EQ(set_difference(sa, sb).ids(),
              std::vector<ElementId>(d.begin(), d.end()));
    EXPECT_EQ(sa.is_subset_of(sb), d.empty());
  }
}

TEST(ElementSet, MaskAndWeight) {
  ElementSet u{2, 4, 6, 8};
  EXPECT_EQ(subset_from_mask(u, 0b1010), (ElementSet{4, 8}));
  WeightVector w{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(total_weight(w, ElementSet{0, 4}), 6.0);
  EXPECT_THROW(total_weight(w, ElementSet{5}), DomainError);
}

TEST(Rng, DeterministicPerSeedAndStream) {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
  }
}

TEST(Rng, UniformMomentsAndRange) {
  Rng rng(3, 0);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.003);
}

TEST(Rng, BernoulliEdgesAndRate) {
  Rng rng(9, 1);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
    hits += rng.bernoulli(0.3);
  }
  EXPECT_NEAR(hits / 100000.0, 0.3, 0.006);
}

TEST(Rng, BelowIsUniform) {
  Rng rng(5, 5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) counts[rng.below(7)]++;
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, SplitStreamsDiffer) {
  Rng base(11, 0);
  Rng s1 = base.split(1), s2 = base.split(2), s1b = base.split(1);
  auto x = s1.next();
  EXPECT_NE(x, s2.next());
  EXPECT_EQ(x, s1b.next());
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(1, 1);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  rng.shuffle(v);
  std::vector<int> s = v;
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(Error, CodesAndNames) {
  try {
    throw SizeLimitError("too big");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeLimit);
    EXPECT_STREQ(e.what(), "too big");
  }
  EXPECT_STREQ(error_code_name(ErrorCode::kIo), "io");
}
