#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "sposs/adversarial.hpp"
#include "sposs/error.hpp"
#include "sposs/json_io.hpp"

using namespace sposs;
using nlohmann::json;

TEST(Adversarial, Rank1Instances) {
  auto a = rank1_hard_instance(50, Rank1Mode::kExample31, 3);
  EXPECT_DOUBLE_EQ(a.p, 0.02);
  EXPECT_EQ(a.seed, 3u);
  EXPECT_EQ(a.metadata.at("mode"), "example31");
  auto b = rank1_hard_instance(400, Rank1Mode::kProp45);
  EXPECT_DOUBLE_EQ(b.p, 0.05);
  EXPECT_THROW(parse_rank1_mode("nope"), InvalidArgumentError);
}

TEST(Adversarial, Rank1ClosedFormsAgreeWithEnumeration) {
  const std::size_t n = 8;
  const double p = 0.3;
  auto inst = rank1_hard_instance(n, Rank1Mode::kExample31);
  SppInstance custom("r", SetSystem::rank1(n), Objective::additive(WeightVector(n, 1.0)), p, 0);
  EXPECT_NEAR(exact_expected_opt(custom, ElementSet::range(n)), rank1_expected_opt(n, p), 1e-12);
  EXPECT_NEAR(rank1_fixed_query_ratio(n, p, 3),
              exact_expected_opt(custom, ElementSet{1, 4, 6}) /
                  exact_expected_opt(custom, ElementSet::range(n)),
              1e-12);
  Marginals closed = rank1_exact_marginals(n, p);
  Marginals exact = exact_marginals(custom);
  for (std::size_t e = 0; e < n; ++e) EXPECT_NEAR(closed.q[e], exact.q[e], 1e-12);
  (void)inst;
}

TEST(Adversarial, BlockInstances) {
  EXPECT_EQ(block_reference_m(3), 30u);
  EXPECT_EQ(block_reference_m(2), 3u);  // 4 ln 2 = 2.77
  auto inst = block_hard_instance(5, 3);
  EXPECT_DOUBLE_EQ(inst.p, 1.0 / 3.0);
  EXPECT_EQ(inst.size(), 15u);
  EXPECT_EQ(inst.metadata.at("reference_m"), 30);
}

TEST(Adversarial, BlocksExpectedMaxMatchesEnumeration) {
  std::vector<std::size_t> counts{3, 2, 1};
  const double p = 0.4;
  // Enumerate all 2^6 activation patterns.
  double e = 0.0;
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    std::size_t pos = 0, best = 0;
    for (std::size_t c : counts) {
      std::size_t on = 0;
      for (std::size_t i = 0; i < c; ++i) on += mask >> (pos + i) & 1;
      best = std::max(best, on);
      pos += c;
    }
    e += oracle::pattern_prob(6, mask, p) * static_cast<double>(best);
  }
  EXPECT_NEAR(blocks_expected_max(counts, p), e, 1e-12);
}

TEST(Adversarial, BestBlockQueryMatchesBruteForceOverCompositions) {
  const std::size_t m = 4, k = 3, budget = 5;
  const double p = 1.0 / 3.0;
  double best = 0.0;
  std::vector<std::size_t> c(m);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i == m) {
      best = std::max(best, blocks_expected_max(c, p));
      return;
    }
    for (std::size_t v = 0; v <= std::min(k, left); ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, budget);
  auto res = best_block_query(m, k, p, budget);
  EXPECT_NEAR(res.query_opt, best, 1e-12);
  std::size_t used = 0;
  for (auto v : res.counts) used += v;
  EXPECT_LE(used, budget);
}

TEST(Adversarial, EqualPartitionInstance) {
  auto inst = equal_partition_hard_instance(9, 3, 1.0 / 3.0);
  EXPECT_EQ(inst.system.rank(), 3u);
  EXPECT_TRUE(inst.metadata.at("hard_regime").get<bool>());
}

TEST(JsonIo, MatroidRoundTrip) {
  for (const char* text : {
           R"({"family":"uniform","n":4,"r":2})",
           R"({"family":"partition","blocks":[[0,2],[1]],"caps":[1,1]})",
           R"({"family":"graphic","vertices":3,"edges":[[0,1],[1,2],[2,0]]})",
           R"({"family":"explicit","ground":[0,1],"independent":[[],[0],[1]]})"}) {
    json j = json::parse(text);
    auto m = matroid_from_json(j);
    EXPECT_EQ(matroid_to_json(m), j) << text;
  }
}

TEST(JsonIo, InstanceRoundTrip) {
  json j = json::parse(R"({
    "name": "tiny", "p": 0.25, "seed": 9,
    "system": {"kind": "intersection", "matroids": [
      {"family": "uniform", "n": 3, "r": 2},
      {"family": "partition", "blocks": [[0, 1], [2]], "caps": [1, 1]}]},
    "objective": {"objective": "additive", "w": [1.0, 2.0, 3.0]},
    "metadata": {"note": "x"}})");
  auto inst = instance_from_json(j);
  EXPECT_EQ(inst.system.kind(), SetSystem::Kind::kIntersection);
  EXPECT_EQ(instance_to_json(inst), j);
  EXPECT_EQ(instance_to_json(instance_from_json(instance_to_json(inst))), j);
}

TEST(JsonIo, OtherSystemsRoundTrip) {
  for (const char* text : {
           R"({"kind":"matching","graph":{"vertices":3,"edges":[[0,1],[1,2]]}})",
           R"({"kind":"rank1","n":5})", R"({"kind":"blocks","m":2,"k":3})"}) {
    json j = json::parse(text);
    EXPECT_EQ(system_to_json(system_from_json(j)), j);
  }
  json cov = json::parse(R"({"objective":"coverage","universe":3,"sets":[[0],[1,2]],"normalized":true})");
  EXPECT_EQ(objective_to_json(objective_from_json(cov)), cov);
}

TEST(JsonIo, GeneratorDescriptors) {
  auto a = instance_from_json(json::parse(R"({"generator":"rank1","n":10,"mode":"prop45"})"));
  EXPECT_NEAR(a.p, 1 / std::sqrt(10.0), 1e-15);
  auto b = instance_from_json(json::parse(R"({"generator":"blocks","m":3,"k":2})"));
  EXPECT_EQ(b.size(), 6u);
  auto c = instance_from_json(json::parse(R"({"generator":"equal_partition","n":6,"r":3,"p":0.3})"));
  EXPECT_EQ(c.objective.kind(), Objective::Kind::kEqualPartition);
}

TEST(JsonIo, Errors) {
  EXPECT_THROW(parse_json_text("{oops"), ParseError);
  EXPECT_THROW(matroid_from_json(json::parse(R"({"family":"weird"})")), ParseError);
  EXPECT_THROW(matroid_from_json(json::parse(R"({"family":"uniform","n":-1,"r":0})")),
               ParseError);
  EXPECT_THROW(system_from_json(json::parse(R"({"kind":"rank1"})")), ParseError);
  EXPECT_THROW(objective_from_json(json::parse(R"({"objective":"additive","w":["a"]})")),
               ParseError);
  EXPECT_THROW(load_json_file("/nonexistent/file.json"), IoError);
}
