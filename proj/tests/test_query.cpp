#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "resonance/bench.hpp"
#include "resonance/query.hpp"

using namespace resonance;

namespace {

std::vector<std::uint64_t> sizes(const std::vector<SlotRange>& plan) {
  std::vector<std::uint64_t> out;
  for (const auto& r : plan) out.push_back(r.size());
  return out;
}

QueryConfig config(std::size_t k, std::size_t workers, KernelKind kind = KernelKind::Scalar) {
  QueryConfig cfg;
  cfg.k = k;
  cfg.workers = workers;
  cfg.kernel = kind;
  return cfg;
}

}  // namespace

TEST(PartitionPlan, Examples) {
  EXPECT_EQ(sizes(partition_plan(10, 3)), (std::vector<std::uint64_t>{4, 3, 3}));
  EXPECT_TRUE(partition_plan(0, 4).empty());
  EXPECT_EQ(sizes(partition_plan(5, 8)), (std::vector<std::uint64_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(partition_plan(7, 1), (std::vector<SlotRange>{{0, 7}}));
  EXPECT_THROW((void)partition_plan(5, 0), Error);
}

TEST(PartitionPlan, CoversRangeContiguously) {
  for (std::uint64_t n : {1ull, 2ull, 17ull, 1000ull, 100003ull}) {
    for (std::size_t w : {1u, 2u, 3u, 4u, 7u, 16u, 64u}) {
      const auto plan = partition_plan(n, w);
      ASSERT_EQ(plan.size(), std::min<std::uint64_t>(n, w));
      std::uint64_t at = 0;
      std::uint64_t lo = n;
      std::uint64_t hi = 0;
      for (const auto& r : plan) {
        ASSERT_EQ(r.begin, at);
        ASSERT_GT(r.size(), 0u);
        lo = std::min(lo, r.size());
        hi = std::max(hi, r.size());
        at = r.end;
      }
      EXPECT_EQ(at, n);
      EXPECT_LE(hi - lo, 1u);
    }
  }
}

TEST(TopK, CollectorAndMergeMatchFullSort) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> score(0, 20);  // many ties
  std::vector<Hit> all;
  for (int i = 0; i < 500; ++i) all.push_back({PatternId::from_counter(rng() % 100000), score(rng) / 20.0});
  std::vector<Hit> sorted = all;
  std::sort(sorted.begin(), sorted.end(), [](const Hit& a, const Hit& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  for (std::size_t k : {1u, 5u, 37u, 500u, 900u}) {
    std::vector<std::vector<Hit>> partials;
    for (std::size_t part = 0; part < 4; ++part) {
      TopKCollector c(k);
      for (std::size_t i = part; i < all.size(); i += 4) c.push(all[i]);
      partials.push_back(std::move(c).take_sorted());
    }
    const auto merged = merge_heaps(partials, k);
    const std::vector<Hit> expected(sorted.begin(), sorted.begin() + std::min(k, sorted.size()));
    EXPECT_EQ(merged, expected) << k;
  }
}

TEST(TopK, MatchesExhaustiveOracleForAnyWorkerCount) {
  oracle::TempDir dir("topk");
  Store store(dir.path(), 12, 300);
  populate_synthetic(store, 1000, 3);
  // A few tombstones, spread over both segments.
  for (std::uint64_t i = 0; i < 1000; i += 37) store.remove(PatternId::from_counter(i));
  const auto queries = gen_synthetic(5, 12, 99);
  for (const auto& q : queries) {
    const auto expected = oracle::exhaustive_top_k(store, q, 25);
    for (std::size_t w : {1u, 2u, 3u, 4u, 16u}) {
      EXPECT_EQ(top_k(store, q, config(25, w)), expected) << w;
    }
  }
}

TEST(TopK, TombstonedRecordsNeverAppear) {
  oracle::TempDir dir("tomb");
  Store store(dir.path(), 4);
  populate_synthetic(store, 10, 4);
  const auto target = store.get(PatternId::from_counter(3));
  EXPECT_EQ(top_k(store, target, config(1, 2)).front().id, PatternId::from_counter(3));
  EXPECT_EQ(top_k(store, target, config(1, 2)).front().score, 1.0);
  store.remove(PatternId::from_counter(3));
  const auto hits = top_k(store, target, config(100, 3));
  EXPECT_EQ(hits.size(), 9u);
  for (const auto& h : hits) EXPECT_NE(h.id, PatternId::from_counter(3));
}

TEST(TopK, TiesBreakOnId) {
  oracle::TempDir dir("ties");
  Store store(dir.path(), 2);
  const auto p = WavePattern::validate(std::vector<double>{1, 1}, std::vector<double>{0, 0});
  for (std::uint64_t i : {5u, 2u, 9u, 1u}) store.insert(PatternId::from_counter(i), p);
  const auto hits = top_k(store, p, config(3, 2));
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].id, PatternId::from_counter(1));
  EXPECT_EQ(hits[1].id, PatternId::from_counter(2));
  EXPECT_EQ(hits[2].id, PatternId::from_counter(5));
}

TEST(TopK, Validation) {
  oracle::TempDir dir("validate");
  Store store(dir.path(), 4);
  EXPECT_TRUE(top_k(store, gen_synthetic(1, 4, 1)[0], config(3, 2)).empty());
  populate_synthetic(store, 3, 1);
  const auto q = gen_synthetic(1, 4, 1)[0];
  EXPECT_EQ(top_k(store, q, config(10, 2)).size(), 3u);
  EXPECT_THROW((void)top_k(store, q, config(0, 1)), Error);
  EXPECT_THROW((void)top_k(store, q, config(1, 0)), Error);
  EXPECT_THROW((void)top_k(store, gen_synthetic(1, 5, 1)[0], config(1, 1)), Error);
}

TEST(TopK, VectorizedKernelFindsSameIds) {
  if (!kVectorizedAvailable) GTEST_SKIP();
  oracle::TempDir dir("vec");
  Store store(dir.path(), 64);
  populate_synthetic(store, 500, 8);
  const auto q = gen_synthetic(1, 64, 77)[0];
  const auto a = top_k(store, q, config(10, 1, KernelKind::Scalar));
  const auto b = top_k(store, q, config(10, 3, KernelKind::Vectorized));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].score, b[i].score, 1e-9);
}

TEST(Workers, EnvironmentOverride) {
  ::setenv("RESONANCEDB_WORKERS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3u);
  ::setenv("RESONANCEDB_WORKERS", "zero", 1);
  EXPECT_GE(default_worker_count(), 1u);
  ::unsetenv("RESONANCEDB_WORKERS");
}
