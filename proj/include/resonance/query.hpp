#pragma once

// Exact top-k by parallel full scan.
//
// The snapshot's record slots are split into contiguous ranges, one per
// worker. Each worker keeps a bounded heap of its k best hits, skipping
// empty and tombstoned slots as it goes; the partial lists are merged once
// all workers finish. Every score is computed independently by the same
// kernel, and ties rank by id, so the result does not depend on the worker
// count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "resonance/core_types.hpp"
#include "resonance/error.hpp"
#include "resonance/kernel.hpp"
#include "resonance/store.hpp"

namespace resonance {

[[nodiscard]] inline std::size_t default_worker_count() {
  if (const char* env = std::getenv("RESONANCEDB_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct QueryConfig {
  std::size_t k = 10;
  std::size_t workers = default_worker_count();
  KernelKind kernel = KernelKind::Scalar;
};

struct SlotRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  [[nodiscard]] std::uint64_t size() const noexcept { return end - begin; }
  friend bool operator==(const SlotRange&, const SlotRange&) = default;
};

/// Splits [0, n) into at most `workers` contiguous, non-empty ranges whose
/// sizes differ by at most one; larger ranges come first.
[[nodiscard]] inline std::vector<SlotRange> partition_plan(std::uint64_t n, std::size_t workers) {
  if (workers == 0) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  std::vector<SlotRange> out;
  const std::uint64_t parts = std::min<std::uint64_t>(n, workers);
  if (parts == 0) return out;
  const std::uint64_t base = n / parts;
  const std::uint64_t extra = n % parts;
  std::uint64_t at = 0;
  for (std::uint64_t i = 0; i < parts; ++i) {
    const std::uint64_t len = base + (i < extra ? 1 : 0);
    out.push_back({at, at + len});
    at += len;
  }
  return out;
}

/// Keeps the k best hits seen so far.
class TopKCollector {
 public:
  explicit TopKCollector(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

  void push(const Hit& hit) {
    if (k_ == 0) return;
    if (heap_.size() < k_) {
      heap_.push_back(hit);
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    } else if (ranks_before(hit, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), ranks_before);
      heap_.back() = hit;
      std::push_heap(heap_.begin(), heap_.end(), ranks_before);
    }
  }

  /// Worst hit currently kept; only valid when full().
  [[nodiscard]] const Hit& worst() const noexcept { return heap_.front(); }
  [[nodiscard]] bool full() const noexcept { return heap_.size() == k_; }

  /// Hits in ranking order.
  [[nodiscard]] std::vector<Hit> take_sorted() && {
    std::sort_heap(heap_.begin(), heap_.end(), ranks_before);
    return std::move(heap_);
  }

 private:
  std::size_t k_;
  std::vector<Hit> heap_;  // max-heap under ranks_before: front is the worst kept hit
};

/// Global top-k of several partial top-k lists.
[[nodiscard]] inline std::vector<Hit> merge_heaps(const std::vector<std::vector<Hit>>& partials,
                                                  std::size_t k) {
  std::vector<Hit> all;
  for (const auto& p : partials) all.insert(all.end(), p.begin(), p.end());
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), ranks_before);
  all.resize(take);
  return all;
}

namespace detail {

template <PatternLike Q>
std::vector<Hit> scan_range(const StoreSnapshot& snap, const Q& query, SlotRange range,
                            std::size_t k, KernelKind kind) {
  TopKCollector top(k);
  const std::uint32_t dim = snap.dim();
  std::vector<double> amp(dim);
  std::vector<double> ph(dim);
  const PatternView<double> view{amp, ph};
  std::uint64_t slot = range.begin;
  std::size_t s = snap.segment_of(slot);
  while (slot < range.end) {
    while (slot >= snap.segment_end(s)) ++s;
    const Segment& seg = snap.segment(s);
    const std::uint64_t seg_begin = snap.segment_begin(s);
    const std::uint64_t stop = std::min(range.end, snap.segment_end(s));
    for (; slot < stop; ++slot) {
      const auto r = static_cast<std::uint32_t>(slot - seg_begin);
      if (seg.flag(r) != RecordFlag::Live) continue;
      seg.read_widened(r, amp, ph);
      top.push({seg.id(r), resonance(query, view, kind)});
    }
  }
  return std::move(top).take_sorted();
}

}  // namespace detail

/// Top min(k, live) hits by score descending, ties by id ascending.
template <PatternLike Q>
[[nodiscard]] std::vector<Hit> top_k(const Store& store, const Q& query, const QueryConfig& cfg) {
  if (cfg.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (cfg.workers == 0) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  if (query.size() != store.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query has dimension " + std::to_string(query.size()) +
                                                  ", store has " + std::to_string(store.dim()));
  }
  if (cfg.kernel == KernelKind::Vectorized && !kVectorizedAvailable) {
    throw Error(ErrorCode::Unsupported, "vectorized kernel not built");
  }
  const StoreSnapshot snap = store.snapshot();
  const auto ranges = partition_plan(snap.total_slots(), cfg.workers);
  if (ranges.empty()) return {};

  std::vector<std::vector<Hit>> partials(ranges.size());
  std::vector<std::exception_ptr> errors(ranges.size());
  auto run = [&](std::size_t i) {
    try {
      partials[i] = detail::scan_range(snap, query, ranges[i], cfg.k, cfg.kernel);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(ranges.size() - 1);
    for (std::size_t i = 1; i < ranges.size(); ++i) threads.emplace_back(run, i);
    run(0);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return merge_heaps(partials, cfg.k);
}

}  // namespace resonance
