#pragma once

#include <cstdint>
#include <vector>

#include "mddc/trail.hpp"

namespace mddc {

enum class CoverageBackend { counters, heap, interval_union };

// Union of closed layer intervals over [0, n), as a segment tree with cover
// counts. Removing an interval reports the layers it leaves uncovered in
// O(log n) plus O(log n) per reported layer.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(int n);

  void add(int lo, int hi, Trail& trail) { update(1, 0, n_ - 1, lo, hi, +1, trail); }
  // Removes [lo,hi] and appends the layers of [lo,hi] no longer covered.
  void remove(int lo, int hi, Trail& trail, std::vector<int>& uncovered);
  bool covered(int layer) const;
  int covered_count() const { return n_ == 0 ? 0 : len_[1]; }
  bool operator==(const IntervalUnion&) const = default;

 private:
  void update(int node, int l, int r, int lo, int hi, int delta, Trail& trail);
  void pull(int node, int l, int r, Trail& trail);
  void collect(int node, int l, int r, int lo, int hi, std::vector<int>& out) const;

  int n_ = 0;
  std::vector<std::int32_t> cover_, len_;
};

// Live long-edge intervals. An interval (i,j) stands for the layers i..j
// skipped by some live long edge; its multiplicity L(i,j) is the number of
// such edges. Coverage is kept three ways (per-layer counters, per-start
// max-heaps of interval ends, and an IntervalUnion); the selected backend
// answers queries and the others can be cross-checked against it.
class LongEdgeRegistry {
 public:
  LongEdgeRegistry() = default;
  LongEdgeRegistry(int n, CoverageBackend backend);

  int num_layers() const { return n_; }
  CoverageBackend backend() const { return backend_; }
  int count(int i, int j) const { return L_[index(i, j)]; }
  int live_intervals() const { return scalars_[kLive]; }

  void add(int i, int j, Trail& trail);
  void remove(int i, int j, Trail& trail);

  bool covered(int layer) const;
  // Layers that lost their last covering interval since the previous call.
  std::vector<int> take_uncovered(Trail& trail);
  // Must be called after a trail backtrack that may have reverted removals.
  void discard_pending() { pending_.clear(); }

  std::vector<char> covered_by_counters() const;
  std::vector<char> covered_by_heap(Trail& trail);
  std::vector<char> covered_by_union() const;
  std::vector<int> longest_reach(Trail& trail);

  bool operator==(const LongEdgeRegistry&) const = default;

 private:
  int index(int i, int j) const { return i * n_ + j; }
  void heap_push(int i, int j, Trail& trail);
  int heap_top(int i, Trail& trail);
  void heap_sift_down(int i, int pos, Trail& trail);
  void heap_compact(int i, Trail& trail);

  enum { kLive, kCount };
  int n_ = 0;
  CoverageBackend backend_ = CoverageBackend::counters;
  std::vector<std::int32_t> L_;
  std::vector<std::int32_t> coverage_;
  std::vector<std::int32_t> heap_, heap_size_;
  std::vector<std::int32_t> heap_covered_;
  IntervalUnion union_;
  std::vector<std::int32_t> scalars_ = std::vector<std::int32_t>(kCount, 0);
  std::vector<int> pending_;
};

// Wildcard bookkeeping: w[i] live wildcard nodes on layer i and the values of
// layer i whose only remaining support is a wildcard.
class WildcardState {
 public:
  WildcardState() = default;
  WildcardState(int n, std::vector<int> domain_sizes);

  int count(int layer) const { return w_[layer]; }
  void add_node(int layer, Trail& trail) { trail.increment(w_[layer]); }
  // Returns the deferred value indices once the layer's last wildcard dies.
  std::vector<int> remove_node(int layer, Trail& trail);
  void defer(int layer, int value_index, Trail& trail);
  std::vector<int> deferred(int layer) const;

  bool operator==(const WildcardState&) const = default;

 private:
  std::vector<std::int32_t> w_;
  std::vector<int> offset_;
  std::vector<std::int32_t> flag_, stack_, size_;
};

}  // namespace mddc
