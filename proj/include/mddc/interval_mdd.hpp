#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/long_edges.hpp"
#include "mddc/mdd.hpp"
#include "mddc/trail.hpp"

namespace mddc {

// Closed range of value indices into the sorted original domain of a layer.
struct IndexRange {
  int lo = 0, hi = 0;
  int length() const { return hi - lo + 1; }
  bool contains(int i) const { return lo <= i && i <= hi; }
  auto operator<=>(const IndexRange&) const = default;
};

// Diagram whose edges carry ranges of values. The skeleton is an ordinary
// Mdd without long edges whose edge labels are ids into the per-layer list of
// distinct ranges.
struct IntervalDag {
  Mdd skeleton;
  std::vector<std::vector<IndexRange>> ranges;
};

// Each row holds one closed value interval [lo, hi] per scope column.
struct IntervalTable {
  std::vector<int> scope;
  std::vector<std::vector<std::pair<int, int>>> rows;
};

IntervalDag build_interval_dag(const IntervalTable& table, const DomainStore& domains);
// Merges the edges of each node into maximal runs of consecutive values
// leading to the same child. Input must have no long edges or wildcards.
IntervalDag compress_to_intervals(const Mdd& plain, const DomainStore& domains);
// One plain edge per value of every range.
Mdd expand_to_mdd(const IntervalDag& dag, const DomainStore& domains);
// Sum over layers of the lengths of the distinct ranges.
long long total_range_length(const IntervalDag& dag);

// Static centred interval tree answering stabbing queries.
class IntervalTree {
 public:
  IntervalTree() = default;
  explicit IntervalTree(const std::vector<IndexRange>& ranges);
  // Ids of ranges containing point, in no particular order.
  void stab(int point, std::vector<int>& out) const;

 private:
  struct Node {
    int center;
    std::vector<int> by_lo, by_hi;  // ids, ascending lo / descending hi
    int left = -1, right = -1;
  };
  int build(std::vector<int> ids);
  std::vector<IndexRange> ranges_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

struct IntervalOptions {
  // Per-value cover counters (default) or an IntervalUnion per layer.
  bool union_backend = false;
};

// GAC propagator over an IntervalDag. A range stays live while some value of
// it remains in the domain and some edge labelled with it is alive; a value
// stays in the domain while a live range covers it.
class IntervalPropagator {
 public:
  IntervalPropagator(const IntervalDag& dag, const DomainStore& domains, IntervalOptions opts = {});
  IntervalPropagator(const IntervalPropagator&) = delete;
  IntervalPropagator& operator=(const IntervalPropagator&) = delete;

  const Deltas& initial_deltas() const { return initial_deltas_; }
  Status remove(const Deltas& requests, Deltas* out = nullptr);
  Status assign(int var, int value, Deltas* out = nullptr);
  void checkpoint() { trail_.checkpoint(); }
  void backtrack();
  int depth() const { return static_cast<int>(trail_.depth()); }

  bool failed() const { return st_.scalars[0] != 0; }
  bool entailed() const;
  const Mdd& skeleton() const { return st_.mdd; }
  const DomainStore& domains() const { return st_.dom; }
  const StepMetrics& metrics() const { return metrics_; }
  StepMetrics& metrics() { return metrics_; }
  std::uint64_t descent_decrements() const { return st_.wide[0]; }
  long long range_length_total() const { return range_length_total_; }

  struct State {
    Mdd mdd;
    DomainStore dom;
    std::vector<std::int32_t> count, live, edge_head, edge_prev, edge_next, cover;
    std::vector<IntervalUnion> unions;
    std::vector<std::int32_t> scalars;
    std::vector<std::uint64_t> wide;
    bool operator==(const State&) const = default;
  };
  const State& state() const { return st_; }

 private:
  int rid(int layer, int id) const { return range_offset_[layer] + id; }
  int vslot(int layer, int index) const { return value_offset_[layer] + index; }
  void fail();
  void kill_edge(EdgeId e, bool up, bool down);
  void drain();
  void range_dies(int layer, int id);
  void lose_value(int layer, int index);
  void list_unlink(EdgeId e);

  IntervalOptions opts_;
  Trail trail_;
  State st_;
  std::vector<std::vector<IndexRange>> ranges_;
  std::vector<IntervalTree> trees_;
  std::vector<int> range_offset_, value_offset_;
  long long range_length_total_ = 0;
  Deltas initial_deltas_;
  StepMetrics metrics_;
  Deltas* out_ = nullptr;
  struct Work {
    NodeId node;
    bool up;
  };
  std::vector<Work> work_;
  std::vector<int> stabbed_, scratch_;
};

}  // namespace mddc
