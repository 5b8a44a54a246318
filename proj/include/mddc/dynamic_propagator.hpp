#pragma once

#include <cstdint>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/hash.hpp"
#include "mddc/long_edges.hpp"
#include "mddc/mdd.hpp"
#include "mddc/trail.hpp"

namespace mddc {

struct DynamicOptions {
  ReduceMode reduce = ReduceMode::off;
  // In full mode, turn redundant nodes into wildcard nodes instead of long
  // edges. Meant for diagrams in wildcard form.
  bool collapse_to_wildcard = false;
  CoverageBackend coverage = CoverageBackend::counters;
  std::uint64_t seed = 0x5eed;
  int signature_bits = 64;
};

// Incremental GAC propagator for one MDD constraint. Keeps, for every
// assignment (x_i, v), the list of live edges labelled v leaving layer i, and
// propagates edge deaths through the diagram as nodes lose all their outgoing
// (NoValue) or incoming (NoReference) edges. Every change is trailed, so
// checkpoint()/backtrack() bracket a search phase.
//
// Optionally keeps the diagram uniqueness or fully reduced under the current
// domains by merging and collapsing nodes at the end of each step.
class DynamicPropagator {
 public:
  DynamicPropagator(const Mdd& mdd, const DomainStore& domains, DynamicOptions opts = {});
  DynamicPropagator(const DynamicPropagator&) = delete;
  DynamicPropagator& operator=(const DynamicPropagator&) = delete;

  // Values pruned while establishing GAC at construction.
  const Deltas& initial_deltas() const { return initial_deltas_; }

  // Removes the requested assignments and everything they make unsupported.
  // Removed literals (requests included) are appended to out.
  Status remove(const Deltas& requests, Deltas* out = nullptr);
  Status assign(int var, int value, Deltas* out = nullptr);

  void checkpoint();
  void backtrack();
  int depth() const { return static_cast<int>(trail_.depth()); }

  bool failed() const { return st_.scalars[kFailed] != 0; }
  bool entailed() const;

  const Mdd& mdd() const { return st_.mdd; }
  const DomainStore& domains() const { return st_.dom; }
  const StepMetrics& metrics() const { return metrics_; }
  StepMetrics& metrics() { return metrics_; }
  const DynamicOptions& options() const { return opts_; }
  int initial_edges() const { return initial_edges_; }
  // remove_edge calls since the trail was last at depth 0 along this branch.
  std::uint64_t descent_remove_calls() const { return st_.wide[kDescentCalls]; }
  std::size_t trail_size() const { return trail_.size(); }

  // Live edges in s_{var, value}, in list order.
  std::vector<EdgeId> support_list(int var, int value) const;
  const LongEdgeRegistry& registry() const { return st_.reg; }
  LongEdgeRegistry& registry() { return st_.reg; }
  Trail& trail() { return trail_; }
  int wildcard_count(int layer) const { return st_.wild.count(layer); }
  int distinct_children(NodeId u) const { return st_.distinct[u]; }
  int edge_moves(EdgeId e) const { return st_.moves[e]; }

  // Maintained signature of node u and the same value computed from scratch.
  std::uint64_t signature(NodeId u) const { return st_.sig[u]; }
  std::uint64_t recompute_signature(NodeId u) const;
  const HashFamily& hash() const { return hash_; }
  // XOR evaluations spent building the initial signatures.
  std::uint64_t initial_hash_ops() const { return initial_hash_ops_; }
  // Signature, label-set and distinct-child bookkeeping agree with a
  // recomputation; used by tests after arbitrary mutations.
  bool bookkeeping_consistent() const;

  // Every trailed piece of state, for exact round-trip comparison.
  struct State {
    Mdd mdd;
    DomainStore dom;
    std::vector<std::int32_t> sup_head, sup_prev, sup_next, in_sup;
    LongEdgeRegistry reg;
    WildcardState wild;
    std::vector<std::uint64_t> sig, labelsig, domsig;
    std::vector<std::int32_t> distinct, pair_count, moves;
    TrailedHashIndex pairs, unique, single;
    std::vector<std::int32_t> scalars;
    std::vector<std::uint64_t> wide;
    bool operator==(const State&) const = default;
  };
  const State& state() const { return st_; }

 private:
  enum { kFailed, kMultiLayers, kMultiChildNodes, kScalarCount };
  enum { kDescentCalls, kWideCount };
  enum class Origin { request, up, down, quiet };

  bool reducing() const { return reduce_ready_; }
  int slot(int layer, int index) const { return offset_[layer] + index; }
  int label_index(int layer, int label) const { return st_.dom.index_of(layer, label); }

  void fail();
  void kill_edge(EdgeId e, Origin origin);
  void drain();
  void finalize_node(NodeId u);
  void lose_value(int layer, int index);
  void check_support(int layer, int index);
  void flush_uncovered();

  void support_unlink(EdgeId e);
  void support_link(EdgeId e);
  void interval_of(EdgeId e, bool add);
  void pair_add(NodeId p, NodeId c, EdgeId e);
  void pair_remove(NodeId p, NodeId c);
  void set_distinct(NodeId p, int value);
  void update_single(NodeId u);
  void mark_dirty(NodeId u);
  void drop_edge_quietly(EdgeId e);
  void move_edge(EdgeId e, NodeId to);

  void init_reduction();
  void process_dirty();
  void process_node(NodeId u);
  bool same_children(NodeId a, NodeId b);
  void merge(NodeId subsumee, NodeId subsumer);
  void collapse_long(NodeId u);
  void collapse_wildcard(NodeId u);

  DynamicOptions opts_;
  HashFamily hash_;
  Trail trail_;
  State st_;
  std::vector<int> offset_;
  bool reduce_ready_ = false;
  int initial_edges_ = 0;
  std::uint64_t initial_hash_ops_ = 0;
  Deltas initial_deltas_;
  StepMetrics metrics_;

  // Per-step scratch, never trailed.
  struct Work {
    NodeId node;
    bool up;
  };
  std::vector<Work> work_;
  Deltas* out_ = nullptr;
  std::vector<std::vector<NodeId>> dirty_;
  std::vector<char> in_dirty_;
  std::vector<NodeId> stamp_dest_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_gen_ = 0;
};

}  // namespace mddc
