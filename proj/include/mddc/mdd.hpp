#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/trail.hpp"
#include "mddc/types.hpp"

namespace mddc {

// Layers are 0-based in code: variable i lives on layer i and the terminal on
// layer num_vars(). The text format uses 1-based layers.
struct Node {
  std::int32_t layer = 0;
  std::int32_t alive = 1;
  std::int32_t out_head = kNone;
  std::int32_t in_head = kNone;
  std::int32_t out_degree = 0;
  std::int32_t in_degree = 0;
  std::int32_t wildcard = 0;
};

struct Edge {
  std::int32_t source = kNone;
  std::int32_t dest = kNone;
  std::int32_t label = 0;
  std::int32_t alive = 1;
  std::int32_t out_prev = kNone;
  std::int32_t out_next = kNone;
  std::int32_t in_prev = kNone;
  std::int32_t in_next = kNone;
};

enum class EdgeKind { plain, long_edge, wildcard };

// Layered multigraph with intrusive in/out edge lists. Nodes and edges live in
// arenas and are tombstoned on death; ids stay stable for the lifetime of the
// diagram. All mutators write through a Trail so that they can be undone.
//
// An unlinked edge keeps its own list pointers, so iterating a list while the
// current element is removed is safe.
class Mdd {
 public:
  Mdd() = default;
  explicit Mdd(int num_vars);

  int num_vars() const { return num_vars_; }
  NodeId root() const { return scalars_[kRoot]; }
  NodeId terminal() const { return scalars_[kTerminal]; }

  NodeId add_node(int layer);
  EdgeId add_edge(NodeId source, int label, NodeId dest);
  void set_root(NodeId u) { scalars_[kRoot] = u; }
  void set_terminal(NodeId u) { scalars_[kTerminal] = u; }

  const Node& node(NodeId u) const { return nodes_[u]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  int node_capacity() const { return static_cast<int>(nodes_.size()); }
  int edge_capacity() const { return static_cast<int>(edges_.size()); }

  int layer(NodeId u) const { return nodes_[u].layer; }
  bool alive(NodeId u) const { return nodes_[u].alive != 0; }
  bool edge_alive(EdgeId e) const { return edges_[e].alive != 0; }
  EdgeKind kind(EdgeId e) const;

  int live_nodes(int layer) const { return live_per_layer_[layer]; }
  int live_node_total() const;
  int live_edges() const { return scalars_[kLiveEdges]; }
  std::vector<int> live_nodes_per_layer() const { return {live_per_layer_.begin(), live_per_layer_.end()}; }

  template <class F>
  void for_each_out(NodeId u, F&& f) const {
    for (EdgeId e = nodes_[u].out_head; e != kNone;) {
      const EdgeId next = edges_[e].out_next;
      f(e);
      e = next;
    }
  }
  template <class F>
  void for_each_in(NodeId u, F&& f) const {
    for (EdgeId e = nodes_[u].in_head; e != kNone;) {
      const EdgeId next = edges_[e].in_next;
      f(e);
      e = next;
    }
  }
  std::vector<EdgeId> out_edges(NodeId u) const;
  std::vector<EdgeId> in_edges(NodeId u) const;

  // Reversible mutations.
  void unlink_edge(EdgeId e, Trail& trail);
  void redirect_edge(EdgeId e, NodeId new_dest, Trail& trail);
  void relabel_edge(EdgeId e, int label, Trail& trail);
  void kill_node(NodeId u, Trail& trail);
  void set_wildcard(NodeId u, bool on, Trail& trail);
  void change_root(NodeId u, Trail& trail) { trail.assign(scalars_[kRoot], u); }

  bool operator==(const Mdd& other) const;

 private:
  enum { kRoot, kTerminal, kLiveEdges, kScalarCount };
  void link_in(EdgeId e, NodeId dest, Trail& trail);
  void unlink_in(EdgeId e, Trail& trail);

  int num_vars_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> live_per_layer_;
  std::vector<std::int32_t> scalars_ = std::vector<std::int32_t>(kScalarCount, kNone);
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the structural restrictions of a decision diagram on its live part,
// plus coherence of the maintained degree and liveness counters.
ValidationReport validate(const Mdd& mdd);

// Every full assignment over the current domains accepted by a root-terminal
// path, ascending lexicographically. Skipped layers and wildcard edges expand
// to the current domain of their variable.
std::vector<std::vector<int>> enumerate_solutions(const Mdd& mdd, const DomainStore& domains);

struct LiveCounts {
  std::vector<int> nodes_per_layer;
  int edges = 0;
  int total_nodes() const;
};
LiveCounts live_counts(const Mdd& mdd);
// Recount from the flags and lists rather than the maintained counters.
LiveCounts recount_live(const Mdd& mdd);
int count_long_edges(const Mdd& mdd);

// Copy of the live part reachable from the root, renumbered canonically:
// depth-first from the root with out-edges visited by ascending label.
// Two reduced diagrams are isomorphic iff their canonical copies are equal.
Mdd canonical_copy(const Mdd& mdd);
bool isomorphic(const Mdd& a, const Mdd& b);

void write_mdd(std::ostream& out, const Mdd& mdd);
std::string to_text(const Mdd& mdd);
Mdd read_mdd(std::istream& in);
Mdd mdd_from_text(const std::string& text);

// Per-step counters used to check the operation-count bounds. Fields ending
// in _step are reset when a propagation step begins.
struct StepMetrics {
  std::uint64_t step_number = 0;
  std::uint64_t edges_traversed_scan = 0;
  std::uint64_t remove_edge_calls = 0;
  std::uint64_t edges_died_no_reference = 0;
  std::uint64_t edges_died_no_value = 0;
  std::uint64_t nodes_merged = 0;
  std::uint64_t nodes_collapsed = 0;
  std::uint64_t direction_violations = 0;
  std::uint64_t nogood_hits = 0;
  std::uint64_t interval_decrements = 0;
  int max_edge_moves = 0;

  // Totals since construction (or the last reset_totals()).
  std::uint64_t total_edges_traversed_scan = 0;
  std::uint64_t total_remove_edge_calls = 0;
  std::uint64_t total_nodes_merged = 0;
  std::uint64_t total_interval_decrements = 0;

  void begin_step() {
    ++step_number;
    edges_traversed_scan = remove_edge_calls = 0;
    edges_died_no_reference = edges_died_no_value = 0;
    nodes_merged = nodes_collapsed = 0;
    interval_decrements = 0;
  }
  void reset_totals() {
    total_edges_traversed_scan = total_remove_edge_calls = total_nodes_merged = 0;
    total_interval_decrements = 0;
    max_edge_moves = 0;
  }
};

}  // namespace mddc
