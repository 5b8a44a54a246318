#pragma once

#include <utility>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/mdd.hpp"

namespace mddc {

// Rows of allowed value vectors. Column k of every row is the value of the
// k-th layer of the diagram being built; scope records which problem
// variables those layers stand for.
struct TupleTable {
  std::vector<int> scope;
  std::vector<std::vector<int>> rows;
};

// Vertices are numbered 1..vertex_count.
struct UndirectedGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  bool adjacent(int a, int b) const;
};

// Fully reduced diagram accepting exactly the rows. Throws EmptyConstraint on
// an empty table and std::invalid_argument on rows outside the domains.
Mdd build_from_tuples(const TupleTable& table, const DomainStore& domains);

// Product of two diagrams over the same layers, fully reduced.
Mdd conjoin(const Mdd& a, const Mdd& b, const DomainStore& domains);

// Bottom-up merge of nodes with identical (C_u, layer). Edges whose labels
// are outside the current domains are dropped first, together with every node
// that thereby loses all paths. In full mode a node whose edges cover its
// whole current domain and share one child is replaced by a long edge.
// Throws EmptyConstraint when no solution survives.
Mdd reduce_static(const Mdd& mdd, const DomainStore& domains, ReduceMode mode);

// Expands every long edge (and a root above layer 1) into chains of nodes
// carrying all current values, then uniqueness-reduces. No long edges or
// wildcards remain.
Mdd expand_long_edges(const Mdd& mdd, const DomainStore& domains);

// Expanded form where every node whose edges carry the whole current domain
// to one child is turned into a wildcard node.
Mdd to_wildcard_form(const Mdd& mdd, const DomainStore& domains);

// Rewrites a diagram into the requested edge representation.
Mdd with_edge_mode(const Mdd& mdd, const DomainStore& domains, EdgeMode mode);

// Re-layers a diagram built over a sorted sub-scope onto all num_vars
// problem variables; the variables missing from scope become skipped layers.
Mdd lift_to_scope(const Mdd& mdd, const std::vector<int>& scope, int num_vars);

// Valid walks of vertex_count vertices over domain {1..vertex_count},
// uniqueness reduced.
Mdd n_walk_mdd(const UndirectedGraph& g);
DomainStore n_walk_domains(const UndirectedGraph& g);

// Vectors of length n over {1..d} containing value at least once.
Mdd at_least_once_mdd(int n, int d, int value, bool allow_long_edges);

// x1 <= x2, ..., x1 <= xj over {1..k}.
Mdd chain_leq_mdd(int j, int k, EdgeMode mode = EdgeMode::long_edges);

DomainStore uniform_domains(int n, int lo, int hi);

}  // namespace mddc
