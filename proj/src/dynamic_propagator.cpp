#include "mddc/dynamic_propagator.hpp"

#include <algorithm>
#include <stdexcept>

namespace mddc {

DynamicPropagator::DynamicPropagator(const Mdd& mdd, const DomainStore& domains, DynamicOptions opts)
    : opts_(opts), hash_(opts.seed, opts.signature_bits) {
  const int n = mdd.num_vars();
  if (domains.num_vars() != n) throw std::invalid_argument("domain count does not match the diagram");
  st_.mdd = mdd;
  st_.dom = domains;
  const int V = mdd.node_capacity(), E = mdd.edge_capacity();

  offset_.assign(n + 1, 0);
  std::vector<int> sizes(n);
  for (int i = 0; i < n; ++i) {
    sizes[i] = domains.original_size(i);
    offset_[i + 1] = offset_[i] + sizes[i];
  }
  st_.sup_head.assign(offset_[n], kNone);
  st_.sup_prev.assign(E, kNone);
  st_.sup_next.assign(E, kNone);
  st_.in_sup.assign(E, 0);
  st_.reg = LongEdgeRegistry(n, opts.coverage);
  st_.wild = WildcardState(n, sizes);
  st_.sig.assign(V, 0);
  st_.labelsig.assign(V, 0);
  st_.domsig.assign(n, 0);
  st_.distinct.assign(V, 0);
  st_.pair_count.assign(E, 0);
  st_.moves.assign(E, 0);
  st_.pairs = TrailedHashIndex(E, 64, true);
  st_.unique = TrailedHashIndex(V, opts.signature_bits, false);
  st_.single = TrailedHashIndex(V, opts.signature_bits, false);
  st_.scalars.assign(kScalarCount, 0);
  st_.wide.assign(kWideCount, 0);
  dirty_.assign(n + 1, {});
  in_dirty_.assign(V, 0);
  stamp_dest_.assign(domains.max_domain_size() + 1, kNone);
  stamp_.assign(domains.max_domain_size() + 1, 0);

  Mdd& g = st_.mdd;
  for (EdgeId e = 0; e < E; ++e) {
    const Edge& ed = g.edge(e);
    if (!ed.alive) continue;
    if (ed.label != kWildcard) {
      if (label_index(g.layer(ed.source), ed.label) < 0)
        throw std::invalid_argument("edge label " + std::to_string(ed.label) + " outside the original domain");
      support_link(e);
    }
    interval_of(e, true);
    pair_add(ed.source, ed.dest, e);
  }
  if (g.layer(g.root()) > 0) st_.reg.add(0, g.layer(g.root()) - 1, trail_);
  for (NodeId u = 0; u < V; ++u)
    if (g.alive(u) && g.node(u).wildcard) st_.wild.add_node(g.layer(u), trail_);
  for (int l = 0; l <= n; ++l)
    if (g.live_nodes(l) > 1) ++st_.scalars[kMultiLayers];
  st_.reg.take_uncovered(trail_);

  out_ = &initial_deltas_;
  // Dangling parts of the input die first.
  for (NodeId u = 0; u < V && !failed(); ++u) {
    if (!g.alive(u)) continue;
    if (u != g.terminal() && g.node(u).out_degree == 0) {
      if (u == g.root()) fail();
      else if (g.node(u).in_degree == 0) finalize_node(u);
      else work_.push_back({u, true});
    } else if (u != g.root() && g.node(u).in_degree == 0) {
      work_.push_back({u, false});
    }
  }
  drain();
  // Edges carrying values outside the current domains.
  for (int l = 0; l < n && !failed(); ++l)
    for (int idx = 0; idx < sizes[l] && !failed(); ++idx) {
      if (domains.contains_index(l, idx)) continue;
      while (!failed() && st_.sup_head[slot(l, idx)] != kNone) {
        kill_edge(st_.sup_head[slot(l, idx)], Origin::request);
        drain();
      }
    }
  for (int l = 0; l < n && !failed(); ++l)
    for (int idx : st_.dom.current_index_list(l)) {
      check_support(l, idx);
      if (failed()) break;
    }
  if (!failed()) flush_uncovered();
  if (!failed() && opts_.reduce != ReduceMode::off) init_reduction();
  out_ = nullptr;
  initial_edges_ = g.live_edges();
  st_.wide[kDescentCalls] = 0;
  metrics_ = StepMetrics{};
}

Status DynamicPropagator::remove(const Deltas& requests, Deltas* out) {
  metrics_.begin_step();
  if (failed()) return Status::failed;
  out_ = out;
  std::vector<std::pair<int, int>> todo;
  for (const Literal& lit : requests) {
    const int idx = st_.dom.index_of(lit.var, lit.value);
    if (idx < 0 || !st_.dom.contains_index(lit.var, idx)) continue;
    todo.push_back({lit.var, idx});
    lose_value(lit.var, idx);
    if (failed()) break;
  }
  for (auto [l, idx] : todo) {
    while (!failed() && st_.sup_head[slot(l, idx)] != kNone) {
      kill_edge(st_.sup_head[slot(l, idx)], Origin::request);
      drain();
    }
    if (failed()) break;
  }
  if (!failed()) flush_uncovered();
  if (!failed() && reducing()) {
    process_dirty();
    flush_uncovered();
  }
  metrics_.total_remove_edge_calls += metrics_.remove_edge_calls;
  out_ = nullptr;
  return failed() ? Status::failed : Status::ok;
}

Status DynamicPropagator::assign(int var, int value, Deltas* out) {
  Deltas r;
  for (int v : st_.dom.current_values(var))
    if (v != value) r.push_back({var, v});
  return remove(r, out);
}

void DynamicPropagator::checkpoint() { trail_.checkpoint(); }

void DynamicPropagator::backtrack() {
  if (trail_.depth() == 0) throw std::logic_error("backtrack without an open checkpoint");
  trail_.backtrack();
  work_.clear();
  for (auto& q : dirty_) {
    for (NodeId u : q) in_dirty_[u] = 0;
    q.clear();
  }
  st_.reg.discard_pending();
}

bool DynamicPropagator::entailed() const {
  if (failed()) return false;
  if (st_.mdd.root() == st_.mdd.terminal()) return true;
  return st_.scalars[kMultiLayers] == 0 && st_.scalars[kMultiChildNodes] == 0;
}

std::vector<EdgeId> DynamicPropagator::support_list(int var, int value) const {
  std::vector<EdgeId> out;
  const int idx = st_.dom.index_of(var, value);
  if (idx < 0) return out;
  for (EdgeId e = st_.sup_head[slot(var, idx)]; e != kNone; e = st_.sup_next[e]) out.push_back(e);
  return out;
}

void DynamicPropagator::fail() {
  trail_.assign(st_.scalars[kFailed], 1);
  work_.clear();
  for (auto& q : dirty_) {
    for (NodeId u : q) in_dirty_[u] = 0;
    q.clear();
  }
}

void DynamicPropagator::kill_edge(EdgeId e, Origin origin) {
  Mdd& g = st_.mdd;
  const Edge ed = g.edge(e);
  if (!ed.alive) return;
  ++metrics_.remove_edge_calls;
  trail_.assign(st_.wide[kDescentCalls], st_.wide[kDescentCalls] + 1);
  if (origin == Origin::up) ++metrics_.edges_died_no_value;
  if (origin == Origin::down) ++metrics_.edges_died_no_reference;

  const NodeId u = ed.source, c = ed.dest;
  const int lu = g.layer(u);
  const bool had_support = st_.in_sup[e] != 0;
  if (had_support) support_unlink(e);
  interval_of(e, false);
  pair_remove(u, c);
  if (reducing()) {
    trail_.assign(st_.sig[u], st_.sig[u] ^ hash_.edge(ed.label, c));
    if (ed.label != kWildcard) trail_.assign(st_.labelsig[u], st_.labelsig[u] ^ hash_.domain_term(lu, ed.label));
  }
  g.unlink_edge(e, trail_);
  if (reducing()) {
    update_single(u);
    mark_dirty(u);
  }
  if (had_support) {
    check_support(lu, label_index(lu, ed.label));
    if (failed()) return;
  }
  if (g.node(u).out_degree == 0) {
    if (u == g.root()) return fail();
    if (g.node(u).in_degree == 0) {
      finalize_node(u);
      if (failed()) return;
    } else {
      work_.push_back({u, true});
      if (origin == Origin::down) ++metrics_.direction_violations;
    }
  }
  if (g.node(c).in_degree == 0) {
    if (c == g.terminal()) return fail();
    if (g.node(c).out_degree == 0) {
      finalize_node(c);
    } else {
      work_.push_back({c, false});
      if (origin == Origin::up) ++metrics_.direction_violations;
    }
  }
}

void DynamicPropagator::drain() {
  Mdd& g = st_.mdd;
  while (!work_.empty() && !failed()) {
    const Work w = work_.back();
    work_.pop_back();
    if (!g.alive(w.node)) continue;
    if (w.up)
      g.for_each_in(w.node, [&](EdgeId e) {
        if (!failed()) kill_edge(e, Origin::up);
      });
    else
      g.for_each_out(w.node, [&](EdgeId e) {
        if (!failed()) kill_edge(e, Origin::down);
      });
  }
}

void DynamicPropagator::finalize_node(NodeId u) {
  Mdd& g = st_.mdd;
  const int l = g.layer(u);
  if (reducing()) {
    st_.unique.erase(u, trail_);
    st_.single.erase(u, trail_);
  }
  if (g.live_nodes(l) == 2) trail_.increment(st_.scalars[kMultiLayers], -1);
  g.kill_node(u, trail_);
  if (g.node(u).wildcard) {
    for (int idx : st_.wild.remove_node(l, trail_)) {
      check_support(l, idx);
      if (failed()) return;
    }
  }
}

void DynamicPropagator::lose_value(int layer, int index) {
  DomainStore& d = st_.dom;
  if (!d.remove_index(layer, index, trail_)) return;
  const int value = d.value_at(layer, index);
  if (out_) out_->push_back({layer, value});
  if (opts_.reduce == ReduceMode::full) {
    const std::uint64_t s = st_.domsig[layer] ^ hash_.domain_term(layer, value);
    trail_.assign(st_.domsig[layer], s);
    st_.single.for_each_with_key(s, [&](int x) {
      if (st_.mdd.layer(x) == layer) mark_dirty(x);
    });
  }
  if (d.empty(layer)) fail();
}

void DynamicPropagator::check_support(int layer, int index) {
  if (!st_.dom.contains_index(layer, index)) return;
  if (st_.sup_head[slot(layer, index)] != kNone) return;
  if (st_.reg.covered(layer)) return;
  if (st_.wild.count(layer) > 0) {
    st_.wild.defer(layer, index, trail_);
    return;
  }
  lose_value(layer, index);
}

void DynamicPropagator::flush_uncovered() {
  for (int l : st_.reg.take_uncovered(trail_)) {
    for (int idx : st_.dom.current_index_list(l)) {
      check_support(l, idx);
      if (failed()) return;
    }
  }
}

void DynamicPropagator::support_link(EdgeId e) {
  const Edge& ed = st_.mdd.edge(e);
  const int l = st_.mdd.layer(ed.source);
  std::int32_t& head = st_.sup_head[slot(l, label_index(l, ed.label))];
  trail_.assign(st_.sup_prev[e], kNone);
  trail_.assign(st_.sup_next[e], head);
  if (head != kNone) trail_.assign(st_.sup_prev[head], e);
  trail_.assign(head, e);
  trail_.assign(st_.in_sup[e], 1);
}

void DynamicPropagator::support_unlink(EdgeId e) {
  const Edge& ed = st_.mdd.edge(e);
  const int l = st_.mdd.layer(ed.source);
  const int p = st_.sup_prev[e], nx = st_.sup_next[e];
  if (p != kNone)
    trail_.assign(st_.sup_next[p], nx);
  else
    trail_.assign(st_.sup_head[slot(l, label_index(l, ed.label))], nx);
  if (nx != kNone) trail_.assign(st_.sup_prev[nx], p);
  trail_.assign(st_.in_sup[e], 0);
}

void DynamicPropagator::interval_of(EdgeId e, bool add) {
  const Edge& ed = st_.mdd.edge(e);
  const int lo = st_.mdd.layer(ed.source) + 1, hi = st_.mdd.layer(ed.dest) - 1;
  if (lo > hi) return;
  if (add)
    st_.reg.add(lo, hi, trail_);
  else
    st_.reg.remove(lo, hi, trail_);
}

namespace {
std::uint64_t pair_key(NodeId p, NodeId c) {
  return static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32 | static_cast<std::uint32_t>(c);
}
}  // namespace

void DynamicPropagator::set_distinct(NodeId p, int value) {
  const int old = st_.distinct[p];
  if ((old >= 2) != (value >= 2)) trail_.increment(st_.scalars[kMultiChildNodes], value >= 2 ? 1 : -1);
  trail_.assign(st_.distinct[p], value);
}

void DynamicPropagator::pair_add(NodeId p, NodeId c, EdgeId e) {
  const std::uint64_t key = pair_key(p, c);
  int rep = kNone;
  st_.pairs.for_each_with_key(key, [&](int r) { rep = r; });
  if (rep != kNone) {
    trail_.increment(st_.pair_count[rep]);
    return;
  }
  st_.pairs.insert(e, key, trail_);
  trail_.assign(st_.pair_count[e], 1);
  set_distinct(p, st_.distinct[p] + 1);
}

void DynamicPropagator::pair_remove(NodeId p, NodeId c) {
  const std::uint64_t key = pair_key(p, c);
  int rep = kNone;
  st_.pairs.for_each_with_key(key, [&](int r) { rep = r; });
  if (rep == kNone) throw std::logic_error("pair index lost an edge");
  trail_.increment(st_.pair_count[rep], -1);
  if (st_.pair_count[rep] == 0) {
    st_.pairs.erase(rep, trail_);
    set_distinct(p, st_.distinct[p] - 1);
  }
}

bool DynamicPropagator::bookkeeping_consistent() const {
  const Mdd& g = st_.mdd;
  for (NodeId u = 0; u < g.node_capacity(); ++u) {
    if (!g.alive(u)) continue;
    std::vector<NodeId> kids;
    std::uint64_t ls = 0;
    g.for_each_out(u, [&](EdgeId e) {
      kids.push_back(g.edge(e).dest);
      if (g.edge(e).label != kWildcard) ls ^= hash_.domain_term(g.layer(u), g.edge(e).label);
    });
    std::sort(kids.begin(), kids.end());
    const int distinct = static_cast<int>(std::unique(kids.begin(), kids.end()) - kids.begin());
    if (distinct != st_.distinct[u]) return false;
    if (reducing()) {
      if (st_.sig[u] != recompute_signature(u)) return false;
      if (st_.labelsig[u] != ls) return false;
    }
  }
  for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
    const bool want = g.edge_alive(e) && g.edge(e).label != kWildcard;
    if (want != (st_.in_sup[e] != 0)) return false;
  }
  const int n = g.num_vars();
  std::vector<int> L(static_cast<std::size_t>(n) * n, 0);
  for (EdgeId e = 0; e < g.edge_capacity(); ++e) {
    if (!g.edge_alive(e)) continue;
    const int lo = g.layer(g.edge(e).source) + 1, hi = g.layer(g.edge(e).dest) - 1;
    if (lo <= hi) ++L[lo * n + hi];
  }
  if (g.layer(g.root()) > 0) ++L[g.layer(g.root()) - 1];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (st_.reg.count(i, j) != L[i * n + j]) return false;
  if (st_.reg.covered_by_counters() != st_.reg.covered_by_union()) return false;
  return true;
}

}  // namespace mddc
