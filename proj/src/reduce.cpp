// Dynamic reduction for DynamicPropagator: signatures, subsumption of
// identical nodes and collapse of nodes made redundant by the domains.

#include <stdexcept>

#include "mddc/dynamic_propagator.hpp"

namespace mddc {

std::uint64_t DynamicPropagator::recompute_signature(NodeId u) const {
  const Mdd& g = st_.mdd;
  std::uint64_t s = hash_.layer_term(g.layer(u));
  g.for_each_out(u, [&](EdgeId e) { s ^= hash_.edge(g.edge(e).label, g.edge(e).dest); });
  return s;
}

void DynamicPropagator::init_reduction() {
  Mdd& g = st_.mdd;
  const int n = g.num_vars();
  initial_hash_ops_ = 0;
  for (NodeId u = 0; u < g.node_capacity(); ++u) {
    if (!g.alive(u)) continue;
    std::uint64_t s = hash_.layer_term(g.layer(u));
    std::uint64_t ls = 0;
    ++initial_hash_ops_;
    g.for_each_out(u, [&](EdgeId e) {
      const Edge& ed = g.edge(e);
      s ^= hash_.edge(ed.label, ed.dest);
      ++initial_hash_ops_;
      if (ed.label != kWildcard) ls ^= hash_.domain_term(g.layer(u), ed.label);
    });
    trail_.assign(st_.sig[u], s);
    trail_.assign(st_.labelsig[u], ls);
  }
  for (int l = 0; l < n; ++l) {
    std::uint64_t s = 0;
    for (int v : st_.dom.current_values(l)) s ^= hash_.domain_term(l, v);
    trail_.assign(st_.domsig[l], s);
  }
  reduce_ready_ = true;
  for (NodeId u = 0; u < g.node_capacity(); ++u) {
    if (!g.alive(u) || u == g.terminal()) continue;
    st_.unique.insert(u, st_.sig[u], trail_);
    update_single(u);
    mark_dirty(u);
  }
  process_dirty();
  if (!failed()) flush_uncovered();
}

void DynamicPropagator::mark_dirty(NodeId u) {
  if (!reducing() || in_dirty_[u] || u == st_.mdd.terminal() || !st_.mdd.alive(u)) return;
  in_dirty_[u] = 1;
  dirty_[st_.mdd.layer(u)].push_back(u);
}

void DynamicPropagator::update_single(NodeId u) {
  if (!reducing() || opts_.reduce != ReduceMode::full) return;
  const Mdd& g = st_.mdd;
  const bool want = g.alive(u) && u != g.terminal() && !g.node(u).wildcard && st_.distinct[u] == 1;
  if (!want) {
    st_.single.erase(u, trail_);
  } else if (!st_.single.contains(u) || st_.single.key(u) != st_.labelsig[u]) {
    st_.single.rekey(u, st_.labelsig[u], trail_);
  }
}

void DynamicPropagator::process_dirty() {
  for (int l = st_.mdd.num_vars() - 1; l >= 0; --l) {
    auto& q = dirty_[l];
    while (!q.empty()) {
      const NodeId u = q.back();
      q.pop_back();
      in_dirty_[u] = 0;
      if (st_.mdd.alive(u)) process_node(u);
    }
  }
}

void DynamicPropagator::process_node(NodeId u) {
  Mdd& g = st_.mdd;
  if (u == g.terminal()) return;
  const int l = g.layer(u);
  if (opts_.reduce == ReduceMode::full && !g.node(u).wildcard && st_.distinct[u] == 1 &&
      g.node(u).out_degree == st_.dom.size(l)) {
    if (opts_.collapse_to_wildcard)
      collapse_wildcard(u);
    else
      collapse_long(u);
    return;
  }
  const std::uint64_t key = st_.sig[u];
  if (!st_.unique.contains(u) || st_.unique.key(u) != key) st_.unique.rekey(u, key, trail_);
  NodeId match = kNone;
  st_.unique.for_each_with_key(key, [&](int x) {
    if (match == kNone && x != u && g.alive(x) && g.layer(x) == l && same_children(u, x)) match = x;
  });
  if (match == kNone) return;
  const int du = g.node(u).in_degree, dm = g.node(match).in_degree;
  if (du < dm || (du == dm && u < match))
    merge(u, match);
  else
    merge(match, u);
}

bool DynamicPropagator::same_children(NodeId a, NodeId b) {
  const Mdd& g = st_.mdd;
  if (g.node(a).out_degree != g.node(b).out_degree || g.node(a).wildcard != g.node(b).wildcard) return false;
  const int l = g.layer(a);
  const int wild_slot = st_.dom.max_domain_size();
  auto index = [&](int label) { return label == kWildcard ? wild_slot : label_index(l, label); };
  ++stamp_gen_;
  g.for_each_out(a, [&](EdgeId e) {
    const int k = index(g.edge(e).label);
    stamp_[k] = stamp_gen_;
    stamp_dest_[k] = g.edge(e).dest;
  });
  bool same = true;
  g.for_each_out(b, [&](EdgeId e) {
    const int k = index(g.edge(e).label);
    if (stamp_[k] != stamp_gen_ || stamp_dest_[k] != g.edge(e).dest) same = false;
  });
  return same;
}

void DynamicPropagator::move_edge(EdgeId e, NodeId to) {
  Mdd& g = st_.mdd;
  const Edge& ed = g.edge(e);
  const NodeId p = ed.source;
  trail_.assign(st_.sig[p], st_.sig[p] ^ hash_.edge(ed.label, ed.dest) ^ hash_.edge(ed.label, to));
  g.redirect_edge(e, to, trail_);
  pair_add(p, to, e);
  trail_.increment(st_.moves[e]);
  metrics_.max_edge_moves = std::max(metrics_.max_edge_moves, static_cast<int>(st_.moves[e]));
  update_single(p);
  mark_dirty(p);
}

void DynamicPropagator::drop_edge_quietly(EdgeId e) {
  Mdd& g = st_.mdd;
  const Edge ed = g.edge(e);
  if (!ed.alive) return;
  if (st_.in_sup[e]) support_unlink(e);
  interval_of(e, false);
  pair_remove(ed.source, ed.dest);
  trail_.assign(st_.sig[ed.source], st_.sig[ed.source] ^ hash_.edge(ed.label, ed.dest));
  if (ed.label != kWildcard)
    trail_.assign(st_.labelsig[ed.source],
                  st_.labelsig[ed.source] ^ hash_.domain_term(g.layer(ed.source), ed.label));
  g.unlink_edge(e, trail_);
  if (g.node(ed.dest).in_degree == 0 && ed.dest != g.root())
    throw std::logic_error("reduction orphaned a node");
}

void DynamicPropagator::merge(NodeId subsumee, NodeId subsumer) {
  Mdd& g = st_.mdd;
  ++metrics_.nodes_merged;
  ++metrics_.total_nodes_merged;
  const std::vector<EdgeId> ins = g.in_edges(subsumee);
  // All pairs into the subsumee go first so that each moved edge is free to
  // represent its new pair.
  for (EdgeId e : ins) pair_remove(g.edge(e).source, subsumee);
  for (EdgeId e : ins) move_edge(e, subsumer);
  for (EdgeId f : g.out_edges(subsumee)) drop_edge_quietly(f);
  finalize_node(subsumee);
}

void DynamicPropagator::collapse_long(NodeId u) {
  Mdd& g = st_.mdd;
  ++metrics_.nodes_collapsed;
  const NodeId c = g.edge(g.node(u).out_head).dest;
  const int lu = g.layer(u), lc = g.layer(c);
  const std::vector<EdgeId> ins = g.in_edges(u);
  // New coverage is registered before the old intervals go, so no layer
  // is reported uncovered in between.
  if (u == g.root()) st_.reg.add(0, lc - 1, trail_);
  for (EdgeId e : ins) st_.reg.add(g.layer(g.edge(e).source) + 1, lc - 1, trail_);
  if (u == g.root()) {
    if (lu > 0) st_.reg.remove(0, lu - 1, trail_);
    g.change_root(c, trail_);
  }
  for (EdgeId e : ins) {
    const int lo = g.layer(g.edge(e).source) + 1;
    if (lo <= lu - 1) st_.reg.remove(lo, lu - 1, trail_);
  }
  for (EdgeId e : ins) pair_remove(g.edge(e).source, u);
  // Each moved edge now spans u's layer; its interval was added above.
  for (EdgeId e : ins) move_edge(e, c);
  for (EdgeId f : g.out_edges(u)) drop_edge_quietly(f);
  finalize_node(u);
}

void DynamicPropagator::collapse_wildcard(NodeId u) {
  Mdd& g = st_.mdd;
  ++metrics_.nodes_collapsed;
  const int l = g.layer(u);
  const std::vector<EdgeId> outs = g.out_edges(u);
  const EdgeId keep = outs.front();
  const NodeId c = g.edge(keep).dest;
  std::vector<int> labels;
  for (EdgeId f : outs) labels.push_back(label_index(l, g.edge(f).label));
  for (std::size_t k = 1; k < outs.size(); ++k) drop_edge_quietly(outs[k]);
  const int label = g.edge(keep).label;
  if (st_.in_sup[keep]) support_unlink(keep);
  trail_.assign(st_.sig[u], st_.sig[u] ^ hash_.edge(label, c) ^ hash_.edge(kWildcard, c));
  trail_.assign(st_.labelsig[u], 0);
  g.relabel_edge(keep, kWildcard, trail_);
  g.set_wildcard(u, true, trail_);
  st_.wild.add_node(l, trail_);
  for (int idx : labels) check_support(l, idx);
  update_single(u);
  mark_dirty(u);
}

}  // namespace mddc
