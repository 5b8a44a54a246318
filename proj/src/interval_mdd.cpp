#include "mddc/interval_mdd.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mddc/build.hpp"

namespace mddc {

IntervalDag compress_to_intervals(const Mdd& plain, const DomainStore& domains) {
  const Mdd g = canonical_copy(plain);
  const int n = g.num_vars();
  IntervalDag dag;
  dag.skeleton = Mdd(n);
  dag.ranges.assign(n, {});
  std::vector<std::map<IndexRange, int>> ids(n);
  for (NodeId u = 0; u < g.node_capacity(); ++u) dag.skeleton.add_node(g.layer(u));
  dag.skeleton.set_root(g.root());
  dag.skeleton.set_terminal(g.terminal());
  for (NodeId u = 0; u < g.node_capacity(); ++u) {
    if (u == g.terminal()) continue;
    const int l = g.layer(u);
    std::vector<std::pair<int, NodeId>> out;
    g.for_each_out(u, [&](EdgeId e) {
      const Edge& ed = g.edge(e);
      if (ed.label == kWildcard || g.layer(ed.dest) != l + 1)
        throw std::invalid_argument("interval compression needs a diagram without long edges or wildcards");
      out.push_back({domains.index_of(l, ed.label), ed.dest});
    });
    std::sort(out.begin(), out.end());
    for (std::size_t k = 0; k < out.size();) {
      std::size_t r = k;
      while (r + 1 < out.size() && out[r + 1].first == out[r].first + 1 && out[r + 1].second == out[k].second) ++r;
      const IndexRange range{out[k].first, out[r].first};
      auto [it, fresh] = ids[l].try_emplace(range, static_cast<int>(dag.ranges[l].size()));
      if (fresh) dag.ranges[l].push_back(range);
      dag.skeleton.add_edge(u, it->second, out[k].second);
      k = r + 1;
    }
  }
  return dag;
}

IntervalDag build_interval_dag(const IntervalTable& table, const DomainStore& domains) {
  const int n = domains.num_vars();
  TupleTable tuples{table.scope, {}};
  std::vector<int> row(n);
  for (const auto& cells : table.rows) {
    if (static_cast<int>(cells.size()) != n) throw std::invalid_argument("row arity does not match scope");
    std::vector<std::vector<int>> choices(n);
    bool empty = false;
    for (int i = 0; i < n; ++i) {
      for (int v : domains.current_values(i))
        if (cells[i].first <= v && v <= cells[i].second) choices[i].push_back(v);
      empty = empty || choices[i].empty();
    }
    if (empty) continue;
    std::vector<int> at(n, 0);
    while (true) {
      for (int i = 0; i < n; ++i) row[i] = choices[i][at[i]];
      tuples.rows.push_back(row);
      int i = n - 1;
      while (i >= 0 && ++at[i] == static_cast<int>(choices[i].size())) at[i--] = 0;
      if (i < 0) break;
    }
  }
  const Mdd full = build_from_tuples(tuples, domains);
  return compress_to_intervals(expand_long_edges(full, domains), domains);
}

Mdd expand_to_mdd(const IntervalDag& dag, const DomainStore& domains) {
  const Mdd& s = dag.skeleton;
  Mdd out(s.num_vars());
  for (NodeId u = 0; u < s.node_capacity(); ++u) out.add_node(s.layer(u));
  out.set_root(s.root());
  out.set_terminal(s.terminal());
  for (EdgeId e = 0; e < s.edge_capacity(); ++e) {
    const Edge& ed = s.edge(e);
    if (!ed.alive) continue;
    const int l = s.layer(ed.source);
    const IndexRange r = dag.ranges[l][ed.label];
    for (int idx = r.lo; idx <= r.hi; ++idx) out.add_edge(ed.source, domains.value_at(l, idx), ed.dest);
  }
  return canonical_copy(out);
}

long long total_range_length(const IntervalDag& dag) {
  long long total = 0;
  for (const auto& layer : dag.ranges)
    for (const IndexRange& r : layer) total += r.length();
  return total;
}

IntervalTree::IntervalTree(const std::vector<IndexRange>& ranges) : ranges_(ranges) {
  std::vector<int> ids(ranges.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  root_ = build(std::move(ids));
}

int IntervalTree::build(std::vector<int> ids) {
  if (ids.empty()) return -1;
  std::vector<int> ends;
  for (int id : ids) {
    ends.push_back(ranges_[id].lo);
    ends.push_back(ranges_[id].hi);
  }
  std::nth_element(ends.begin(), ends.begin() + ends.size() / 2, ends.end());
  const int center = ends[ends.size() / 2];
  std::vector<int> left, right, here;
  for (int id : ids) {
    if (ranges_[id].hi < center)
      left.push_back(id);
    else if (ranges_[id].lo > center)
      right.push_back(id);
    else
      here.push_back(id);
  }
  const int me = static_cast<int>(nodes_.size());
  nodes_.push_back({center, here, here});
  std::sort(nodes_[me].by_lo.begin(), nodes_[me].by_lo.end(),
            [&](int a, int b) { return ranges_[a].lo < ranges_[b].lo; });
  std::sort(nodes_[me].by_hi.begin(), nodes_[me].by_hi.end(),
            [&](int a, int b) { return ranges_[a].hi > ranges_[b].hi; });
  const int l = build(std::move(left));
  const int r = build(std::move(right));
  nodes_[me].left = l;
  nodes_[me].right = r;
  return me;
}

void IntervalTree::stab(int point, std::vector<int>& out) const {
  for (int k = root_; k != -1;) {
    const Node& nd = nodes_[k];
    if (point < nd.center) {
      for (int id : nd.by_lo) {
        if (ranges_[id].lo > point) break;
        out.push_back(id);
      }
      k = nd.left;
    } else if (point > nd.center) {
      for (int id : nd.by_hi) {
        if (ranges_[id].hi < point) break;
        out.push_back(id);
      }
      k = nd.right;
    } else {
      out.insert(out.end(), nd.by_lo.begin(), nd.by_lo.end());
      break;
    }
  }
}

IntervalPropagator::IntervalPropagator(const IntervalDag& dag, const DomainStore& domains, IntervalOptions opts)
    : opts_(opts), ranges_(dag.ranges) {
  const Mdd& s = dag.skeleton;
  const int n = s.num_vars();
  if (domains.num_vars() != n) throw std::invalid_argument("domain count does not match the diagram");
  if (static_cast<int>(ranges_.size()) != n) throw std::invalid_argument("range table does not match the diagram");
  st_.mdd = s;
  st_.dom = domains;
  range_offset_.assign(n + 1, 0);
  value_offset_.assign(n + 1, 0);
  for (int l = 0; l < n; ++l) {
    range_offset_[l + 1] = range_offset_[l] + static_cast<int>(ranges_[l].size());
    value_offset_[l + 1] = value_offset_[l] + domains.original_size(l);
    for (const IndexRange& r : ranges_[l])
      if (r.lo < 0 || r.hi >= domains.original_size(l) || r.lo > r.hi)
        throw std::invalid_argument("range outside the original domain");
    trees_.emplace_back(ranges_[l]);
  }
  range_length_total_ = total_range_length(dag);
  const int R = range_offset_[n], E = s.edge_capacity();
  st_.count.assign(R, 0);
  st_.live.assign(R, 1);
  st_.edge_head.assign(R, kNone);
  st_.edge_prev.assign(E, kNone);
  st_.edge_next.assign(E, kNone);
  st_.cover.assign(value_offset_[n], 0);
  if (opts_.union_backend)
    for (int l = 0; l < n; ++l) st_.unions.emplace_back(domains.original_size(l));
  st_.scalars.assign(1, 0);
  st_.wide.assign(1, 0);

  Mdd& g = st_.mdd;
  for (EdgeId e = E - 1; e >= 0; --e) {
    const Edge& ed = g.edge(e);
    if (!ed.alive) continue;
    const int l = g.layer(ed.source);
    if (g.layer(ed.dest) != l + 1 || ed.label == kWildcard)
      throw std::invalid_argument("interval diagram edges must join adjacent layers");
    if (ed.label < 0 || ed.label >= static_cast<int>(ranges_[l].size()))
      throw std::invalid_argument("edge refers to an unknown range");
    const int r = rid(l, ed.label);
    st_.edge_next[e] = st_.edge_head[r];
    if (st_.edge_head[r] != kNone) st_.edge_prev[st_.edge_head[r]] = e;
    st_.edge_head[r] = e;
  }
  for (int l = 0; l < n; ++l)
    for (int id = 0; id < static_cast<int>(ranges_[l].size()); ++id) {
      const IndexRange rg = ranges_[l][id];
      for (int idx = rg.lo; idx <= rg.hi; ++idx)
        if (domains.contains_index(l, idx)) ++st_.count[rid(l, id)];
      for (int idx = rg.lo; idx <= rg.hi; ++idx) ++st_.cover[vslot(l, idx)];
      if (opts_.union_backend) st_.unions[l].add(rg.lo, rg.hi, trail_);
    }

  out_ = &initial_deltas_;
  for (NodeId u = 0; u < g.node_capacity() && !failed(); ++u) {
    if (!g.alive(u)) continue;
    if (u != g.terminal() && g.node(u).out_degree == 0) {
      if (u == g.root()) fail();
      else work_.push_back({u, true});
    } else if (u != g.root() && g.node(u).in_degree == 0) {
      work_.push_back({u, false});
    }
  }
  drain();
  for (int l = 0; l < n && !failed(); ++l)
    for (int id = 0; id < static_cast<int>(ranges_[l].size()) && !failed(); ++id) {
      const int r = rid(l, id);
      if (st_.live[r] && (st_.count[r] == 0 || st_.edge_head[r] == kNone)) {
        range_dies(l, id);
        drain();
      }
    }
  for (int l = 0; l < n && !failed(); ++l)
    for (int idx : st_.dom.current_index_list(l)) {
      const bool covered = opts_.union_backend ? st_.unions[l].covered(idx) : st_.cover[vslot(l, idx)] > 0;
      if (!covered) lose_value(l, idx);
      if (failed()) break;
    }
  out_ = nullptr;
  st_.wide[0] = 0;
  metrics_ = StepMetrics{};
}

Status IntervalPropagator::remove(const Deltas& requests, Deltas* out) {
  metrics_.begin_step();
  if (failed()) return Status::failed;
  out_ = out;
  DomainStore& d = st_.dom;
  for (const Literal& lit : requests) {
    const int l = lit.var;
    const int idx = d.index_of(l, lit.value);
    if (idx < 0 || !d.contains_index(l, idx)) continue;
    lose_value(l, idx);
    if (failed()) break;
    stabbed_.clear();
    trees_[l].stab(idx, stabbed_);
    for (int id : stabbed_) {
      const int r = rid(l, id);
      if (!st_.live[r]) continue;
      ++metrics_.interval_decrements;
      trail_.assign(st_.wide[0], st_.wide[0] + 1);
      trail_.increment(st_.count[r], -1);
      if (st_.count[r] == 0) {
        range_dies(l, id);
        drain();
      }
      if (failed()) break;
    }
    if (failed()) break;
  }
  metrics_.total_interval_decrements += metrics_.interval_decrements;
  metrics_.total_remove_edge_calls += metrics_.remove_edge_calls;
  out_ = nullptr;
  return failed() ? Status::failed : Status::ok;
}

Status IntervalPropagator::assign(int var, int value, Deltas* out) {
  Deltas r;
  for (int v : st_.dom.current_values(var))
    if (v != value) r.push_back({var, v});
  return remove(r, out);
}

void IntervalPropagator::backtrack() {
  if (trail_.depth() == 0) throw std::logic_error("backtrack without an open checkpoint");
  trail_.backtrack();
  work_.clear();
}

bool IntervalPropagator::entailed() const {
  if (failed()) return false;
  const Mdd& g = st_.mdd;
  if (g.root() == g.terminal()) return true;
  for (int l = 0; l <= g.num_vars(); ++l)
    if (g.live_nodes(l) > 1) return false;
  for (NodeId u = 0; u < g.node_capacity(); ++u) {
    if (!g.alive(u)) continue;
    NodeId child = kNone;
    bool single = true;
    g.for_each_out(u, [&](EdgeId e) {
      if (child != kNone && child != g.edge(e).dest) single = false;
      child = g.edge(e).dest;
    });
    if (!single) return false;
  }
  return true;
}

void IntervalPropagator::fail() {
  trail_.assign(st_.scalars[0], 1);
  work_.clear();
}

void IntervalPropagator::lose_value(int layer, int index) {
  DomainStore& d = st_.dom;
  if (!d.remove_index(layer, index, trail_)) return;
  if (out_) out_->push_back({layer, d.value_at(layer, index)});
  if (d.empty(layer)) fail();
}

void IntervalPropagator::range_dies(int layer, int id) {
  const int r = rid(layer, id);
  if (!st_.live[r]) return;
  trail_.assign(st_.live[r], 0);
  const IndexRange rg = ranges_[layer][id];
  if (opts_.union_backend) {
    scratch_.clear();
    st_.unions[layer].remove(rg.lo, rg.hi, trail_, scratch_);
    const std::vector<int> lost = scratch_;
    for (int idx : lost) {
      lose_value(layer, idx);
      if (failed()) return;
    }
  } else {
    for (int idx = rg.lo; idx <= rg.hi; ++idx) {
      std::int32_t& c = st_.cover[vslot(layer, idx)];
      trail_.increment(c, -1);
      if (c == 0) lose_value(layer, idx);
      if (failed()) return;
    }
  }
  while (!failed() && st_.edge_head[r] != kNone) kill_edge(st_.edge_head[r], false, false);
}

void IntervalPropagator::list_unlink(EdgeId e) {
  const Mdd& g = st_.mdd;
  const int l = g.layer(g.edge(e).source);
  const int r = rid(l, g.edge(e).label);
  const int p = st_.edge_prev[e], nx = st_.edge_next[e];
  if (p != kNone)
    trail_.assign(st_.edge_next[p], nx);
  else
    trail_.assign(st_.edge_head[r], nx);
  if (nx != kNone) trail_.assign(st_.edge_prev[nx], p);
}

void IntervalPropagator::kill_edge(EdgeId e, bool up, bool down) {
  Mdd& g = st_.mdd;
  const Edge ed = g.edge(e);
  if (!ed.alive) return;
  ++metrics_.remove_edge_calls;
  if (up) ++metrics_.edges_died_no_value;
  if (down) ++metrics_.edges_died_no_reference;
  const int l = g.layer(ed.source);
  list_unlink(e);
  g.unlink_edge(e, trail_);
  const int r = rid(l, ed.label);
  if (st_.live[r] && st_.edge_head[r] == kNone) {
    range_dies(l, ed.label);
    if (failed()) return;
  }
  const NodeId u = ed.source, c = ed.dest;
  if (g.node(u).out_degree == 0) {
    if (u == g.root()) return fail();
    if (g.node(u).in_degree == 0)
      g.kill_node(u, trail_);
    else
      work_.push_back({u, true});
  }
  if (g.node(c).in_degree == 0) {
    if (c == g.terminal()) return fail();
    if (g.node(c).out_degree == 0)
      g.kill_node(c, trail_);
    else
      work_.push_back({c, false});
  }
}

void IntervalPropagator::drain() {
  Mdd& g = st_.mdd;
  while (!work_.empty() && !failed()) {
    const Work w = work_.back();
    work_.pop_back();
    if (!g.alive(w.node)) continue;
    if (w.up)
      g.for_each_in(w.node, [&](EdgeId e) {
        if (!failed()) kill_edge(e, true, false);
      });
    else
      g.for_each_out(w.node, [&](EdgeId e) {
        if (!failed()) kill_edge(e, false, true);
      });
  }
}

}  // namespace mddc
