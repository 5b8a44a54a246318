#include "mddc/scan_propagator.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace mddc {

std::uint64_t shape_id(const Mdd& mdd) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(mdd)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t NoGoodStore::fingerprint(std::uint64_t shape, const std::vector<int>& assignment) const {
  std::uint64_t f = hash_.eval(0, shape);
  for (std::size_t i = 0; i < assignment.size(); ++i)
    f ^= hash_.eval(i + 1, static_cast<std::uint64_t>(static_cast<std::uint32_t>(assignment[i])));
  return f;
}

bool NoGoodStore::check(std::uint64_t shape, const std::vector<int>& assignment) const {
  auto it = entries_.find(fingerprint(shape, assignment));
  if (it == entries_.end()) return false;
  for (const auto& [s, a] : it->second)
    if (s == shape && a == assignment) return true;
  return false;
}

void NoGoodStore::record(std::uint64_t shape, const std::vector<int>& assignment) {
  if (check(shape, assignment)) return;
  entries_[fingerprint(shape, assignment)].push_back({shape, assignment});
  ++count_;
}

ScanPropagator::ScanPropagator(const Mdd& mdd, const DomainStore& domains, ScanOptions opts)
    : opts_(opts), original_(mdd) {
  const int n = mdd.num_vars();
  if (domains.num_vars() != n) throw std::invalid_argument("domain count does not match the diagram");
  st_.mdd = mdd;
  st_.dom = domains;
  st_.scalars.assign(1, 0);
  if (opts_.nogoods) shape_ = shape_id(mdd);
  live_.assign(mdd.node_capacity(), 0);
  dead_.assign(mdd.node_capacity(), 0);
  offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + domains.original_size(i);
  found_.assign(offset_[n], 0);
  found_count_.assign(n, 0);
  entry_size_.assign(n, 0);
  full_.assign(n, 0);
  complete_.assign(n, 0);
  reach_.assign(n, -1);
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e) {
    const Edge& ed = mdd.edge(e);
    if (ed.alive && ed.label != kWildcard && domains.index_of(mdd.layer(ed.source), ed.label) < 0)
      throw std::invalid_argument("edge label " + std::to_string(ed.label) + " outside the original domain");
  }
  step({}, &initial_deltas_);
  metrics_ = StepMetrics{};
}

Status ScanPropagator::remove(const Deltas& requests, Deltas* out) { return step(requests, out); }

Status ScanPropagator::assign(int var, int value, Deltas* out) {
  Deltas r;
  for (int v : st_.dom.current_values(var))
    if (v != value) r.push_back({var, v});
  return step(r, out);
}

void ScanPropagator::backtrack() {
  if (trail_.depth() == 0) throw std::logic_error("backtrack without an open checkpoint");
  trail_.backtrack();
}

std::vector<int> ScanPropagator::projection() const {
  std::vector<int> a(st_.dom.num_vars(), kWildcard);
  for (int i = 0; i < st_.dom.num_vars(); ++i)
    if (st_.dom.size(i) == 1) a[i] = st_.dom.value_at(i, st_.dom.current_indices(i)[0]);
  return a;
}

// True when no solution of the original diagram extends the assignment.
bool ScanPropagator::replay_fails(const std::vector<int>& assignment) const {
  const Mdd& g = original_;
  std::vector<char> state(g.node_capacity(), 0);  // 0 unknown, 1 live, 2 dead
  std::function<bool(NodeId)> live = [&](NodeId u) -> bool {
    if (u == g.terminal()) return true;
    if (state[u]) return state[u] == 1;
    const int l = g.layer(u);
    bool ok = false;
    g.for_each_out(u, [&](EdgeId e) {
      if (ok) return;
      const Edge& ed = g.edge(e);
      if (assignment[l] != kWildcard && ed.label != kWildcard && ed.label != assignment[l]) return;
      ok = live(ed.dest);
    });
    state[u] = ok ? 1 : 2;
    return ok;
  };
  return !live(g.root());
}

Status ScanPropagator::step(const Deltas& requests, Deltas* out) {
  metrics_.begin_step();
  if (failed()) return Status::failed;
  DomainStore& d = st_.dom;
  for (const Literal& lit : requests) {
    if (!d.remove_value(lit.var, lit.value, trail_)) continue;
    if (out) out->push_back(lit);
    if (d.empty(lit.var)) {
      fail();
      return Status::failed;
    }
  }
  std::vector<int> sigma;
  const bool nogoods = opts_.nogoods && st_.mdd.num_vars() < opts_.problem_vars;
  if (nogoods) {
    sigma = projection();
    if (opts_.nogoods->check(shape_, sigma)) {
      ++metrics_.nogood_hits;
      fail();
      return Status::failed;
    }
  }
  scan();
  if (!failed()) {
    const int n = st_.mdd.num_vars();
    std::vector<char> covered(n, 0);
    int run = -1;
    for (int l = 0; l < n; ++l) {
      run = std::max(run, reach_[l]);
      covered[l] = run >= l || full_[l] == gen_;
    }
    for (int l = 0; l < n && !failed(); ++l) {
      if (covered[l]) continue;
      for (int idx : d.current_index_list(l)) {
        if (found_[offset_[l] + idx] == gen_) continue;
        d.remove_index(l, idx, trail_);
        if (out) out->push_back({l, d.value_at(l, idx)});
      }
      if (d.empty(l)) fail();
    }
  }
  metrics_.total_edges_traversed_scan += metrics_.edges_traversed_scan;
  if (failed() && nogoods && replay_fails(sigma)) opts_.nogoods->record(shape_, sigma);
  return failed() ? Status::failed : Status::ok;
}

void ScanPropagator::complete(int layer) {
  if (complete_[layer] == gen_) return;
  complete_[layer] = gen_;
  while (delta_ > 0 && complete_[delta_ - 1] == gen_) --delta_;
}

void ScanPropagator::found(int layer, int index) {
  std::uint32_t& f = found_[offset_[layer] + index];
  if (f == gen_) return;
  f = gen_;
  if (++found_count_[layer] == entry_size_[layer]) complete(layer);
}

void ScanPropagator::layer_full(int layer) {
  if (full_[layer] == gen_) return;
  full_[layer] = gen_;
  complete(layer);
}

void ScanPropagator::scan() {
  Mdd& g = st_.mdd;
  const DomainStore& d = st_.dom;
  const int n = g.num_vars();
  ++gen_;
  for (int l = 0; l < n; ++l) {
    found_count_[l] = 0;
    entry_size_[l] = d.size(l);
    reach_[l] = -1;
  }
  delta_ = n;
  for (int l = 0; l < g.layer(g.root()); ++l) layer_full(l);
  if (g.root() == g.terminal()) return;

  struct Frame {
    NodeId u;
    EdgeId e;
    bool live;
  };
  std::vector<Frame> stack{{g.root(), g.node(g.root()).out_head, false}};

  // Outcome of the edge under the cursor of f, whose child has been decided.
  auto settle = [&](Frame& f, bool child_live) {
    const EdgeId e = f.e;
    const Edge& ed = g.edge(e);
    f.e = ed.out_next;
    const int l = g.layer(f.u);
    if (child_live) {
      f.live = true;
      if (ed.label == kWildcard)
        layer_full(l);
      else
        found(l, d.index_of(l, ed.label));
      const int lc = g.layer(ed.dest);
      if (lc > l + 1) {
        if (opts_.delta_cutoff) {
          for (int j = l + 1; j < lc; ++j) layer_full(j);
        } else {
          reach_[l + 1] = std::max(reach_[l + 1], lc - 1);
        }
      }
      if (opts_.delta_cutoff && l >= delta_) f.e = kNone;
    } else {
      ++metrics_.edges_died_no_value;
      g.unlink_edge(e, trail_);
    }
  };

  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.e == kNone) {
      const NodeId u = f.u;
      const bool live = f.live;
      if (live) {
        live_[u] = gen_;
      } else {
        dead_[u] = gen_;
        g.kill_node(u, trail_);
      }
      stack.pop_back();
      if (stack.empty()) {
        if (!live) fail();
        break;
      }
      settle(stack.back(), live);
      continue;
    }
    const Edge& ed = g.edge(f.e);
    const int l = g.layer(f.u);
    if (ed.label != kWildcard && !d.contains(l, ed.label)) {
      const EdgeId e = f.e;
      f.e = ed.out_next;
      g.unlink_edge(e, trail_);
      continue;
    }
    ++metrics_.edges_traversed_scan;
    const NodeId c = ed.dest;
    if (c == g.terminal() || live_[c] == gen_) {
      settle(f, true);
    } else if (dead_[c] == gen_) {
      settle(f, false);
    } else {
      stack.push_back({c, g.node(c).out_head, false});
    }
  }
}

bool ScanPropagator::entailed() const {
  if (failed()) return false;
  const Mdd& g = st_.mdd;
  if (g.root() == g.terminal()) return true;
  std::vector<int> per_layer(g.num_vars() + 1, 0);
  std::vector<char> seen(g.node_capacity(), 0);
  std::vector<NodeId> stack{g.root()};
  seen[g.root()] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (++per_layer[g.layer(u)] > 1) return false;
    NodeId child = kNone;
    bool single = true;
    g.for_each_out(u, [&](EdgeId e) {
      const Edge& ed = g.edge(e);
      if (ed.label != kWildcard && !st_.dom.contains(g.layer(u), ed.label)) return;
      if (child != kNone && child != ed.dest) single = false;
      child = ed.dest;
      if (!seen[ed.dest]) {
        seen[ed.dest] = 1;
        stack.push_back(ed.dest);
      }
    });
    if (!single) return false;
  }
  return true;
}

}  // namespace mddc
