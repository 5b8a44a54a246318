#include "mddc/build.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace mddc {

bool UndirectedGraph::adjacent(int a, int b) const {
  for (auto [x, y] : edges)
    if ((x == a && y == b) || (x == b && y == a)) return true;
  return false;
}

DomainStore uniform_domains(int n, int lo, int hi) {
  std::vector<int> dom;
  for (int v = lo; v <= hi; ++v) dom.push_back(v);
  return DomainStore(std::vector<std::vector<int>>(n, dom));
}

namespace {

// Node-and-edge list assembled bottom-up before being turned into an Mdd.
struct Blueprint {
  struct BNode {
    int layer;
    bool wildcard;
    std::vector<std::pair<int, int>> edges;  // (label, child blueprint id)
  };
  std::vector<BNode> nodes;

  int add(int layer, bool wildcard, std::vector<std::pair<int, int>> edges) {
    nodes.push_back({layer, wildcard, std::move(edges)});
    return static_cast<int>(nodes.size() - 1);
  }

  Mdd to_mdd(int num_vars, int root, int terminal) const {
    Mdd out(num_vars);
    Trail t;
    for (const auto& bn : nodes) {
      const NodeId u = out.add_node(bn.layer);
      if (bn.wildcard) out.set_wildcard(u, true, t);
    }
    for (int u = 0; u < static_cast<int>(nodes.size()); ++u)
      for (auto [label, c] : nodes[u].edges) out.add_edge(u, label, c);
    out.set_root(root);
    out.set_terminal(terminal);
    return canonical_copy(out);
  }
};

enum class Collapse { none, long_edge, wildcard };

bool edge_valid(const Mdd& mdd, const DomainStore& d, EdgeId e) {
  const Edge& ed = mdd.edge(e);
  if (!ed.alive) return false;
  return ed.label == kWildcard || d.contains(mdd.layer(ed.source), ed.label);
}

Mdd reduce_impl(const Mdd& mdd, const DomainStore& domains, Collapse collapse) {
  const int n = mdd.num_vars();
  for (int i = 0; i < n; ++i)
    if (domains.empty(i)) throw EmptyConstraint("empty domain");
  // Top-down reachability over valid edges.
  std::vector<char> reach(mdd.node_capacity(), 0);
  std::vector<std::vector<NodeId>> by_layer(n + 1);
  {
    std::vector<NodeId> stack{mdd.root()};
    reach[mdd.root()] = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      by_layer[mdd.layer(u)].push_back(u);
      mdd.for_each_out(u, [&](EdgeId e) {
        if (!edge_valid(mdd, domains, e)) return;
        const NodeId c = mdd.edge(e).dest;
        if (!reach[c]) {
          reach[c] = 1;
          stack.push_back(c);
        }
      });
    }
  }
  if (!reach[mdd.terminal()]) throw EmptyConstraint("no solution survives");

  Blueprint bp;
  std::vector<int> rep(mdd.node_capacity(), kNone);
  const int terminal = bp.add(n, false, {});
  rep[mdd.terminal()] = terminal;
  std::map<std::tuple<int, bool, std::vector<std::pair<int, int>>>, int> unique;
  for (int layer = n - 1; layer >= 0; --layer) {
    auto& nodes = by_layer[layer];
    std::sort(nodes.begin(), nodes.end());
    for (NodeId u : nodes) {
      std::vector<std::pair<int, int>> kids;
      bool wildcard = mdd.node(u).wildcard != 0;
      mdd.for_each_out(u, [&](EdgeId e) {
        if (!edge_valid(mdd, domains, e)) return;
        const Edge& ed = mdd.edge(e);
        if (rep[ed.dest] == kNone) return;
        if (ed.label == kWildcard) {
          if (collapse == Collapse::none && !wildcard) {
            for (int v : domains.current_values(layer)) kids.push_back({v, rep[ed.dest]});
            return;
          }
        }
        kids.push_back({ed.label, rep[ed.dest]});
      });
      if (kids.empty()) continue;
      std::sort(kids.begin(), kids.end());
      const bool one_child = std::all_of(kids.begin(), kids.end(), [&](auto& k) { return k.second == kids.front().second; });
      const bool covers = wildcard || static_cast<int>(kids.size()) == domains.size(layer);
      if (collapse == Collapse::long_edge && one_child && covers) {
        rep[u] = kids.front().second;
        continue;
      }
      if (collapse == Collapse::wildcard && one_child && covers) {
        wildcard = true;
        kids = {{kWildcard, kids.front().second}};
      }
      auto key = std::make_tuple(layer, wildcard, kids);
      auto it = unique.find(key);
      if (it != unique.end()) {
        rep[u] = it->second;
      } else {
        const int id = bp.add(layer, wildcard, std::move(kids));
        unique.emplace(std::move(key), id);
        rep[u] = id;
      }
    }
  }
  if (rep[mdd.root()] == kNone) throw EmptyConstraint("no solution survives");
  return bp.to_mdd(n, rep[mdd.root()], terminal);
}

}  // namespace

Mdd reduce_static(const Mdd& mdd, const DomainStore& domains, ReduceMode mode) {
  return reduce_impl(mdd, domains, mode == ReduceMode::full ? Collapse::long_edge : Collapse::none);
}

Mdd build_from_tuples(const TupleTable& table, const DomainStore& domains) {
  const int n = static_cast<int>(table.scope.size());
  if (table.rows.empty()) throw EmptyConstraint("tuple table has no rows");
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("row arity does not match scope");
    for (int i = 0; i < n; ++i)
      if (domains.index_of(i, row[i]) < 0)
        throw std::invalid_argument("value " + std::to_string(row[i]) + " outside the domain of column " + std::to_string(i + 1));
  }
  Mdd trie(n);
  if (n == 0) {
    const NodeId t = trie.add_node(0);
    trie.set_root(t);
    trie.set_terminal(t);
    return trie;
  }
  const NodeId root = trie.add_node(0);
  const NodeId terminal = trie.add_node(n);
  trie.set_root(root);
  trie.set_terminal(terminal);
  std::vector<std::map<int, NodeId>> kids(2);
  for (const auto& row : table.rows) {
    NodeId cur = root;
    for (int i = 0; i < n; ++i) {
      auto& m = kids[cur];
      auto it = m.find(row[i]);
      if (it != m.end()) {
        cur = it->second;
        continue;
      }
      NodeId next = terminal;
      if (i + 1 < n) {
        next = trie.add_node(i + 1);
        kids.emplace_back();
      }
      kids[cur][row[i]] = next;
      trie.add_edge(cur, row[i], next);
      cur = next;
    }
  }
  return reduce_static(trie, domains, ReduceMode::full);
}

namespace {

// Destination reached from node u when layer `layer` takes value v, or kNone.
NodeId step(const Mdd& mdd, NodeId u, int layer, int v) {
  if (mdd.layer(u) > layer) return u;
  NodeId out = kNone;
  mdd.for_each_out(u, [&](EdgeId e) {
    const Edge& ed = mdd.edge(e);
    if (ed.label == v || ed.label == kWildcard) out = ed.dest;
  });
  return out;
}

}  // namespace

Mdd conjoin(const Mdd& a, const Mdd& b, const DomainStore& domains) {
  const int n = a.num_vars();
  if (b.num_vars() != n) throw std::invalid_argument("conjoin: variable counts differ");
  Mdd prod(n);
  const NodeId terminal = prod.add_node(n);
  prod.set_terminal(terminal);
  std::map<std::tuple<NodeId, NodeId, int>, NodeId> memo;
  std::vector<std::vector<int>> values(n);
  for (int i = 0; i < n; ++i) values[i] = domains.current_values(i);
  std::function<NodeId(NodeId, NodeId, int)> rec = [&](NodeId pa, NodeId pb, int layer) -> NodeId {
    if (layer == n) return terminal;
    auto key = std::make_tuple(pa, pb, layer);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<std::pair<int, NodeId>> edges;
    for (int v : values[layer]) {
      const NodeId na = step(a, pa, layer, v);
      const NodeId nb = step(b, pb, layer, v);
      if (na == kNone || nb == kNone) continue;
      const NodeId r = rec(na, nb, layer + 1);
      if (r != kNone) edges.push_back({v, r});
    }
    NodeId id = kNone;
    if (!edges.empty()) {
      id = prod.add_node(layer);
      for (auto [v, c] : edges) prod.add_edge(id, v, c);
    }
    memo.emplace(key, id);
    return id;
  };
  const NodeId root = rec(a.root(), b.root(), 0);
  if (root == kNone) throw EmptyConstraint("conjunction is unsatisfiable");
  prod.set_root(root);
  return reduce_static(prod, domains, ReduceMode::full);
}

Mdd expand_long_edges(const Mdd& mdd, const DomainStore& domains) {
  const int n = mdd.num_vars();
  Mdd out(n);
  for (NodeId u = 0; u < mdd.node_capacity(); ++u) out.add_node(mdd.layer(u));
  out.set_terminal(mdd.terminal());
  std::map<std::pair<NodeId, int>, NodeId> pass;
  std::function<NodeId(NodeId, int)> chain = [&](NodeId c, int layer) -> NodeId {
    if (layer == mdd.layer(c)) return c;
    auto key = std::make_pair(c, layer);
    if (auto it = pass.find(key); it != pass.end()) return it->second;
    const NodeId next = chain(c, layer + 1);
    const NodeId p = out.add_node(layer);
    for (int v : domains.current_values(layer)) out.add_edge(p, v, next);
    pass.emplace(key, p);
    return p;
  };
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e) {
    const Edge& ed = mdd.edge(e);
    if (!ed.alive) continue;
    const int sl = mdd.layer(ed.source);
    const NodeId target = chain(ed.dest, sl + 1);
    if (ed.label == kWildcard) {
      for (int v : domains.current_values(sl)) out.add_edge(ed.source, v, target);
    } else {
      out.add_edge(ed.source, ed.label, target);
    }
  }
  out.set_root(chain(mdd.root(), 0));
  // Dead source nodes are simply left unreachable; reduction drops them.
  return reduce_static(out, domains, ReduceMode::uniqueness);
}

Mdd to_wildcard_form(const Mdd& mdd, const DomainStore& domains) {
  return reduce_impl(expand_long_edges(mdd, domains), domains, Collapse::wildcard);
}

Mdd with_edge_mode(const Mdd& mdd, const DomainStore& domains, EdgeMode mode) {
  switch (mode) {
    case EdgeMode::plain:
      return expand_long_edges(mdd, domains);
    case EdgeMode::wildcard:
      return to_wildcard_form(mdd, domains);
    case EdgeMode::long_edges:
      break;
  }
  return reduce_static(mdd, domains, ReduceMode::full);
}

Mdd lift_to_scope(const Mdd& mdd, const std::vector<int>& scope, int num_vars) {
  if (static_cast<int>(scope.size()) != mdd.num_vars()) throw std::invalid_argument("lift: scope arity mismatch");
  for (std::size_t i = 1; i < scope.size(); ++i)
    if (scope[i] <= scope[i - 1]) throw std::invalid_argument("lift: scope must be strictly increasing");
  Mdd out(num_vars);
  Trail t;
  for (NodeId u = 0; u < mdd.node_capacity(); ++u) {
    const int l = mdd.layer(u);
    const NodeId v = out.add_node(l == mdd.num_vars() ? num_vars : scope[l]);
    if (mdd.node(u).wildcard) out.set_wildcard(v, true, t);
  }
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e) {
    const Edge& ed = mdd.edge(e);
    if (ed.alive) out.add_edge(ed.source, ed.label, ed.dest);
  }
  out.set_root(mdd.root());
  out.set_terminal(mdd.terminal());
  return canonical_copy(out);
}

DomainStore n_walk_domains(const UndirectedGraph& g) { return uniform_domains(g.vertex_count, 1, g.vertex_count); }

Mdd n_walk_mdd(const UndirectedGraph& g) {
  const int n = g.vertex_count;
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  std::vector<std::vector<int>> adj(n + 1);
  for (auto [a, b] : g.edges) {
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    if (a < 1 || b < 1 || a > n || b > n) throw std::invalid_argument("vertex out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  Mdd walk(n);
  const NodeId root = walk.add_node(0);
  const NodeId terminal = walk.add_node(n);
  walk.set_root(root);
  walk.set_terminal(terminal);
  // state[i][u]: at step i (layer i) the walk stands on vertex u.
  std::vector<std::vector<NodeId>> state(n, std::vector<NodeId>(n + 1, kNone));
  for (int i = 1; i < n; ++i)
    for (int u = 1; u <= n; ++u) state[i][u] = walk.add_node(i);
  for (int u = 1; u <= n; ++u) walk.add_edge(root, u, n == 1 ? terminal : state[1][u]);
  for (int i = 1; i < n; ++i)
    for (int u = 1; u <= n; ++u)
      for (int w : adj[u]) walk.add_edge(state[i][u], w, i + 1 == n ? terminal : state[i + 1][w]);
  return reduce_static(walk, n_walk_domains(g), ReduceMode::uniqueness);
}

Mdd at_least_once_mdd(int n, int d, int value, bool allow_long_edges) {
  if (n < 1 || d < 1 || value < 1 || value > d) throw std::invalid_argument("at_least_once: bad parameters");
  Mdd out(n);
  std::vector<NodeId> unseen(n), seen(n, kNone);
  for (int i = 0; i < n; ++i) unseen[i] = out.add_node(i);
  const NodeId terminal = out.add_node(n);
  if (!allow_long_edges)
    for (int i = 1; i < n; ++i) seen[i] = out.add_node(i);
  auto next_unseen = [&](int i) { return unseen[i + 1]; };
  auto next_seen = [&](int i) { return i + 1 == n ? terminal : (allow_long_edges ? terminal : seen[i + 1]); };
  for (int i = 0; i < n; ++i) {
    for (int v = 1; v <= d; ++v) {
      if (v == value)
        out.add_edge(unseen[i], v, next_seen(i));
      else if (i + 1 < n)
        out.add_edge(unseen[i], v, next_unseen(i));
    }
    if (!allow_long_edges && i >= 1)
      for (int v = 1; v <= d; ++v) out.add_edge(seen[i], v, next_seen(i));
  }
  out.set_root(unseen[0]);
  out.set_terminal(terminal);
  return canonical_copy(out);
}

Mdd chain_leq_mdd(int j, int k, EdgeMode mode) {
  if (j < 2 || k < 1) throw std::invalid_argument("chain_leq: bad parameters");
  Mdd quasi(j);
  const NodeId root = quasi.add_node(0);
  const NodeId terminal = quasi.add_node(j);
  quasi.set_root(root);
  quasi.set_terminal(terminal);
  for (int v = 1; v <= k; ++v) {
    std::vector<NodeId> chain(j + 1, terminal);
    for (int layer = 1; layer < j; ++layer) chain[layer] = quasi.add_node(layer);
    quasi.add_edge(root, v, chain[1]);
    for (int layer = 1; layer < j; ++layer)
      for (int w = v; w <= k; ++w) quasi.add_edge(chain[layer], w, chain[layer + 1]);
  }
  return with_edge_mode(quasi, uniform_domains(j, 1, k), mode);
}

}  // namespace mddc
