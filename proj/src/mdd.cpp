#include "mddc/mdd.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace mddc {

Mdd::Mdd(int num_vars) : num_vars_(num_vars), live_per_layer_(num_vars + 1, 0) {
  scalars_[kLiveEdges] = 0;
}

NodeId Mdd::add_node(int layer) {
  if (layer < 0 || layer > num_vars_) throw std::out_of_range("node layer out of range");
  Node n;
  n.layer = layer;
  nodes_.push_back(n);
  ++live_per_layer_[layer];
  return static_cast<NodeId>(nodes_.size() - 1);
}

EdgeId Mdd::add_edge(NodeId source, int label, NodeId dest) {
  if (nodes_[source].layer >= nodes_[dest].layer) throw std::invalid_argument("edge must go down the layers");
  const EdgeId e = static_cast<EdgeId>(edges_.size());
  Edge ed;
  ed.source = source;
  ed.dest = dest;
  ed.label = label;
  ed.out_next = nodes_[source].out_head;
  if (ed.out_next != kNone) edges_[ed.out_next].out_prev = e;
  nodes_[source].out_head = e;
  ++nodes_[source].out_degree;
  ed.in_next = nodes_[dest].in_head;
  if (ed.in_next != kNone) edges_[ed.in_next].in_prev = e;
  nodes_[dest].in_head = e;
  ++nodes_[dest].in_degree;
  edges_.push_back(ed);
  ++scalars_[kLiveEdges];
  return e;
}

EdgeKind Mdd::kind(EdgeId e) const {
  const Edge& ed = edges_[e];
  if (ed.label == kWildcard) return EdgeKind::wildcard;
  return nodes_[ed.dest].layer > nodes_[ed.source].layer + 1 ? EdgeKind::long_edge : EdgeKind::plain;
}

int Mdd::live_node_total() const {
  int total = 0;
  for (int c : live_per_layer_) total += c;
  return total;
}

std::vector<EdgeId> Mdd::out_edges(NodeId u) const {
  std::vector<EdgeId> out;
  for_each_out(u, [&](EdgeId e) { out.push_back(e); });
  return out;
}

std::vector<EdgeId> Mdd::in_edges(NodeId u) const {
  std::vector<EdgeId> out;
  for_each_in(u, [&](EdgeId e) { out.push_back(e); });
  return out;
}

void Mdd::unlink_in(EdgeId e, Trail& trail) {
  Edge& ed = edges_[e];
  if (ed.in_prev != kNone)
    trail.assign(edges_[ed.in_prev].in_next, ed.in_next);
  else
    trail.assign(nodes_[ed.dest].in_head, ed.in_next);
  if (ed.in_next != kNone) trail.assign(edges_[ed.in_next].in_prev, ed.in_prev);
  trail.increment(nodes_[ed.dest].in_degree, -1);
}

void Mdd::link_in(EdgeId e, NodeId dest, Trail& trail) {
  Edge& ed = edges_[e];
  const EdgeId head = nodes_[dest].in_head;
  trail.assign(ed.dest, dest);
  trail.assign(ed.in_prev, kNone);
  trail.assign(ed.in_next, head);
  if (head != kNone) trail.assign(edges_[head].in_prev, e);
  trail.assign(nodes_[dest].in_head, e);
  trail.increment(nodes_[dest].in_degree);
}

void Mdd::unlink_edge(EdgeId e, Trail& trail) {
  Edge& ed = edges_[e];
  if (!ed.alive) return;
  if (ed.out_prev != kNone)
    trail.assign(edges_[ed.out_prev].out_next, ed.out_next);
  else
    trail.assign(nodes_[ed.source].out_head, ed.out_next);
  if (ed.out_next != kNone) trail.assign(edges_[ed.out_next].out_prev, ed.out_prev);
  trail.increment(nodes_[ed.source].out_degree, -1);
  unlink_in(e, trail);
  trail.assign(ed.alive, 0);
  trail.increment(scalars_[kLiveEdges], -1);
}

void Mdd::redirect_edge(EdgeId e, NodeId new_dest, Trail& trail) {
  if (edges_[e].dest == new_dest) return;
  unlink_in(e, trail);
  link_in(e, new_dest, trail);
}

void Mdd::relabel_edge(EdgeId e, int label, Trail& trail) { trail.assign(edges_[e].label, label); }

void Mdd::kill_node(NodeId u, Trail& trail) {
  Node& n = nodes_[u];
  if (!n.alive) return;
  trail.assign(n.alive, 0);
  trail.increment(live_per_layer_[n.layer], -1);
}

void Mdd::set_wildcard(NodeId u, bool on, Trail& trail) { trail.assign(nodes_[u].wildcard, on ? 1 : 0); }

bool Mdd::operator==(const Mdd& other) const {
  auto node_eq = [](const Node& a, const Node& b) {
    return a.layer == b.layer && a.alive == b.alive && a.out_head == b.out_head && a.in_head == b.in_head &&
           a.out_degree == b.out_degree && a.in_degree == b.in_degree && a.wildcard == b.wildcard;
  };
  auto edge_eq = [](const Edge& a, const Edge& b) {
    return a.source == b.source && a.dest == b.dest && a.label == b.label && a.alive == b.alive &&
           a.out_prev == b.out_prev && a.out_next == b.out_next && a.in_prev == b.in_prev && a.in_next == b.in_next;
  };
  if (num_vars_ != other.num_vars_ || nodes_.size() != other.nodes_.size() || edges_.size() != other.edges_.size())
    return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!node_eq(nodes_[i], other.nodes_[i])) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (!edge_eq(edges_[i], other.edges_[i])) return false;
  return live_per_layer_ == other.live_per_layer_ && scalars_ == other.scalars_;
}

// ---------------------------------------------------------------------------

ValidationReport validate(const Mdd& mdd) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const int n = mdd.num_vars();
  const NodeId root = mdd.root();
  const NodeId terminal = mdd.terminal();
  if (root == kNone || terminal == kNone) {
    fail("root or terminal not set");
    return report;
  }
  if (!mdd.alive(root)) fail("root " + std::to_string(root) + " is dead");
  if (!mdd.alive(terminal)) fail("terminal " + std::to_string(terminal) + " is dead");
  if (mdd.layer(terminal) != n) fail("terminal " + std::to_string(terminal) + " not on layer n+1");

  int min_layer = n + 1;
  for (NodeId u = 0; u < mdd.node_capacity(); ++u)
    if (mdd.alive(u)) min_layer = std::min(min_layer, mdd.layer(u));
  if (mdd.alive(root) && mdd.layer(root) != min_layer) fail("root " + std::to_string(root) + " not on the minimum layer");

  const LiveCounts recount = recount_live(mdd);
  for (NodeId u = 0; u < mdd.node_capacity(); ++u) {
    const Node& nd = mdd.node(u);
    const std::string id = std::to_string(u);
    if (!nd.alive) {
      if (nd.out_head != kNone || nd.in_head != kNone) fail("dead node " + id + " still has edges");
      continue;
    }
    if (nd.layer == min_layer && u != root) fail("node " + id + " shares the root layer (root not unique)");
    if (nd.layer == n && u != terminal) fail("node " + id + " is a second terminal");
    if (u == terminal && nd.out_degree != 0) fail("terminal has outgoing edges");
    if (u != terminal && nd.out_degree == 0) fail("non-terminal node " + id + " has no outgoing edge");
    std::unordered_set<int> labels;
    int outs = 0;
    mdd.for_each_out(u, [&](EdgeId e) {
      ++outs;
      const Edge& ed = mdd.edge(e);
      if (!ed.alive) fail("dead edge " + std::to_string(e) + " still linked from node " + id);
      if (!labels.insert(ed.label).second) fail("node " + id + " has two outgoing edges labelled " + std::to_string(ed.label));
      if (ed.source != u) fail("edge " + std::to_string(e) + " linked under wrong source");
    });
    int ins = 0;
    mdd.for_each_in(u, [&](EdgeId e) {
      ++ins;
      if (mdd.edge(e).dest != u) fail("edge " + std::to_string(e) + " linked under wrong destination");
    });
    if (outs != nd.out_degree) fail("out degree counter of node " + id + " incoherent");
    if (ins != nd.in_degree) fail("in degree counter of node " + id + " incoherent");
    if (nd.wildcard && (nd.out_degree != 1 || mdd.edge(nd.out_head).label != kWildcard))
      fail("wildcard node " + id + " must have exactly one wildcard edge");
  }
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e) {
    const Edge& ed = mdd.edge(e);
    if (!ed.alive) continue;
    const std::string id = std::to_string(e);
    if (!mdd.alive(ed.source) || !mdd.alive(ed.dest)) fail("live edge " + id + " has a dead endpoint");
    if (mdd.layer(ed.source) >= mdd.layer(ed.dest)) fail("edge " + id + " does not go down the layers");
    if (ed.label == kWildcard && !mdd.node(ed.source).wildcard) fail("wildcard edge " + id + " leaves a plain node");
  }
  for (int l = 0; l <= n; ++l)
    if (recount.nodes_per_layer[l] != mdd.live_nodes(l)) fail("live node counter for layer " + std::to_string(l + 1) + " incoherent");
  if (recount.edges != mdd.live_edges()) fail("live edge counter incoherent");
  return report;
}

std::vector<std::vector<int>> enumerate_solutions(const Mdd& mdd, const DomainStore& domains) {
  std::vector<std::vector<int>> out;
  const int n = mdd.num_vars();
  std::vector<int> values(n);
  std::vector<std::vector<int>> cur(n);
  for (int i = 0; i < n; ++i) cur[i] = domains.current_values(i);
  std::function<void(NodeId, int)> walk = [&](NodeId u, int layer) {
    if (layer == n) {
      if (u == mdd.terminal()) out.push_back(values);
      return;
    }
    if (layer < mdd.layer(u)) {
      for (int v : cur[layer]) {
        values[layer] = v;
        walk(u, layer + 1);
      }
      return;
    }
    mdd.for_each_out(u, [&](EdgeId e) {
      const Edge& ed = mdd.edge(e);
      if (ed.label == kWildcard) {
        for (int v : cur[layer]) {
          values[layer] = v;
          walk(ed.dest, layer + 1);
        }
      } else if (domains.contains(layer, ed.label)) {
        values[layer] = ed.label;
        walk(ed.dest, layer + 1);
      }
    });
  };
  if (mdd.root() != kNone && mdd.alive(mdd.root())) walk(mdd.root(), 0);
  std::sort(out.begin(), out.end());
  return out;
}

int LiveCounts::total_nodes() const {
  int t = 0;
  for (int c : nodes_per_layer) t += c;
  return t;
}

LiveCounts live_counts(const Mdd& mdd) { return {mdd.live_nodes_per_layer(), mdd.live_edges()}; }

LiveCounts recount_live(const Mdd& mdd) {
  LiveCounts c;
  c.nodes_per_layer.assign(mdd.num_vars() + 1, 0);
  for (NodeId u = 0; u < mdd.node_capacity(); ++u)
    if (mdd.alive(u)) ++c.nodes_per_layer[mdd.layer(u)];
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e)
    if (mdd.edge_alive(e)) ++c.edges;
  return c;
}

int count_long_edges(const Mdd& mdd) {
  int c = 0;
  for (EdgeId e = 0; e < mdd.edge_capacity(); ++e)
    if (mdd.edge_alive(e) && mdd.kind(e) == EdgeKind::long_edge) ++c;
  return c;
}

namespace {

std::vector<EdgeId> sorted_out(const Mdd& mdd, NodeId u) {
  std::vector<EdgeId> es = mdd.out_edges(u);
  std::sort(es.begin(), es.end(), [&](EdgeId a, EdgeId b) { return mdd.edge(a).label < mdd.edge(b).label; });
  return es;
}

}  // namespace

Mdd canonical_copy(const Mdd& mdd) {
  Mdd out(mdd.num_vars());
  if (mdd.root() == kNone) return out;
  std::vector<NodeId> order;
  std::vector<NodeId> newid(mdd.node_capacity(), kNone);
  // Iterative preorder DFS; children pushed in reverse so the smallest label
  // is visited first.
  std::vector<NodeId> stack{mdd.root()};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (newid[u] != kNone) continue;
    newid[u] = static_cast<NodeId>(order.size());
    order.push_back(u);
    auto es = sorted_out(mdd, u);
    for (auto it = es.rbegin(); it != es.rend(); ++it) {
      const NodeId c = mdd.edge(*it).dest;
      if (newid[c] == kNone) stack.push_back(c);
    }
  }
  for (NodeId u : order) {
    const NodeId v = out.add_node(mdd.layer(u));
    if (mdd.node(u).wildcard) {
      Trail t;
      out.set_wildcard(v, true, t);
    }
  }
  for (NodeId u : order)
    for (EdgeId e : sorted_out(mdd, u)) out.add_edge(newid[u], mdd.edge(e).label, newid[mdd.edge(e).dest]);
  out.set_root(newid[mdd.root()]);
  if (mdd.terminal() != kNone && newid[mdd.terminal()] != kNone) out.set_terminal(newid[mdd.terminal()]);
  return out;
}

bool isomorphic(const Mdd& a, const Mdd& b) { return to_text(a) == to_text(b); }

void write_mdd(std::ostream& out, const Mdd& mdd) {
  const Mdd c = canonical_copy(mdd);
  out << "mdd " << c.num_vars() << ' ' << c.node_capacity() << ' ' << c.edge_capacity() << '\n';
  for (NodeId u = 0; u < c.node_capacity(); ++u) out << "node " << u << ' ' << c.layer(u) + 1 << '\n';
  for (EdgeId e = 0; e < c.edge_capacity(); ++e) {
    const Edge& ed = c.edge(e);
    out << "edge " << ed.source << ' ';
    if (ed.label == kWildcard)
      out << '*';
    else
      out << ed.label;
    out << ' ' << ed.dest << '\n';
  }
}

std::string to_text(const Mdd& mdd) {
  std::ostringstream os;
  write_mdd(os, mdd);
  return os.str();
}

Mdd read_mdd(std::istream& in) {
  auto bad = [](int line, const std::string& why) {
    throw std::runtime_error("mdd text line " + std::to_string(line) + ": " + why);
  };
  std::string line;
  int lineno = 0;
  int nvars = -1, nnodes = 0, nedges = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw != "mdd" || !(ls >> nvars >> nnodes >> nedges) || nvars < 0 || nnodes < 1 || nedges < 0)
      bad(lineno, "expected header 'mdd <nVars> <nNodes> <nEdges>'");
    break;
  }
  if (nvars < 0) bad(lineno, "missing header");
  Mdd mdd(nvars);
  int nodes_seen = 0, edges_seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "node") {
      int id, layer;
      if (!(ls >> id >> layer)) bad(lineno, "malformed node line");
      if (id != nodes_seen) bad(lineno, "node ids must be consecutive from 0");
      if (edges_seen > 0) bad(lineno, "node lines must precede edge lines");
      if (layer < 1 || layer > nvars + 1) bad(lineno, "node layer out of range");
      mdd.add_node(layer - 1);
      ++nodes_seen;
    } else if (kw == "edge") {
      int src, dst;
      std::string label;
      if (!(ls >> src >> label >> dst)) bad(lineno, "malformed edge line");
      if (src < 0 || src >= nodes_seen || dst < 0 || dst >= nodes_seen) bad(lineno, "edge endpoint out of range");
      if (mdd.layer(src) >= mdd.layer(dst)) bad(lineno, "edge must go down the layers");
      int lab;
      if (label == "*") {
        lab = kWildcard;
        Trail t;
        mdd.set_wildcard(src, true, t);
      } else {
        try {
          lab = std::stoi(label);
        } catch (const std::exception&) {
          bad(lineno, "bad edge label '" + label + "'");
        }
      }
      mdd.add_edge(src, lab, dst);
      ++edges_seen;
    } else {
      bad(lineno, "unknown record '" + kw + "'");
    }
  }
  if (nodes_seen != nnodes || edges_seen != nedges) bad(lineno, "record counts do not match header");
  int min_layer = nvars + 1;
  for (NodeId u = 0; u < nnodes; ++u) min_layer = std::min(min_layer, mdd.layer(u));
  NodeId root = kNone, terminal = kNone;
  for (NodeId u = 0; u < nnodes; ++u) {
    if (mdd.layer(u) == min_layer) {
      if (root != kNone) bad(lineno, "root is not unique");
      root = u;
    }
    if (mdd.layer(u) == nvars) {
      if (terminal != kNone) bad(lineno, "terminal is not unique");
      terminal = u;
    }
  }
  if (terminal == kNone) bad(lineno, "no terminal node");
  mdd.set_root(root);
  mdd.set_terminal(terminal);
  return mdd;
}

Mdd mdd_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_mdd(is);
}

}  // namespace mddc
