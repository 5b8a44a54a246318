// Acceptance suite: one PASS/FAIL line per criterion. Parameters and
// tolerances are fixed below; the process exits non-zero if any line fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mddc/build.hpp"
#include "mddc/dynamic_propagator.hpp"
#include "mddc/interval_mdd.hpp"
#include "mddc/scan_propagator.hpp"
#include "mddc/search.hpp"

using namespace mddc;
using namespace testing_support;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kGacInstances = 1200;
constexpr int kMaxVars = 6, kMaxDomain = 4, kMaxRows = 50, kMaxSequence = 20;
constexpr int kAgreementInstances = 600, kIntervalInstances = 300;
constexpr int kScanBoundMinSteps = 100;
constexpr int kCanonRowSets = 50, kPermutations = 20;
constexpr int kReductionInstances = 400;
constexpr int kHashSeeds = 100000, kHashBits = 8;
constexpr double kCollisionFactor = 4.0;
constexpr int kRoundTripTrials = 1000;
constexpr double kSuiteSeconds = 300.0, kDescentSeconds = 10.0;
constexpr int kBigEdges = 100000, kBigPhases = 50;

struct Result {
  bool pass = true;
  std::string detail;
};

struct Instance {
  int n = 0, d = 0;
  std::vector<std::vector<int>> rows;
  DomainStore dom;
  Mdd mdd;
};

Instance random_instance(std::mt19937_64& rng, int min_vars = 1) {
  Instance in;
  in.n = min_vars + static_cast<int>(rng() % (kMaxVars - min_vars + 1));
  in.d = 1 + static_cast<int>(rng() % kMaxDomain);
  in.rows = oracle::random_table(rng, in.n, in.d, 1 + static_cast<int>(rng() % kMaxRows));
  in.dom = uniform_domains(in.n, 1, in.d);
  std::vector<int> scope(in.n);
  for (int i = 0; i < in.n; ++i) scope[i] = i;
  in.mdd = build_from_tuples({scope, in.rows}, in.dom);
  return in;
}

bool has_empty(const oracle::Domains& d) {
  for (const auto& s : d)
    if (s.empty()) return true;
  return false;
}

int ceil_lg(int v) { return v <= 1 ? 0 : std::bit_width(static_cast<unsigned>(v - 1)); }

Deltas sorted(Deltas d) {
  std::sort(d.begin(), d.end());
  return d;
}

// One random operation of a Remove/Assign/Backtrack sequence.
struct Op {
  enum { remove, assign, backtrack } kind;
  int var = 0, value = 0;
};

Op random_op(std::mt19937_64& rng, const DomainStore& dom, int depth) {
  const int r = static_cast<int>(rng() % 3);
  if (r == 2 && depth > 0) return {Op::backtrack};
  const int var = static_cast<int>(rng() % dom.num_vars());
  const auto vals = dom.current_values(var);
  return {r == 1 ? Op::assign : Op::remove, var, vals[rng() % vals.size()]};
}

// Criteria 1, 3, 5 and 8 share this corpus.
struct GacFindings {
  Result c1, c3, c5, c8;
  long steps = 0, descents_checked = 0, entail_checks = 0;
  int max_moves = 0;
};

GacFindings run_gac_corpus() {
  GacFindings f;
  std::mt19937_64 rng(1001);
  for (int it = 0; it < kGacInstances; ++it) {
    const Instance in = random_instance(rng);
    // Long edges unreduced, full reduction, expanded with uniqueness.
    std::vector<std::unique_ptr<DynamicPropagator>> ps;
    ps.push_back(std::make_unique<DynamicPropagator>(in.mdd, in.dom));
    DynamicOptions full;
    full.reduce = ReduceMode::full;
    ps.push_back(std::make_unique<DynamicPropagator>(in.mdd, in.dom, full));
    DynamicOptions uniq;
    uniq.reduce = ReduceMode::uniqueness;
    const Mdd expanded = expand_long_edges(in.mdd, in.dom);
    ps.push_back(std::make_unique<DynamicPropagator>(expanded, in.dom, uniq));
    const int lg[] = {0, ceil_lg(in.mdd.live_node_total()), ceil_lg(expanded.live_node_total())};
    oracle::Domains cur = to_sets(in.dom);
    std::vector<oracle::Domains> saved;
    const int len = 1 + static_cast<int>(rng() % kMaxSequence);
    for (int s = 0; s < len; ++s) {
      const Op op = random_op(rng, ps[0]->domains(), static_cast<int>(saved.size()));
      if (op.kind == Op::backtrack) {
        for (auto& p : ps) p->backtrack();
        cur = saved.back();
        saved.pop_back();
        continue;
      }
      saved.push_back(cur);
      oracle::Domains next = cur;
      if (op.kind == Op::remove)
        next[op.var].erase(op.value);
      else
        next[op.var] = {op.value};
      const auto vd = oracle::valid_domains(in.rows, next);
      const bool expect_fail = has_empty(vd);
      for (std::size_t k = 0; k < ps.size(); ++k) {
        DynamicPropagator& p = *ps[k];
        p.checkpoint();
        const Status st = op.kind == Op::remove ? p.remove({{op.var, op.value}}) : p.assign(op.var, op.value);
        ++f.steps;
        if ((st == Status::failed) != expect_fail || (!expect_fail && to_sets(p.domains()) != vd)) {
          if (f.c1.pass) f.c1.detail = "instance " + std::to_string(it) + " step " + std::to_string(s);
          f.c1.pass = false;
        }
        ++f.descents_checked;
        if (p.descent_remove_calls() > static_cast<std::uint64_t>(p.initial_edges())) {
          if (f.c3.pass) f.c3.detail = "instance " + std::to_string(it);
          f.c3.pass = false;
        }
        if (k > 0) {
          f.max_moves = std::max(f.max_moves, p.metrics().max_edge_moves);
          if (p.metrics().max_edge_moves > lg[k]) {
            if (f.c5.pass) f.c5.detail = "instance " + std::to_string(it);
            f.c5.pass = false;
          }
        }
        if (!expect_fail) {
          ++f.entail_checks;
          const bool truth = oracle::entailed(in.rows, vd);
          // Exact under full reduction; sound for the others.
          const bool ok = k == 1 ? p.entailed() == truth : (!p.entailed() || truth);
          if (!ok) {
            if (f.c8.pass) f.c8.detail = "instance " + std::to_string(it) + " config " + std::to_string(k);
            f.c8.pass = false;
          }
        }
      }
      if (expect_fail) {
        for (auto& p : ps) p->backtrack();
        cur = saved.back();
        saved.pop_back();
      } else {
        cur = vd;
      }
    }
  }
  return f;
}

// Criteria 2 and 4.
struct AgreementFindings {
  Result c2, c4;
  long steps = 0, scan_steps = 0;
};

void check_scan_bound(const ScanPropagator& p, AgreementFindings& f) {
  ++f.scan_steps;
  const StepMetrics& m = p.metrics();
  const auto live = static_cast<std::uint64_t>(recount_live(p.mdd()).edges);
  if (!p.failed() && m.edges_traversed_scan > live + m.edges_died_no_value) {
    if (f.c4.pass)
      f.c4.detail = "traversed " + std::to_string(m.edges_traversed_scan) + " > " + std::to_string(live) + " + " +
                    std::to_string(m.edges_died_no_value);
    f.c4.pass = false;
  }
}

void agreement_run(std::mt19937_64& rng, const Mdd& plain_or_long, const IntervalDag& dag, const DomainStore& dom,
                   AgreementFindings& f, const std::string& tag) {
  DynamicPropagator dyn(plain_or_long, dom);
  ScanPropagator scan(plain_or_long, dom);
  ScanOptions cut;
  cut.delta_cutoff = true;
  ScanPropagator scan_cut(plain_or_long, dom, cut);
  IntervalPropagator itv(dag, dom);
  auto mismatch = [&](const std::string& what) {
    if (f.c2.pass) f.c2.detail = tag + ": " + what;
    f.c2.pass = false;
  };
  if (sorted(dyn.initial_deltas()) != sorted(scan.initial_deltas()) ||
      sorted(dyn.initial_deltas()) != sorted(scan_cut.initial_deltas()) ||
      sorted(dyn.initial_deltas()) != sorted(itv.initial_deltas()))
    mismatch("initial deltas");
  int depth = 0;
  const int len = 1 + static_cast<int>(rng() % kMaxSequence);
  for (int s = 0; s < len; ++s) {
    const Op op = random_op(rng, dyn.domains(), depth);
    if (op.kind == Op::backtrack) {
      dyn.backtrack();
      scan.backtrack();
      scan_cut.backtrack();
      itv.backtrack();
      --depth;
      continue;
    }
    dyn.checkpoint();
    scan.checkpoint();
    scan_cut.checkpoint();
    itv.checkpoint();
    ++depth;
    Deltas a, b, c, e;
    const bool rm = op.kind == Op::remove;
    const Status sa = rm ? dyn.remove({{op.var, op.value}}, &a) : dyn.assign(op.var, op.value, &a);
    const Status sb = rm ? scan.remove({{op.var, op.value}}, &b) : scan.assign(op.var, op.value, &b);
    const Status sc = rm ? scan_cut.remove({{op.var, op.value}}, &c) : scan_cut.assign(op.var, op.value, &c);
    const Status se = rm ? itv.remove({{op.var, op.value}}, &e) : itv.assign(op.var, op.value, &e);
    ++f.steps;
    check_scan_bound(scan, f);
    check_scan_bound(scan_cut, f);
    if (sa != sb || sa != sc || sa != se) mismatch("status at step " + std::to_string(s));
    if (sa == Status::ok && (sorted(a) != sorted(b) || sorted(a) != sorted(c) || sorted(a) != sorted(e)))
      mismatch("deltas at step " + std::to_string(s));
    if (sa == Status::failed || sb == Status::failed) {
      dyn.backtrack();
      scan.backtrack();
      scan_cut.backtrack();
      itv.backtrack();
      --depth;
    }
  }
}

AgreementFindings run_agreement() {
  AgreementFindings f;
  std::mt19937_64 rng(2002);
  for (int it = 0; it < kAgreementInstances; ++it) {
    const Instance in = random_instance(rng);
    const IntervalDag dag = compress_to_intervals(expand_long_edges(in.mdd, in.dom), in.dom);
    agreement_run(rng, in.mdd, dag, in.dom, f, "table " + std::to_string(it));
  }
  for (int it = 0; it < kIntervalInstances; ++it) {
    const int n = 1 + static_cast<int>(rng() % kMaxVars), d = 1 + static_cast<int>(rng() % kMaxDomain);
    IntervalTable t;
    for (int i = 0; i < n; ++i) t.scope.push_back(i);
    const int rows = 1 + static_cast<int>(rng() % 8);
    for (int r = 0; r < rows; ++r) {
      std::vector<std::pair<int, int>> row;
      for (int i = 0; i < n; ++i) {
        int a = 1 + static_cast<int>(rng() % d), b = 1 + static_cast<int>(rng() % d);
        row.push_back({std::min(a, b), std::max(a, b)});
      }
      t.rows.push_back(row);
    }
    const DomainStore dom = uniform_domains(n, 1, d);
    const IntervalDag dag = build_interval_dag(t, dom);
    agreement_run(rng, expand_to_mdd(dag, dom), dag, dom, f, "interval " + std::to_string(it));
  }
  if (f.scan_steps < kScanBoundMinSteps) {
    f.c4.pass = false;
    f.c4.detail = "too few steps";
  }
  return f;
}

Result criterion6() {
  Result r;
  std::mt19937_64 rng(6006);
  int compared = 0;
  for (int it = 0; it < kCanonRowSets; ++it) {
    const Instance in = random_instance(rng);
    std::vector<int> scope(in.n);
    for (int i = 0; i < in.n; ++i) scope[i] = i;
    std::vector<Mdd> built;
    auto rows = in.rows;
    for (int p = 0; p < kPermutations; ++p) {
      std::shuffle(rows.begin(), rows.end(), rng);
      built.push_back(build_from_tuples({scope, rows}, in.dom));
    }
    for (int a = 0; a < kPermutations; ++a)
      for (int b = a + 1; b < kPermutations; ++b) {
        ++compared;
        if (!isomorphic(built[a], built[b])) {
          r.pass = false;
          r.detail = "row set " + std::to_string(it);
        }
      }
  }
  const LiveCounts small = live_counts(pairs_reduced());
  if (small.total_nodes() != 4 || small.edges != 6) {
    r.pass = false;
    r.detail = "pairs has " + std::to_string(small.total_nodes()) + " nodes, " + std::to_string(small.edges) + " edges";
  }
  if (r.pass)
    r.detail = std::to_string(compared) + " pairs isomorphic; pairs nodes=" + std::to_string(small.total_nodes()) +
               " edges=" + std::to_string(small.edges);
  return r;
}

// Criteria 7, 5 (reduction runs) and 11 (incrementality).
struct ReductionFindings {
  Result c7, c5, c11;
  long steps = 0, signature_checks = 0;
  int max_moves = 0;
};

ReductionFindings run_reduction() {
  ReductionFindings f;
  std::mt19937_64 rng(7007);
  auto flag = [](Result& r, const std::string& why) {
    if (r.pass) r.detail = why;
    r.pass = false;
  };
  for (int it = 0; it < kReductionInstances; ++it) {
    const Instance in = random_instance(rng, 2);
    const Mdd input = it % 2 == 0 ? expand_long_edges(in.mdd, in.dom) : in.mdd;
    const ReduceMode mode = it % 3 == 0 ? ReduceMode::uniqueness : ReduceMode::full;
    DynamicOptions o;
    o.reduce = mode;
    DynamicPropagator red(input, in.dom, o);
    DynamicPropagator raw(input, in.dom);
    const int lg = ceil_lg(input.live_node_total());
    auto check = [&](const std::string& where) {
      if (!isomorphic(red.mdd(), reduce_static(raw.mdd(), raw.domains(), mode))) flag(f.c7, where);
      const Mdd& g = red.mdd();
      for (NodeId u = 0; u < g.node_capacity(); ++u) {
        if (!g.alive(u)) continue;
        ++f.signature_checks;
        if (red.signature(u) != red.recompute_signature(u)) flag(f.c11, where);
      }
      if (!red.bookkeeping_consistent()) flag(f.c11, where + " bookkeeping");
      f.max_moves = std::max(f.max_moves, red.metrics().max_edge_moves);
      if (red.metrics().max_edge_moves > lg) flag(f.c5, where);
    };
    check("instance " + std::to_string(it) + " initial");
    for (int s = 0; s < 8; ++s) {
      const int var = static_cast<int>(rng() % in.n);
      const auto vals = raw.domains().current_values(var);
      if (vals.size() <= 1) continue;
      const int value = vals[rng() % vals.size()];
      red.checkpoint();
      raw.checkpoint();
      const Status a = red.remove({{var, value}}), b = raw.remove({{var, value}});
      if (a != b) flag(f.c7, "status differs");
      if (a == Status::failed) break;
      ++f.steps;
      check("instance " + std::to_string(it) + " step " + std::to_string(s));
    }
    while (red.depth() > 0) {
      red.backtrack();
      raw.backtrack();
    }
    check("instance " + std::to_string(it) + " after backtrack");
  }
  // Chain fixture x1 <= x2, x1 <= x3, x1 <= x4 over {1,2,3}.
  const DomainStore dom = uniform_domains(4, 1, 3);
  DynamicOptions o;
  o.reduce = ReduceMode::uniqueness;
  DynamicPropagator p(chain_leq_mdd(4, 3, EdgeMode::plain), dom, o);
  auto chain = [](const Mdd& g) { return g.live_nodes(1) + g.live_nodes(2) + g.live_nodes(3); };
  const int before = chain(p.mdd());
  p.remove({{1, 1}, {2, 1}, {3, 1}});
  const int after = chain(p.mdd());
  const auto merged = p.metrics().nodes_merged;
  if (before != 9 || after != 6 || merged < 3) flag(f.c7, "chain fixture");
  if (f.c7.pass)
    f.c7.detail = std::to_string(f.steps) + " steps isomorphic; chain " + std::to_string(before) + "->" +
                  std::to_string(after) + " with " + std::to_string(merged) + " merges";
  return f;
}

Result criterion9() {
  Result r;
  std::ostringstream log;
  const UndirectedGraph c4{4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}};
  const int c4_nodes = n_walk_mdd(c4).live_node_total();
  auto hamiltonian = [](const UndirectedGraph& g) {
    std::vector<int> perm(g.vertex_count);
    for (int i = 0; i < g.vertex_count; ++i) perm[i] = i + 1;
    std::uint64_t count = 0;
    do {
      bool ok = true;
      for (int i = 0; ok && i + 1 < g.vertex_count; ++i) ok = g.adjacent(perm[i], perm[i + 1]);
      count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
  };
  auto solve = [](const UndirectedGraph& g, std::uint64_t& count, int& nodes) {
    const DomainStore dom = n_walk_domains(g);
    std::vector<int> all(g.vertex_count);
    for (int i = 0; i < g.vertex_count; ++i) all[i] = i;
    Mdd walk;
    try {
      walk = n_walk_mdd(g);
    } catch (const EmptyConstraint&) {
      count = 0;
      nodes = 0;
      return;
    }
    nodes = walk.live_node_total();
    Search s(dom);
    s.add(make_mdd_constraint(walk, all, dom, {}));
    s.add(make_alldifferent(all, dom));
    count = s.solve(SolveMode::count).count;
  };
  std::uint64_t c4_count = 0;
  int nodes = 0;
  solve(c4, c4_count, nodes);
  if (c4_nodes > 4 * 4 + 2 || c4_count != 8) r.pass = false;
  log << "C4 nodes=" << c4_nodes << " paths=" << c4_count;
  std::mt19937_64 rng(9009);
  int graphs = 0;
  for (int it = 0; it < 40; ++it) {
    UndirectedGraph g;
    g.vertex_count = 1 + static_cast<int>(rng() % 8);
    for (int a = 1; a <= g.vertex_count; ++a)
      for (int b = a + 1; b <= g.vertex_count; ++b)
        if (rng() % 2) g.edges.push_back({a, b});
    std::uint64_t got = 0;
    solve(g, got, nodes);
    const std::uint64_t want = hamiltonian(g);
    ++graphs;
    if (got != want || nodes > g.vertex_count * g.vertex_count + 2) {
      r.pass = false;
      log << "; graph " << it << " got " << got << " want " << want;
    }
  }
  log << "; " << graphs << " random graphs";
  r.detail = log.str();
  return r;
}

Result criterion10() {
  Result r;
  std::ostringstream log;
  for (int n : {4, 8, 16, 32}) {
    const Mdd a = at_least_once_mdd(n, 2, 1, true), b = at_least_once_mdd(n, 2, 1, false);
    const int an = a.live_node_total(), ae = a.live_edges(), bn = b.live_node_total(), be = b.live_edges();
    log << "n=" << n << " long " << an << "/" << ae << " plain " << bn << "/" << be << "; ";
    if (!(an < bn && ae < be)) r.pass = false;
  }
  r.detail = log.str() + "(nodes/edges)";
  return r;
}

// Two same-layer nodes with different child sets; counts how often their
// maintained signatures coincide across seeds.
Result criterion11_quality() {
  Result r;
  std::mt19937_64 rng(1111);
  const DomainStore dom = uniform_domains(3, 1, 4);
  long collisions = 0;
  for (int s = 0; s < kHashSeeds; ++s) {
    Mdd m(3);
    const NodeId root = m.add_node(0), a = m.add_node(1), b = m.add_node(1);
    std::vector<NodeId> c;
    for (int k = 0; k < 3; ++k) c.push_back(m.add_node(2));
    const NodeId t = m.add_node(3);
    m.set_root(root);
    m.set_terminal(t);
    for (int k = 0; k < 3; ++k)
      for (int v = 1; v <= k + 1; ++v) m.add_edge(c[k], v, t);
    m.add_edge(root, 1, a);
    m.add_edge(root, 2, b);
    std::set<std::pair<int, int>> ea, eb;
    while (ea == eb) {
      ea.clear();
      eb.clear();
      for (int v = 1; v <= 4; ++v) {
        if (rng() % 2) ea.insert({v, static_cast<int>(rng() % 3)});
        if (rng() % 2) eb.insert({v, static_cast<int>(rng() % 3)});
      }
      if (ea.empty()) ea.insert({1, 0});
      if (eb.empty()) eb.insert({2, 1});
    }
    for (auto [v, k] : ea) m.add_edge(a, v, c[k]);
    for (auto [v, k] : eb) m.add_edge(b, v, c[k]);
    DynamicOptions o;
    o.seed = static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ULL + 17;
    o.signature_bits = kHashBits;
    o.reduce = ReduceMode::uniqueness;
    DynamicPropagator p(m, dom, o);
    if (!p.mdd().alive(a) || !p.mdd().alive(b)) continue;
    collisions += p.signature(a) == p.signature(b);
  }
  const double rate = static_cast<double>(collisions) / kHashSeeds;
  const double bound = kCollisionFactor / static_cast<double>(1u << kHashBits);
  r.pass = rate <= bound;
  std::ostringstream log;
  log << "collision rate " << rate << " <= " << bound << " at " << kHashBits << " bits over " << kHashSeeds
      << " seeds";
  r.detail = log.str();
  return r;
}

Result criterion12() {
  Result r;
  std::mt19937_64 rng(1212);
  int restored = 0;
  for (int t = 0; t < kRoundTripTrials; ++t) {
    const Instance in = random_instance(rng);
    const int kind = t % 6;
    auto phase = [&](auto& p) {
      // A committed prefix, then the phase under test.
      for (int w = 0; w < 2; ++w) {
        const int var = static_cast<int>(rng() % in.n);
        const auto vals = p.domains().current_values(var);
        if (vals.size() > 1) {
          p.checkpoint();
          if (p.remove({{var, vals[rng() % vals.size()]}}) == Status::failed) p.backtrack();
        }
      }
      const auto before = p.state();
      p.checkpoint();
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < k && !p.failed(); ++j) {
        const int var = static_cast<int>(rng() % in.n);
        const auto vals = p.domains().current_values(var);
        if (rng() % 2)
          p.assign(var, vals[rng() % vals.size()]);
        else
          p.remove({{var, vals[rng() % vals.size()]}});
      }
      p.backtrack();
      return p.state() == before;
    };
    bool ok = false;
    if (kind <= 2) {
      DynamicOptions o;
      if (kind == 1) o.reduce = ReduceMode::full;
      if (kind == 2) {
        o.reduce = ReduceMode::full;
        o.collapse_to_wildcard = true;
      }
      DynamicPropagator p(kind == 2 ? to_wildcard_form(in.mdd, in.dom) : in.mdd, in.dom, o);
      ok = phase(p);
    } else if (kind <= 4) {
      ScanOptions o;
      o.delta_cutoff = kind == 4;
      ScanPropagator p(in.mdd, in.dom, o);
      ok = phase(p);
    } else {
      IntervalPropagator p(compress_to_intervals(expand_long_edges(in.mdd, in.dom), in.dom), in.dom);
      ok = phase(p);
    }
    restored += ok;
    if (!ok && r.pass) {
      r.pass = false;
      r.detail = "trial " + std::to_string(t) + " ";
    }
  }
  r.detail += std::to_string(restored) + "/" + std::to_string(kRoundTripTrials) + " restored";
  return r;
}

// Layered random diagram: every node gets one edge per value to a random
// node of the next layer.
Mdd big_random_mdd(std::mt19937_64& rng, int layers, int width, int d) {
  Mdd m(layers);
  std::vector<std::vector<NodeId>> at(layers + 1);
  at[0].push_back(m.add_node(0));
  for (int l = 1; l < layers; ++l)
    for (int k = 0; k < width; ++k) at[l].push_back(m.add_node(l));
  at[layers].push_back(m.add_node(layers));
  m.set_root(at[0][0]);
  m.set_terminal(at[layers][0]);
  for (int l = 0; l < layers; ++l)
    for (NodeId u : at[l])
      for (int v = 1; v <= d; ++v) m.add_edge(u, v, at[l + 1][rng() % at[l + 1].size()]);
  return m;
}

Result criterion13_descent(double& seconds, int& edges) {
  Result r;
  std::mt19937_64 rng(1313);
  const auto start = Clock::now();
  const int layers = 52, d = 10;
  const int width = kBigEdges / ((layers - 1) * d) + 1;
  const Mdd m = big_random_mdd(rng, layers, width, d);
  edges = m.live_edges();
  const DomainStore dom = uniform_domains(layers, 1, d);
  DynamicOptions o;
  o.reduce = ReduceMode::full;
  DynamicPropagator p(m, dom, o);
  int phases = 0, var = 0;
  while (phases < kBigPhases && var < layers && !p.failed()) {
    const auto vals = p.domains().current_values(var);
    p.checkpoint();
    ++phases;
    if (p.assign(var, vals[rng() % vals.size()]) == Status::failed) {
      p.backtrack();
      continue;
    }
    ++var;
  }
  seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.pass = edges >= kBigEdges && phases == kBigPhases && seconds < kDescentSeconds;
  std::ostringstream log;
  log << edges << " edges, " << phases << " phases in " << seconds << " s (limit " << kDescentSeconds << " s)";
  r.detail = log.str();
  return r;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  std::vector<std::pair<std::string, Result>> lines(13);
  auto report = [&](int k, const std::string& name, const Result& r) {
    lines[k - 1] = {name, r};
    std::printf("criterion %2d %s: %s (%s)\n", k, r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  };

  GacFindings gac = run_gac_corpus();
  if (gac.c1.pass) gac.c1.detail = std::to_string(kGacInstances) + " instances, " + std::to_string(gac.steps) + " steps";
  report(1, "oracle GAC equivalence", gac.c1);

  AgreementFindings agr = run_agreement();
  if (agr.c2.pass) agr.c2.detail = std::to_string(agr.steps) + " steps over 4 propagators";
  report(2, "scan/dynamic/interval agreement", agr.c2);

  if (gac.c3.pass) gac.c3.detail = std::to_string(gac.descents_checked) + " descent checks";
  report(3, "removeEdge calls per descent <= initial |E|", gac.c3);

  if (agr.c4.pass) agr.c4.detail = std::to_string(agr.scan_steps) + " scan steps";
  report(4, "scan traversal bound", agr.c4);

  ReductionFindings red = run_reduction();
  Result c5 = gac.c5.pass ? red.c5 : gac.c5;
  if (c5.pass) c5.detail = "max moves " + std::to_string(std::max(gac.max_moves, red.max_moves));
  report(5, "edge-move bound", c5);

  report(6, "canonicity", criterion6());
  report(7, "dynamic equals static reduction", red.c7);

  if (gac.c8.pass) gac.c8.detail = std::to_string(gac.entail_checks) + " checks";
  {
    const DomainStore dom = pairs_domains();
    DynamicPropagator p(pairs_reduced(), dom);
    if (p.assign(0, 4) != Status::ok || !p.entailed()) {
      gac.c8.pass = false;
      gac.c8.detail = "pairs after x1 = 4 not entailed";
    }
  }
  report(8, "entailment", gac.c8);

  report(9, "walk diagrams and hamiltonian paths", criterion9());
  report(10, "long-edge economics", criterion10());

  Result c11 = criterion11_quality();
  if (!red.c11.pass)
    c11 = red.c11;
  else
    c11.detail = std::to_string(red.signature_checks) + " signatures exact; " + c11.detail;
  report(11, "hash incrementality and quality", c11);

  report(12, "trail round trip", criterion12());

  double descent_s = 0;
  int edges = 0;
  Result c13 = criterion13_descent(descent_s, edges);
  const double suite_s = std::chrono::duration<double>(Clock::now() - start).count();
  if (suite_s >= kSuiteSeconds) c13.pass = false;
  std::ostringstream log;
  log << "suite " << suite_s << " s (limit " << kSuiteSeconds << " s); " << c13.detail;
  c13.detail = log.str();
  report(13, "runtime", c13);

  bool all = true;
  for (const auto& [name, r] : lines) all = all && r.pass;
  return all ? 0 : 1;
}
