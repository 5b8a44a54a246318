#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mddc/dynamic_propagator.hpp"
#include "mddc/interval_mdd.hpp"

using namespace mddc;
using namespace testing_support;

namespace {

IntervalTable pairs_intervals() {
  return {{0, 1}, {{{1, 1}, {3, 3}}, {{2, 2}, {1, 1}}, {{3, 3}, {3, 3}}, {{4, 4}, {1, 3}}}};
}

IntervalTable random_intervals(std::mt19937_64& rng, int n, int d, int rows) {
  std::uniform_int_distribution<int> val(1, d);
  IntervalTable t;
  for (int i = 0; i < n; ++i) t.scope.push_back(i);
  for (int r = 0; r < rows; ++r) {
    std::vector<std::pair<int, int>> row;
    for (int i = 0; i < n; ++i) {
      int a = val(rng), b = val(rng);
      if (a > b) std::swap(a, b);
      if (rng() % 2) b = a;
      row.push_back({a, b});
    }
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace

TEST_CASE("pairs with interval edges expands to the expanded pairs diagram") {
  const DomainStore dom = pairs_domains();
  const IntervalDag dag = build_interval_dag(pairs_intervals(), dom);
  const Mdd expanded = expand_long_edges(pairs_reduced(), dom);
  CHECK(isomorphic(expand_to_mdd(dag, dom), expanded));
  // The three terminal edges out of the x1 = 4 node become one range.
  CHECK(dag.skeleton.live_edges() == expanded.live_edges() - 2);
  bool found = false;
  for (const IndexRange& r : dag.ranges[1]) found = found || r == IndexRange{0, 2};
  CHECK(found);
  CHECK(enumerate_solutions(expand_to_mdd(dag, dom), dom) == pairs_rows());
}

TEST_CASE("interval propagator on pairs") {
  const DomainStore dom = pairs_domains();
  IntervalPropagator p(build_interval_dag(pairs_intervals(), dom), dom);
  CHECK(p.initial_deltas().empty());
  Deltas out;
  p.checkpoint();
  CHECK(p.remove({{1, 3}}, &out) == Status::ok);
  std::sort(out.begin(), out.end());
  CHECK(out == Deltas{{0, 1}, {0, 3}, {1, 3}});
  p.backtrack();
  p.checkpoint();
  CHECK(p.assign(1, 2) == Status::ok);
  CHECK(p.domains().current_values(0) == std::vector<int>{4});
  CHECK(p.entailed());
  p.backtrack();
  CHECK(p.domains() == dom);
  CHECK_FALSE(p.entailed());
}

TEST_CASE("interval tree stabbing matches a scan") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 200; ++it) {
    std::vector<IndexRange> rs;
    const int m = 1 + static_cast<int>(rng() % 30);
    for (int k = 0; k < m; ++k) {
      int a = static_cast<int>(rng() % 40), b = static_cast<int>(rng() % 40);
      if (a > b) std::swap(a, b);
      rs.push_back({a, b});
    }
    const IntervalTree tree(rs);
    for (int q = -1; q <= 41; ++q) {
      std::vector<int> got, want;
      tree.stab(q, got);
      for (int k = 0; k < m; ++k)
        if (rs[k].contains(q)) want.push_back(k);
      std::sort(got.begin(), got.end());
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("random interval constraints agree with the oracle and the plain propagator") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int it = 0; it < 400; ++it) {
    const int n = 2 + static_cast<int>(rng() % 4), d = 3 + static_cast<int>(rng() % 5);
    const IntervalTable table = random_intervals(rng, n, d, 1 + static_cast<int>(rng() % 6));
    const DomainStore dom = uniform_domains(n, 1, d);
    const IntervalDag dag = build_interval_dag(table, dom);
    const Mdd plain = expand_to_mdd(dag, dom);
    const auto rows = enumerate_solutions(plain, dom);
    const bool use_union = it % 2 == 1;
    IntervalPropagator ip(dag, dom, {use_union});
    DynamicPropagator dp(plain, dom);
    REQUIRE(ip.domains() == dp.domains());
    oracle::Domains cur = to_sets(dom);
    std::vector<IntervalPropagator::State> saved;
    for (int step = 0; step < 10 && !ip.failed(); ++step) {
      if (!saved.empty() && rng() % 4 == 0) {
        ip.backtrack();
        dp.backtrack();
        REQUIRE(ip.state() == saved.back());
        saved.pop_back();
        cur = to_sets(ip.domains());
        continue;
      }
      const int var = static_cast<int>(rng() % n);
      if (cur[var].size() <= 1) continue;
      auto pick = cur[var].begin();
      std::advance(pick, rng() % cur[var].size());
      const int value = *pick;
      saved.push_back(ip.state());
      ip.checkpoint();
      dp.checkpoint();
      const Status si = ip.remove({{var, value}});
      const Status sd = dp.remove({{var, value}});
      REQUIRE(si == sd);
      cur[var].erase(value);
      const auto valid = oracle::valid_domains(rows, cur);
      if (si == Status::failed) {
        bool none = false;
        for (const auto& s : valid) none = none || s.empty();
        CHECK(none);
        break;
      }
      REQUIRE(to_sets(ip.domains()) == valid);
      REQUIRE(ip.domains() == dp.domains());
      CHECK(ip.descent_decrements() <= static_cast<std::uint64_t>(ip.range_length_total()));
      CHECK(validate(ip.skeleton()).ok());
      if (ip.entailed()) CHECK(oracle::entailed(rows, valid));
      cur = valid;
      ++checked;
    }
    while (!saved.empty()) {
      ip.backtrack();
      REQUIRE(ip.state() == saved.back());
      saved.pop_back();
    }
  }
  CHECK(checked > 500);
}
