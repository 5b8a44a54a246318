#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mddc/dynamic_propagator.hpp"

using namespace mddc;
using namespace testing_support;

TEST_CASE("support lists on the pairs diagrams") {
  const DomainStore dom = pairs_domains();
  DynamicPropagator ex(expand_long_edges(pairs_reduced(), dom), dom);
  CHECK(ex.support_list(1, 3).size() == 2);
  DynamicPropagator red(pairs_reduced(), dom);
  CHECK(red.support_list(0, 4).size() == 1);
  // x2 = 2 is supported only by the long edge.
  CHECK(red.support_list(1, 1).size() == 1);
  CHECK(red.support_list(1, 2).empty());
  CHECK(red.support_list(1, 3).size() == 1);
  CHECK(red.initial_deltas().empty());
}

TEST_CASE("remove on the expanded pairs diagram") {
  const DomainStore dom = pairs_domains();
  DynamicPropagator p(expand_long_edges(pairs_reduced(), dom), dom);
  Deltas out;
  p.checkpoint();
  CHECK(p.remove({{1, 3}}, &out) == Status::ok);
  CHECK(p.metrics().remove_edge_calls == 4);
  std::sort(out.begin(), out.end());
  CHECK(out == Deltas{{0, 1}, {0, 3}, {1, 3}});
  CHECK(p.domains().current_values(0) == std::vector<int>{2, 4});
  CHECK(p.domains().current_values(1) == std::vector<int>{1, 2});
  p.backtrack();
  CHECK(p.domains() == dom);
}

TEST_CASE("remove and assign on the reduced pairs diagram") {
  const DomainStore dom = pairs_domains();
  DynamicPropagator p(pairs_reduced(), dom);
  Deltas out;
  p.checkpoint();
  CHECK(p.remove({{0, 4}}, &out) == Status::ok);
  CHECK(out == Deltas{{0, 4}, {1, 2}});
  p.backtrack();
  CHECK_FALSE(p.entailed());
  p.checkpoint();
  out.clear();
  CHECK(p.assign(0, 4, &out) == Status::ok);
  CHECK(p.domains().current_values(1) == std::vector<int>{1, 2, 3});
  CHECK(p.entailed());
  p.backtrack();
  p.checkpoint();
  CHECK(p.assign(1, 2) == Status::ok);
  CHECK(p.domains().current_values(0) == std::vector<int>{4});
  p.backtrack();
  p.checkpoint();
  CHECK(p.remove({{0, 1}, {0, 2}, {0, 3}, {0, 4}}) == Status::failed);
  CHECK(p.failed());
  p.backtrack();
  CHECK_FALSE(p.failed());
}

TEST_CASE("random sequences agree with the oracle") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 1600; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 5), d = 1 + static_cast<int>(rng() % 4);
    const auto rows = oracle::random_table(rng, n, d, 1 + static_cast<int>(rng() % 30));
    const DomainStore dom = uniform_domains(n, 1, d);
    std::vector<int> scope(n);
    for (int i = 0; i < n; ++i) scope[i] = i;
    const Mdd m = build_from_tuples({scope, rows}, dom);
    const int variant = iter % 8;
    DynamicOptions opts;
    Mdd input = m;
    if (variant == 1) input = expand_long_edges(m, dom);
    if (variant == 2) opts.reduce = ReduceMode::full;
    if (variant == 3) {
      input = expand_long_edges(m, dom);
      opts.reduce = ReduceMode::uniqueness;
    }
    if (variant == 4 || variant == 5) {
      opts.reduce = ReduceMode::full;
      opts.coverage = variant == 4 ? CoverageBackend::heap : CoverageBackend::interval_union;
    }
    if (variant == 6) input = to_wildcard_form(m, dom);
    if (variant == 7) {
      input = to_wildcard_form(m, dom);
      opts.reduce = ReduceMode::full;
      opts.collapse_to_wildcard = true;
    }
    DynamicPropagator p(input, dom, opts);
    REQUIRE_FALSE(p.failed());
    std::vector<DynamicPropagator::State> saved;
    oracle::Domains cur = oracle::full_domains(n, d);
    std::vector<oracle::Domains> stack;
    for (int step = 0; step < 12; ++step) {
      const int op = static_cast<int>(rng() % 3);
      if (op == 2 && p.depth() > 0) {
        p.backtrack();
        CHECK(p.state() == saved.back());
        saved.pop_back();
        cur = stack.back();
        stack.pop_back();
        continue;
      }
      saved.push_back(p.state());
      stack.push_back(cur);
      p.checkpoint();
      const int var = static_cast<int>(rng() % n);
      const auto vals = p.domains().current_values(var);
      const int v = vals[rng() % vals.size()];
      Status s;
      if (op == 0) {
        cur[var].erase(v);
        s = p.remove({{var, v}});
      } else {
        cur[var] = {v};
        s = p.assign(var, v);
      }
      const auto vd = oracle::valid_domains(rows, cur);
      bool empty = false;
      for (const auto& x : vd) empty |= x.empty();
      if (empty) {
        CHECK(s == Status::failed);
        p.backtrack();
        CHECK(p.state() == saved.back());
        saved.pop_back();
        cur = stack.back();
        stack.pop_back();
        continue;
      }
      REQUIRE(s == Status::ok);
      CHECK(to_sets(p.domains()) == vd);
      cur = vd;
      CHECK(validate(p.mdd()).ok());
      CHECK(p.bookkeeping_consistent());
      CHECK(p.entailed() == (variant == 2 || variant == 4 || variant == 5 ? oracle::entailed(rows, cur) : p.entailed()));
      if (p.entailed()) CHECK(oracle::entailed(rows, cur));
    }
  }
}
