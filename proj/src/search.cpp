#include "mddc/search.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "mddc/build.hpp"

namespace mddc {

ConstraintTotals& ConstraintTotals::operator+=(const ConstraintTotals& o) {
  steps += o.steps;
  edges_traversed_scan += o.edges_traversed_scan;
  remove_edge_calls += o.remove_edge_calls;
  nodes_merged += o.nodes_merged;
  nodes_collapsed += o.nodes_collapsed;
  interval_decrements += o.interval_decrements;
  nogood_hits += o.nogood_hits;
  direction_violations += o.direction_violations;
  entailment_events += o.entailment_events;
  return *this;
}

DomainStore scope_domains(const DomainStore& problem, const std::vector<int>& scope) {
  std::vector<std::vector<int>> orig;
  for (int x : scope) {
    if (x < 0 || x >= problem.num_vars()) throw std::invalid_argument("scope names an unknown variable");
    orig.emplace_back(problem.original(x).begin(), problem.original(x).end());
  }
  DomainStore d(orig);
  Trail t;
  for (std::size_t k = 0; k < scope.size(); ++k)
    for (int v : problem.original(scope[k]))
      if (!problem.contains(scope[k], v)) d.remove_value(static_cast<int>(k), v, t);
  return d;
}

namespace {

template <class P>
class PropagatorConstraint : public Constraint {
 public:
  template <class... Args>
  PropagatorConstraint(std::string kind, std::vector<int> scope, Args&&... args)
      : Constraint(std::move(scope)), kind_(std::move(kind)), p_(std::forward<Args>(args)...) {}

  std::string kind() const override { return kind_; }
  Deltas initial_deltas() const override { return p_.initial_deltas(); }
  Status remove(const Deltas& requests, Deltas& out) override {
    const Status s = p_.remove(requests, &out);
    const StepMetrics& m = p_.metrics();
    ++totals_.steps;
    totals_.edges_traversed_scan += m.edges_traversed_scan;
    totals_.remove_edge_calls += m.remove_edge_calls;
    totals_.nodes_merged += m.nodes_merged;
    totals_.nodes_collapsed += m.nodes_collapsed;
    totals_.interval_decrements += m.interval_decrements;
    totals_.nogood_hits = m.nogood_hits;
    totals_.direction_violations = m.direction_violations;
    return s;
  }
  void checkpoint() override { p_.checkpoint(); }
  void backtrack() override { p_.backtrack(); }
  bool entailed() const override { return p_.entailed(); }
  const DomainStore& domains() const override { return p_.domains(); }

 private:
  std::string kind_;
  P p_;
};

class AllDifferent : public Constraint {
 public:
  AllDifferent(std::vector<int> scope, DomainStore dom) : Constraint(std::move(scope)), dom_(std::move(dom)) {}

  std::string kind() const override { return "alldifferent"; }
  Deltas initial_deltas() const override { return initial_; }
  void init() {
    Deltas out;
    std::vector<int> all(dom_.num_vars());
    for (int i = 0; i < dom_.num_vars(); ++i) all[i] = i;
    eliminate(all, out);
    initial_ = out;
  }
  Status remove(const Deltas& requests, Deltas& out) override {
    ++totals_.steps;
    if (failed_) return Status::failed;
    std::vector<int> touched;
    for (const Literal& lit : requests) {
      if (!dom_.remove_value(lit.var, lit.value, trail_)) continue;
      out.push_back(lit);
      if (dom_.empty(lit.var)) {
        trail_.assign(failed_, 1);
        return Status::failed;
      }
      touched.push_back(lit.var);
    }
    eliminate(touched, out);
    return failed_ ? Status::failed : Status::ok;
  }
  void checkpoint() override { trail_.checkpoint(); }
  void backtrack() override { trail_.backtrack(); }
  // Pairwise disjoint domains.
  bool entailed() const override {
    if (failed_) return false;
    std::set<int> seen;
    std::size_t total = 0;
    for (int i = 0; i < dom_.num_vars(); ++i) {
      total += dom_.size(i);
      for (int v : dom_.current_values(i)) seen.insert(v);
    }
    return seen.size() == total;
  }
  const DomainStore& domains() const override { return dom_; }

 private:
  void eliminate(std::vector<int> todo, Deltas& out) {
    while (!todo.empty() && !failed_) {
      const int i = todo.back();
      todo.pop_back();
      if (dom_.size(i) != 1) continue;
      const int v = dom_.value_at(i, dom_.current_indices(i)[0]);
      for (int j = 0; j < dom_.num_vars(); ++j) {
        if (j == i || !dom_.remove_value(j, v, trail_)) continue;
        out.push_back({j, v});
        if (dom_.empty(j)) {
          trail_.assign(failed_, 1);
          return;
        }
        if (dom_.size(j) == 1) todo.push_back(j);
      }
    }
  }

  DomainStore dom_;
  Trail trail_;
  std::int32_t failed_ = 0;
  Deltas initial_;
};

}  // namespace

std::unique_ptr<Constraint> make_mdd_constraint(const Mdd& mdd, const std::vector<int>& scope,
                                                const DomainStore& problem, const MddConstraintOptions& opts) {
  if (mdd.num_vars() != static_cast<int>(scope.size()))
    throw std::invalid_argument("diagram layers do not match the scope");
  const DomainStore local = scope_domains(problem, scope);
  switch (opts.propagator) {
    case PropagatorKind::scan:
      return std::make_unique<PropagatorConstraint<ScanPropagator>>("mdd/scan", scope, mdd, local, opts.scan);
    case PropagatorKind::dynamic:
      return std::make_unique<PropagatorConstraint<DynamicPropagator>>("mdd/dynamic", scope, mdd, local,
                                                                       opts.dynamic);
    case PropagatorKind::interval: {
      const IntervalDag dag = compress_to_intervals(expand_long_edges(mdd, local), local);
      return std::make_unique<PropagatorConstraint<IntervalPropagator>>("mdd/interval", scope, dag, local,
                                                                        opts.interval);
    }
  }
  throw std::logic_error("unknown propagator kind");
}

std::unique_ptr<Constraint> make_interval_constraint(const IntervalDag& dag, const std::vector<int>& scope,
                                                     const DomainStore& problem, IntervalOptions opts) {
  if (dag.skeleton.num_vars() != static_cast<int>(scope.size()))
    throw std::invalid_argument("diagram layers do not match the scope");
  return std::make_unique<PropagatorConstraint<IntervalPropagator>>("mdd/interval", scope, dag,
                                                                    scope_domains(problem, scope), opts);
}

std::unique_ptr<Constraint> make_alldifferent(const std::vector<int>& scope, const DomainStore& problem) {
  auto c = std::make_unique<AllDifferent>(scope, scope_domains(problem, scope));
  c->init();
  return c;
}

Search::Search(DomainStore domains, SearchOptions opts)
    : opts_(opts), dom_(std::move(domains)), watch_(dom_.num_vars()) {}

void Search::add(std::unique_ptr<Constraint> c) {
  const int k = static_cast<int>(cons_.size());
  const auto& sc = c->scope();
  for (std::size_t j = 0; j < sc.size(); ++j) {
    if (sc[j] < 0 || sc[j] >= dom_.num_vars()) throw std::invalid_argument("scope names an unknown variable");
    watch_[sc[j]].push_back({k, static_cast<int>(j)});
  }
  cons_.push_back(std::move(c));
  pending_.emplace_back();
  queued_.push_back(0);
  was_entailed_.push_back(0);
}

void Search::enqueue(int k) {
  if (queued_[k]) return;
  queued_[k] = 1;
  queue_.push_back(k);
}

Status Search::initialize() {
  Deltas triggers;
  std::vector<std::pair<Literal, int>> sourced;
  for (int k = 0; k < num_constraints(); ++k)
    for (const Literal& lit : cons_[k]->initial_deltas()) sourced.push_back({{cons_[k]->scope()[lit.var], lit.value}, k});
  last_steps_ = 0;
  for (auto [lit, k] : sourced) {
    if (!dom_.remove_value(lit.var, lit.value, trail_)) continue;
    if (dom_.empty(lit.var)) {
      trail_.assign(failed_, 1);
      failed_constraint_ = k;
      return Status::failed;
    }
    for (auto [c, local] : watch_[lit.var])
      if (c != k) {
        pending_[c].push_back({local, lit.value});
        enqueue(c);
      }
  }
  return propagate({});
}

Status Search::propagate(const Deltas& triggers) {
  last_steps_ = 0;
  if (failed_) return Status::failed;
  auto fail = [&](int k) {
    trail_.assign(failed_, 1);
    failed_constraint_ = k;
    for (int c : queue_) {
      queued_[c] = 0;
      pending_[c].clear();
    }
    queue_.clear();
    return Status::failed;
  };
  auto lose = [&](int var, int value, int source) {
    if (!dom_.remove_value(var, value, trail_)) return true;
    if (dom_.empty(var)) return false;
    for (auto [c, local] : watch_[var])
      if (c != source) {
        pending_[c].push_back({local, value});
        enqueue(c);
      }
    return true;
  };
  for (const Literal& lit : triggers)
    if (!lose(lit.var, lit.value, -1)) return fail(-1);
  std::size_t head = 0;
  while (head < queue_.size()) {
    const int k = queue_[head++];
    queued_[k] = 0;
    Constraint& c = *cons_[k];
    if (opts_.entailment_skip && c.entailed()) {
      pending_[k].clear();
      continue;
    }
    Deltas requests;
    requests.swap(pending_[k]);
    Deltas out;
    ++last_steps_;
    if (c.remove(requests, out) == Status::failed) return fail(k);
    for (const Literal& lit : out)
      if (!lose(c.scope()[lit.var], lit.value, k)) return fail(k);
    if (opts_.entailment_skip && c.entailed()) ++c.totals().entailment_events;
  }
  queue_.clear();
  return Status::ok;
}

void Search::checkpoint() {
  trail_.checkpoint();
  for (auto& c : cons_) c->checkpoint();
}

void Search::backtrack() {
  if (trail_.depth() == 0) throw std::logic_error("backtrack without an open checkpoint");
  trail_.backtrack();
  for (auto& c : cons_) c->backtrack();
  failed_constraint_ = -1;
}

ConstraintTotals Search::totals() const {
  ConstraintTotals t;
  for (const auto& c : cons_) t += c->totals();
  return t;
}

SolveResult Search::solve(SolveMode mode) {
  SolveResult result;
  phase_ = 0;
  trace_.clear();
  const int base = depth();
  checkpoint();
  const Status s = initialize();
  if (opts_.record_trace) trace_.push_back({0, -1, 0, last_steps_, s == Status::failed});
  if (s == Status::failed)
    ++result.failures;
  else
    search(mode, result);
  while (depth() > base) backtrack();
  return result;
}

bool Search::search(SolveMode mode, SolveResult& result) {
  int var = -1;
  for (int i = 0; i < dom_.num_vars(); ++i)
    if (dom_.size(i) > 1) {
      var = i;
      break;
    }
  if (var < 0) {
    ++result.count;
    if (mode != SolveMode::count) {
      std::vector<int> sol(dom_.num_vars());
      for (int i = 0; i < dom_.num_vars(); ++i) sol[i] = dom_.value_at(i, dom_.current_indices(i)[0]);
      result.solutions.push_back(sol);
    }
    return mode == SolveMode::first;
  }
  for (int v : dom_.current_values(var)) {
    checkpoint();
    ++result.phases;
    Deltas r;
    for (int w : dom_.current_values(var))
      if (w != v) r.push_back({var, w});
    const Status s = propagate(r);
    if (opts_.record_trace) trace_.push_back({++phase_, var, v, last_steps_, s == Status::failed});
    bool stop = false;
    if (s == Status::failed)
      ++result.failures;
    else
      stop = search(mode, result);
    backtrack();
    if (stop) return true;
  }
  return false;
}

std::vector<std::vector<int>> oracle_valid_domains(const std::vector<std::vector<int>>& solutions,
                                                   const DomainStore& domains) {
  std::vector<std::set<int>> sets(domains.num_vars());
  for (const auto& t : solutions) {
    bool ok = static_cast<int>(t.size()) == domains.num_vars();
    for (int i = 0; ok && i < domains.num_vars(); ++i) ok = domains.contains(i, t[i]);
    if (!ok) continue;
    for (int i = 0; i < domains.num_vars(); ++i) sets[i].insert(t[i]);
  }
  std::vector<std::vector<int>> out;
  for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
  return out;
}

}  // namespace mddc
