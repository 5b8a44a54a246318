#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/dynamic_propagator.hpp"
#include "mddc/interval_mdd.hpp"
#include "mddc/mdd.hpp"
#include "mddc/scan_propagator.hpp"

namespace mddc {

// Work counters summed over every step a constraint has run.
struct ConstraintTotals {
  std::uint64_t steps = 0;
  std::uint64_t edges_traversed_scan = 0;
  std::uint64_t remove_edge_calls = 0;
  std::uint64_t nodes_merged = 0;
  std::uint64_t nodes_collapsed = 0;
  std::uint64_t interval_decrements = 0;
  std::uint64_t nogood_hits = 0;
  std::uint64_t direction_violations = 0;
  std::uint64_t entailment_events = 0;
  ConstraintTotals& operator+=(const ConstraintTotals& o);
};

// A constraint over scope()[k] for local variable k, keeping its own copy of
// the domains of its scope. Requests and reported removals use local
// variable numbers.
class Constraint {
 public:
  virtual ~Constraint() = default;
  const std::vector<int>& scope() const { return scope_; }
  virtual std::string kind() const = 0;
  // Removals found when the constraint was set up.
  virtual Deltas initial_deltas() const { return {}; }
  // Appends every local removal (requests included) to out.
  virtual Status remove(const Deltas& requests, Deltas& out) = 0;
  virtual void checkpoint() = 0;
  virtual void backtrack() = 0;
  virtual bool entailed() const = 0;
  virtual const DomainStore& domains() const = 0;
  ConstraintTotals& totals() { return totals_; }
  const ConstraintTotals& totals() const { return totals_; }

 protected:
  explicit Constraint(std::vector<int> scope) : scope_(std::move(scope)) {}
  ConstraintTotals totals_;

 private:
  std::vector<int> scope_;
};

enum class PropagatorKind { scan, dynamic, interval };

struct MddConstraintOptions {
  PropagatorKind propagator = PropagatorKind::dynamic;
  DynamicOptions dynamic;
  ScanOptions scan;
  IntervalOptions interval;
};

// Domains of the scope variables taken from the problem domains.
DomainStore scope_domains(const DomainStore& problem, const std::vector<int>& scope);

// The diagram's layer k stands for problem variable scope[k]. For the
// interval propagator the diagram is expanded and compressed into ranges.
std::unique_ptr<Constraint> make_mdd_constraint(const Mdd& mdd, const std::vector<int>& scope,
                                                const DomainStore& problem, const MddConstraintOptions& opts);
std::unique_ptr<Constraint> make_interval_constraint(const IntervalDag& dag, const std::vector<int>& scope,
                                                     const DomainStore& problem, IntervalOptions opts = {});
// Value elimination only: the value of an assigned variable is removed from
// the others, to fixpoint.
std::unique_ptr<Constraint> make_alldifferent(const std::vector<int>& scope, const DomainStore& problem);

struct PhaseRecord {
  int phase = 0;
  int var = -1;  // -1 for the root propagation
  int value = 0;
  int steps = 0;
  bool failed = false;
  bool operator==(const PhaseRecord&) const = default;
};

struct SearchOptions {
  bool entailment_skip = true;
  bool record_trace = true;
};

enum class SolveMode { first, all, count };

struct SolveResult {
  std::uint64_t count = 0;
  std::vector<std::vector<int>> solutions;  // filled in first and all modes
  std::uint64_t phases = 0;
  std::uint64_t failures = 0;
};

class Search {
 public:
  Search(DomainStore domains, SearchOptions opts = {});
  Search(const Search&) = delete;
  Search& operator=(const Search&) = delete;

  // Adopts c; fails if the scope names unknown variables.
  void add(std::unique_ptr<Constraint> c);
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  const Constraint& constraint(int k) const { return *cons_[k]; }

  // Pulls in the constraints' initial removals and propagates them.
  Status initialize();
  // Removes the triggers from the problem domains and runs every touched
  // constraint until none removes anything more.
  Status propagate(const Deltas& triggers);
  void checkpoint();
  void backtrack();
  int depth() const { return static_cast<int>(trail_.depth()); }

  SolveResult solve(SolveMode mode);

  const DomainStore& domains() const { return dom_; }
  int failed_constraint() const { return failed_constraint_; }
  int last_steps() const { return last_steps_; }
  const std::vector<PhaseRecord>& trace() const { return trace_; }
  ConstraintTotals totals() const;

 private:
  bool search(SolveMode mode, SolveResult& result);
  void enqueue(int k);

  SearchOptions opts_;
  DomainStore dom_;
  Trail trail_;
  std::vector<std::unique_ptr<Constraint>> cons_;
  // For each problem variable: (constraint, local variable).
  std::vector<std::vector<std::pair<int, int>>> watch_;
  std::vector<Deltas> pending_;
  std::vector<char> queued_;
  std::vector<int> queue_;
  std::vector<char> was_entailed_;
  std::int32_t failed_ = 0;
  int failed_constraint_ = -1;
  int last_steps_ = 0;
  int phase_ = 0;
  std::vector<PhaseRecord> trace_;
};

// Projection onto each variable of the solutions consistent with domains.
std::vector<std::vector<int>> oracle_valid_domains(const std::vector<std::vector<int>>& solutions,
                                                   const DomainStore& domains);

}  // namespace mddc
