#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mddc/domain_store.hpp"
#include "mddc/hash.hpp"
#include "mddc/mdd.hpp"
#include "mddc/trail.hpp"

namespace mddc {

// Identifies diagrams of the same shape, independent of the scope they are
// posted on.
std::uint64_t shape_id(const Mdd& mdd);

// Failed partial assignments, keyed by diagram shape. An assignment has one
// entry per layer: the value when that variable is fixed, kWildcard otherwise.
class NoGoodStore {
 public:
  explicit NoGoodStore(std::uint64_t seed = 0x6e6f676f6f64ULL) : hash_(seed) {}

  bool check(std::uint64_t shape, const std::vector<int>& assignment) const;
  void record(std::uint64_t shape, const std::vector<int>& assignment);
  std::size_t size() const { return count_; }

 private:
  std::uint64_t fingerprint(std::uint64_t shape, const std::vector<int>& assignment) const;

  HashFamily hash_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::vector<int>>>> entries_;
  std::size_t count_ = 0;
};

struct ScanOptions {
  bool delta_cutoff = false;
  // Shared store; no-goods are neither checked nor recorded when null.
  NoGoodStore* nogoods = nullptr;
  // Variables in the whole problem. Recording is skipped when the constraint
  // already spans all of them.
  int problem_vars = 0;
};

// Recomputes the valid domains from scratch on every step with a depth-first
// scan from the root, deleting edges whose label is no longer allowed or
// whose child cannot reach the terminal.
class ScanPropagator {
 public:
  ScanPropagator(const Mdd& mdd, const DomainStore& domains, ScanOptions opts = {});
  ScanPropagator(const ScanPropagator&) = delete;
  ScanPropagator& operator=(const ScanPropagator&) = delete;

  const Deltas& initial_deltas() const { return initial_deltas_; }
  Status remove(const Deltas& requests, Deltas* out = nullptr);
  Status assign(int var, int value, Deltas* out = nullptr);

  void checkpoint() { trail_.checkpoint(); }
  void backtrack();
  int depth() const { return static_cast<int>(trail_.depth()); }

  bool failed() const { return st_.scalars[0] != 0; }
  // Only the part reachable from the root counts; see the dynamic propagator
  // for the rule.
  bool entailed() const;

  const Mdd& mdd() const { return st_.mdd; }
  const DomainStore& domains() const { return st_.dom; }
  const StepMetrics& metrics() const { return metrics_; }
  StepMetrics& metrics() { return metrics_; }
  std::uint64_t shape() const { return shape_; }

  struct State {
    Mdd mdd;
    DomainStore dom;
    std::vector<std::int32_t> scalars;
    bool operator==(const State&) const = default;
  };
  const State& state() const { return st_; }

 private:
  Status step(const Deltas& requests, Deltas* out);
  void scan();
  void found(int layer, int index);
  void layer_full(int layer);
  void complete(int layer);
  std::vector<int> projection() const;
  bool replay_fails(const std::vector<int>& assignment) const;
  void fail() { trail_.assign(st_.scalars[0], 1); }

  ScanOptions opts_;
  Trail trail_;
  State st_;
  Mdd original_;
  std::uint64_t shape_ = 0;
  Deltas initial_deltas_;
  StepMetrics metrics_;

  // Per-step marks, generation stamped.
  std::uint32_t gen_ = 0;
  std::vector<std::uint32_t> live_, dead_;
  std::vector<int> offset_;
  std::vector<std::uint32_t> found_;
  std::vector<int> found_count_, entry_size_;
  std::vector<std::uint32_t> full_, complete_;
  std::vector<int> reach_;
  int delta_ = 0;
};

}  // namespace mddc
