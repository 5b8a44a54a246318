#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mddc {

// Undo log of slot writes. Every reversible mutation in the engine goes
// through assign(); backtrack() restores the slots written since the last
// checkpoint, newest first. Writes made while no checkpoint is open are not
// recorded, since nothing can ever undo them.
//
// Slots are raw addresses, so a structure whose slots have been written
// through a trail must not reallocate for as long as checkpoints are open.
class Trail {
 public:
  void assign(std::int32_t& slot, std::int32_t value) {
    if (slot == value) return;
    if (!marks_.empty()) log_.push_back({&slot, static_cast<std::uint64_t>(static_cast<std::uint32_t>(slot)), false});
    slot = value;
  }

  void assign(std::uint64_t& slot, std::uint64_t value) {
    if (slot == value) return;
    if (!marks_.empty()) log_.push_back({&slot, slot, true});
    slot = value;
  }

  void increment(std::int32_t& slot, std::int32_t by = 1) { assign(slot, slot + by); }

  std::size_t checkpoint() {
    marks_.push_back(log_.size());
    return marks_.size();
  }

  // Undo every write since the most recent checkpoint and close it.
  // Returns the number of records undone.
  std::size_t backtrack() {
    if (marks_.empty()) return 0;
    const std::size_t mark = marks_.back();
    marks_.pop_back();
    const std::size_t undone = log_.size() - mark;
    while (log_.size() > mark) {
      const Record& r = log_.back();
      if (r.wide)
        *static_cast<std::uint64_t*>(r.slot) = r.old;
      else
        *static_cast<std::int32_t*>(r.slot) = static_cast<std::int32_t>(static_cast<std::uint32_t>(r.old));
      log_.pop_back();
    }
    return undone;
  }

  std::size_t depth() const { return marks_.size(); }
  std::size_t size() const { return log_.size(); }

 private:
  struct Record {
    void* slot;
    std::uint64_t old;
    bool wide;
  };
  std::vector<Record> log_;
  std::vector<std::size_t> marks_;
};

}  // namespace mddc
