#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mddc/trail.hpp"

namespace mddc {

// Original and current domains for a fixed list of variables. Values are
// addressed either directly or by their index in the sorted original domain.
// The current domain of each variable is a sparse set over those indices, so
// removal, membership and restore are O(1).
class DomainStore {
 public:
  DomainStore() = default;
  explicit DomainStore(std::vector<std::vector<int>> original);

  int num_vars() const { return static_cast<int>(original_.size()); }
  int max_domain_size() const { return max_size_; }

  std::span<const int> original(int var) const { return original_[var]; }
  int original_size(int var) const { return static_cast<int>(original_[var].size()); }
  int value_at(int var, int index) const { return original_[var][index]; }
  // Index of value in the original domain of var, or -1.
  int index_of(int var, int value) const;

  int size(int var) const { return size_[var]; }
  bool empty(int var) const { return size_[var] == 0; }
  bool contains_index(int var, int index) const {
    return pos_[offset_[var] + index] < size_[var];
  }
  bool contains(int var, int value) const {
    const int idx = index_of(var, value);
    return idx >= 0 && contains_index(var, idx);
  }

  // Unordered view of the current value indices of var.
  std::span<const std::int32_t> current_indices(int var) const {
    return {dense_.data() + offset_[var], static_cast<std::size_t>(size_[var])};
  }
  std::vector<int> current_values(int var) const;  // ascending
  std::vector<int> current_index_list(int var) const;  // ascending

  // Returns false when the index was already absent.
  bool remove_index(int var, int index, Trail& trail);
  bool remove_value(int var, int value, Trail& trail);

  bool operator==(const DomainStore& other) const;

 private:
  std::vector<std::vector<int>> original_;
  std::vector<int> offset_;
  std::vector<int> min_value_;
  std::vector<std::vector<int>> lookup_;
  std::vector<std::int32_t> dense_;
  std::vector<std::int32_t> pos_;
  std::vector<std::int32_t> size_;
  int max_size_ = 0;
};

}  // namespace mddc
