#include "mddc/domain_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace mddc {

DomainStore::DomainStore(std::vector<std::vector<int>> original) : original_(std::move(original)) {
  int offset = 0;
  for (auto& dom : original_) {
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    if (dom.empty()) throw std::invalid_argument("variable with empty domain");
    offset_.push_back(offset);
    min_value_.push_back(dom.front());
    std::vector<int> table(static_cast<std::size_t>(dom.back() - dom.front() + 1), -1);
    for (int i = 0; i < static_cast<int>(dom.size()); ++i) {
      table[dom[i] - dom.front()] = i;
      dense_.push_back(i);
      pos_.push_back(i);
    }
    lookup_.push_back(std::move(table));
    size_.push_back(static_cast<std::int32_t>(dom.size()));
    max_size_ = std::max(max_size_, static_cast<int>(dom.size()));
    offset += static_cast<int>(dom.size());
  }
}

int DomainStore::index_of(int var, int value) const {
  const long rel = static_cast<long>(value) - min_value_[var];
  if (rel < 0 || rel >= static_cast<long>(lookup_[var].size())) return -1;
  return lookup_[var][rel];
}

std::vector<int> DomainStore::current_index_list(int var) const {
  auto cur = current_indices(var);
  std::vector<int> out(cur.begin(), cur.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> DomainStore::current_values(int var) const {
  std::vector<int> out;
  for (int idx : current_index_list(var)) out.push_back(original_[var][idx]);
  return out;
}

bool DomainStore::remove_index(int var, int index, Trail& trail) {
  if (!contains_index(var, index)) return false;
  const int base = offset_[var];
  const int p = pos_[base + index];
  const int last = size_[var] - 1;
  const int moved = dense_[base + last];
  trail.assign(dense_[base + p], moved);
  trail.assign(pos_[base + moved], p);
  trail.assign(dense_[base + last], index);
  trail.assign(pos_[base + index], last);
  trail.assign(size_[var], last);
  return true;
}

bool DomainStore::remove_value(int var, int value, Trail& trail) {
  const int idx = index_of(var, value);
  return idx >= 0 && remove_index(var, idx, trail);
}

bool DomainStore::operator==(const DomainStore& other) const {
  if (original_ != other.original_) return false;
  for (int v = 0; v < num_vars(); ++v)
    if (current_index_list(v) != other.current_index_list(v)) return false;
  return true;
}

}  // namespace mddc
