#include "mddc/long_edges.hpp"

#include <algorithm>
#include <stdexcept>

namespace mddc {

IntervalUnion::IntervalUnion(int n) : n_(n), cover_(4 * std::max(n, 1), 0), len_(4 * std::max(n, 1), 0) {}

void IntervalUnion::pull(int node, int l, int r, Trail& trail) {
  int len;
  if (cover_[node] > 0)
    len = r - l + 1;
  else if (l == r)
    len = 0;
  else
    len = len_[2 * node] + len_[2 * node + 1];
  trail.assign(len_[node], len);
}

void IntervalUnion::update(int node, int l, int r, int lo, int hi, int delta, Trail& trail) {
  if (hi < l || r < lo) return;
  if (lo <= l && r <= hi) {
    trail.increment(cover_[node], delta);
  } else {
    const int m = (l + r) / 2;
    update(2 * node, l, m, lo, hi, delta, trail);
    update(2 * node + 1, m + 1, r, lo, hi, delta, trail);
  }
  pull(node, l, r, trail);
}

void IntervalUnion::collect(int node, int l, int r, int lo, int hi, std::vector<int>& out) const {
  if (hi < l || r < lo || cover_[node] > 0 || len_[node] == r - l + 1) return;
  if (l == r) {
    out.push_back(l);
    return;
  }
  const int m = (l + r) / 2;
  collect(2 * node, l, m, lo, hi, out);
  collect(2 * node + 1, m + 1, r, lo, hi, out);
}

void IntervalUnion::remove(int lo, int hi, Trail& trail, std::vector<int>& uncovered) {
  update(1, 0, n_ - 1, lo, hi, -1, trail);
  collect(1, 0, n_ - 1, lo, hi, uncovered);
}

bool IntervalUnion::covered(int layer) const {
  int node = 1, l = 0, r = n_ - 1;
  while (true) {
    if (cover_[node] > 0) return true;
    if (l == r) return false;
    const int m = (l + r) / 2;
    if (layer <= m) {
      node = 2 * node;
      r = m;
    } else {
      node = 2 * node + 1;
      l = m + 1;
    }
  }
}

LongEdgeRegistry::LongEdgeRegistry(int n, CoverageBackend backend)
    : n_(n),
      backend_(backend),
      L_(static_cast<std::size_t>(n) * n, 0),
      coverage_(n, 0),
      heap_(static_cast<std::size_t>(n) * (n + 1), 0),
      heap_size_(n, 0),
      heap_covered_(n, 0),
      union_(n) {}

void LongEdgeRegistry::add(int i, int j, Trail& trail) {
  if (i < 0 || j >= n_ || i > j) throw std::out_of_range("long edge interval out of range");
  std::int32_t& c = L_[index(i, j)];
  trail.increment(c);
  if (c != 1) return;
  trail.increment(scalars_[kLive]);
  for (int l = i; l <= j; ++l) {
    trail.increment(coverage_[l]);
    trail.assign(heap_covered_[l], 1);
  }
  heap_push(i, j, trail);
  union_.add(i, j, trail);
}

void LongEdgeRegistry::remove(int i, int j, Trail& trail) {
  std::int32_t& c = L_[index(i, j)];
  if (c <= 0) throw std::logic_error("long edge interval removed while absent");
  trail.increment(c, -1);
  if (c != 0) return;
  trail.increment(scalars_[kLive], -1);
  std::vector<int> by_counter;
  for (int l = i; l <= j; ++l) {
    trail.increment(coverage_[l], -1);
    if (coverage_[l] == 0) by_counter.push_back(l);
  }
  std::vector<int> by_union;
  union_.remove(i, j, trail, by_union);
  if (backend_ == CoverageBackend::counters) pending_.insert(pending_.end(), by_counter.begin(), by_counter.end());
  if (backend_ == CoverageBackend::interval_union) pending_.insert(pending_.end(), by_union.begin(), by_union.end());
  // The heap backend finds lost coverage by a sweep in take_uncovered().
}

bool LongEdgeRegistry::covered(int layer) const {
  switch (backend_) {
    case CoverageBackend::counters:
      return coverage_[layer] > 0;
    case CoverageBackend::heap:
      return heap_covered_[layer] != 0;
    case CoverageBackend::interval_union:
      return union_.covered(layer);
  }
  return false;
}

std::vector<int> LongEdgeRegistry::take_uncovered(Trail& trail) {
  std::vector<int> out;
  if (backend_ == CoverageBackend::heap) {
    const auto now = covered_by_heap(trail);
    for (int l = 0; l < n_; ++l)
      if (heap_covered_[l] && !now[l]) {
        trail.assign(heap_covered_[l], 0);
        out.push_back(l);
      }
  } else {
    out.swap(pending_);
  }
  return out;
}

std::vector<char> LongEdgeRegistry::covered_by_counters() const {
  std::vector<char> out(n_);
  for (int l = 0; l < n_; ++l) out[l] = coverage_[l] > 0;
  return out;
}

std::vector<char> LongEdgeRegistry::covered_by_union() const {
  std::vector<char> out(n_);
  for (int l = 0; l < n_; ++l) out[l] = union_.covered(l);
  return out;
}

std::vector<int> LongEdgeRegistry::longest_reach(Trail& trail) {
  std::vector<int> reach(n_);
  for (int i = 0; i < n_; ++i) reach[i] = heap_top(i, trail);
  return reach;
}

std::vector<char> LongEdgeRegistry::covered_by_heap(Trail& trail) {
  std::vector<char> out(n_, 0);
  int run = -1;
  for (int l = 0; l < n_; ++l) {
    run = std::max(run, heap_top(l, trail));
    out[l] = run >= l;
  }
  return out;
}

void LongEdgeRegistry::heap_push(int i, int j, Trail& trail) {
  const int cap = n_ + 1;
  if (heap_size_[i] == cap) heap_compact(i, trail);
  std::int32_t* h = heap_.data() + static_cast<std::size_t>(i) * cap;
  int pos = heap_size_[i];
  trail.increment(heap_size_[i]);
  while (pos > 0) {
    const int parent = (pos - 1) / 2;
    if (h[parent] >= j) break;
    trail.assign(h[pos], h[parent]);
    pos = parent;
  }
  trail.assign(h[pos], j);
}

void LongEdgeRegistry::heap_sift_down(int i, int pos, Trail& trail) {
  std::int32_t* h = heap_.data() + static_cast<std::size_t>(i) * (n_ + 1);
  const int size = heap_size_[i];
  const int v = h[pos];
  while (true) {
    int child = 2 * pos + 1;
    if (child >= size) break;
    if (child + 1 < size && h[child + 1] > h[child]) ++child;
    if (h[child] <= v) break;
    trail.assign(h[pos], h[child]);
    pos = child;
  }
  trail.assign(h[pos], v);
}

int LongEdgeRegistry::heap_top(int i, Trail& trail) {
  std::int32_t* h = heap_.data() + static_cast<std::size_t>(i) * (n_ + 1);
  while (heap_size_[i] > 0 && L_[index(i, h[0])] == 0) {
    trail.increment(heap_size_[i], -1);
    if (heap_size_[i] > 0) {
      trail.assign(h[0], h[heap_size_[i]]);
      heap_sift_down(i, 0, trail);
    }
  }
  return heap_size_[i] > 0 ? h[0] : -1;
}

void LongEdgeRegistry::heap_compact(int i, Trail& trail) {
  std::int32_t* h = heap_.data() + static_cast<std::size_t>(i) * (n_ + 1);
  std::vector<int> keep;
  for (int k = 0; k < heap_size_[i]; ++k)
    if (L_[index(i, h[k])] > 0) keep.push_back(h[k]);
  std::sort(keep.begin(), keep.end(), std::greater<>());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  // Descending order is a valid max-heap.
  for (std::size_t k = 0; k < keep.size(); ++k) trail.assign(h[k], keep[k]);
  trail.assign(heap_size_[i], static_cast<std::int32_t>(keep.size()));
}

WildcardState::WildcardState(int n, std::vector<int> domain_sizes) : w_(n, 0), offset_(n + 1, 0), size_(n, 0) {
  for (int i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + domain_sizes[i];
  flag_.assign(offset_[n], 0);
  stack_.assign(offset_[n], 0);
}

void WildcardState::defer(int layer, int value_index, Trail& trail) {
  std::int32_t& f = flag_[offset_[layer] + value_index];
  if (f) return;
  trail.assign(f, 1);
  trail.assign(stack_[offset_[layer] + size_[layer]], value_index);
  trail.increment(size_[layer]);
}

std::vector<int> WildcardState::remove_node(int layer, Trail& trail) {
  trail.increment(w_[layer], -1);
  if (w_[layer] > 0) return {};
  std::vector<int> out = deferred(layer);
  for (int v : out) trail.assign(flag_[offset_[layer] + v], 0);
  trail.assign(size_[layer], 0);
  return out;
}

std::vector<int> WildcardState::deferred(int layer) const {
  return {stack_.begin() + offset_[layer], stack_.begin() + offset_[layer] + size_[layer]};
}

}  // namespace mddc
