#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "mddc/trail.hpp"
#include "mddc/types.hpp"

namespace mddc {

// Multiply-add-shift family: h(x) = ((a*x + b) mod 2^128) >> (128 - w) for
// 64-bit keys, with a and b drawn per slot from the seed. Every slot (an edge
// label, a layer, a domain value) gets its own independent function.
class HashFamily {
 public:
  explicit HashFamily(std::uint64_t seed = 0x9e3779b97f4a7c15ULL, int bits = 64);

  int bits() const { return bits_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t edge(int label, NodeId child) const { return apply(slot(1, label, 0), static_cast<std::uint64_t>(child)); }
  std::uint64_t layer_term(int layer) const { return apply(slot(2, layer, 0), 0); }
  std::uint64_t domain_term(int var, int value) const { return apply(slot(3, var, value), 1); }
  // Raw access for statistical tests.
  std::uint64_t eval(std::uint64_t slot_id, std::uint64_t x) const { return apply(slot(4, static_cast<int>(slot_id), static_cast<int>(slot_id >> 32)), x); }

 private:
  struct Coeffs {
    unsigned __int128 a, b;
  };
  Coeffs slot(int kind, int p, int q) const;
  std::uint64_t apply(const Coeffs& c, std::uint64_t x) const {
    const unsigned __int128 r = c.a * x + c.b;
    return static_cast<std::uint64_t>(r >> (128 - bits_));
  }

  std::uint64_t seed_;
  int bits_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Chained hash index over dense item ids, with every link write trailed.
// Items are filed in a bucket chosen by the top bits of their key (or by a
// scrambled key for structured keys), and lookups compare the full key.
class TrailedHashIndex {
 public:
  TrailedHashIndex() = default;
  TrailedHashIndex(int capacity, int key_bits, bool scramble);

  bool contains(int id) const { return present_[id] != 0; }
  std::uint64_t key(int id) const { return key_[id]; }
  int size() const { return count_[0]; }

  void insert(int id, std::uint64_t key, Trail& trail);
  void erase(int id, Trail& trail);
  void rekey(int id, std::uint64_t key, Trail& trail) {
    if (present_[id]) erase(id, trail);
    insert(id, key, trail);
  }

  template <class F>
  void for_each_with_key(std::uint64_t key, F&& f) const {
    for (int i = head_[bucket(key)]; i != kNone;) {
      const int next = next_[i];
      if (key_[i] == key) f(i);
      i = next;
    }
  }
  // Items sharing the bucket of key, including fingerprint mismatches.
  int bucket_load(std::uint64_t key) const;

  bool operator==(const TrailedHashIndex&) const = default;

 private:
  std::size_t bucket(std::uint64_t key) const;

  int key_bits_ = 64;
  int bucket_bits_ = 0;
  bool scramble_ = false;
  std::vector<std::int32_t> head_;
  std::vector<std::int32_t> next_, prev_, present_;
  std::vector<std::uint64_t> key_;
  std::vector<std::int32_t> count_ = {0};
};

}  // namespace mddc
