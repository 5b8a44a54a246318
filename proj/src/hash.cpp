#include "mddc/hash.hpp"

#include <algorithm>
#include <stdexcept>

namespace mddc {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HashFamily::HashFamily(std::uint64_t seed, int bits) : seed_(seed), bits_(bits) {
  if (bits < 1 || bits > 64) throw std::invalid_argument("hash width must be in 1..64");
}

HashFamily::Coeffs HashFamily::slot(int kind, int p, int q) const {
  std::uint64_t s = seed_;
  s ^= splitmix64(s) + static_cast<std::uint64_t>(kind);
  s ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32 | static_cast<std::uint32_t>(q);
  const std::uint64_t a_hi = splitmix64(s), a_lo = splitmix64(s);
  const std::uint64_t b_hi = splitmix64(s), b_lo = splitmix64(s);
  return {(static_cast<unsigned __int128>(a_hi) << 64) | a_lo, (static_cast<unsigned __int128>(b_hi) << 64) | b_lo};
}

TrailedHashIndex::TrailedHashIndex(int capacity, int key_bits, bool scramble)
    : key_bits_(key_bits), scramble_(scramble) {
  const std::size_t want = std::bit_ceil(static_cast<std::size_t>(std::max(2, 2 * capacity)));
  bucket_bits_ = std::countr_zero(want);
  head_.assign(want, kNone);
  next_.assign(capacity, kNone);
  prev_.assign(capacity, kNone);
  present_.assign(capacity, 0);
  key_.assign(capacity, 0);
}

std::size_t TrailedHashIndex::bucket(std::uint64_t key) const {
  if (scramble_) {
    std::uint64_t s = key;
    return static_cast<std::size_t>(splitmix64(s) >> (64 - bucket_bits_));
  }
  if (key_bits_ >= bucket_bits_) return static_cast<std::size_t>(key >> (key_bits_ - bucket_bits_)) & (head_.size() - 1);
  return static_cast<std::size_t>(key) & (head_.size() - 1);
}

void TrailedHashIndex::insert(int id, std::uint64_t key, Trail& trail) {
  if (present_[id]) throw std::logic_error("hash index: item already present");
  trail.assign(key_[id], key);
  std::int32_t& h = head_[bucket(key)];
  trail.assign(prev_[id], kNone);
  trail.assign(next_[id], h);
  if (h != kNone) trail.assign(prev_[h], id);
  trail.assign(h, id);
  trail.assign(present_[id], 1);
  trail.increment(count_[0]);
}

void TrailedHashIndex::erase(int id, Trail& trail) {
  if (!present_[id]) return;
  const int p = prev_[id], n = next_[id];
  if (p != kNone)
    trail.assign(next_[p], n);
  else
    trail.assign(head_[bucket(key_[id])], n);
  if (n != kNone) trail.assign(prev_[n], p);
  trail.assign(present_[id], 0);
  trail.increment(count_[0], -1);
}

int TrailedHashIndex::bucket_load(std::uint64_t key) const {
  int load = 0;
  for (int i = head_[bucket(key)]; i != kNone; i = next_[i]) ++load;
  return load;
}

}  // namespace mddc
