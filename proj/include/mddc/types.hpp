#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mddc {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
inline constexpr std::int32_t kNone = -1;

// Edge label standing for every current value of the source layer.
inline constexpr int kWildcard = std::numeric_limits<int>::min();

// A single assignment (x_var, value). Used both for removal requests and for
// reporting domain losses.
struct Literal {
  int var = 0;
  int value = 0;
  auto operator<=>(const Literal&) const = default;
};

using Deltas = std::vector<Literal>;

enum class Status { ok, failed };

enum class EdgeMode { plain, long_edges, wildcard };
enum class ReduceMode { off, uniqueness, full };

// Raised when a constraint has no solutions at all; a decision diagram cannot
// represent the empty relation.
class EmptyConstraint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mddc
