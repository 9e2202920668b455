#pragma once

#include <cstdint>
#include <vector>

namespace aasl {

/// 1-based position of a real element; 0 is the genesis sentinel.
using ElementIndex = std::uint64_t;
/// Linked-list level; element i sits on level l iff 2^l divides i.
using Level = std::uint8_t;

inline constexpr ElementIndex kMaxElementIndex = ElementIndex{1} << 63;
inline constexpr Level kMaxLevel = 63;

constexpr ElementIndex level_span(Level l) { return ElementIndex{1} << l; }

/// Highest level element i participates in (trailing zero bits of i).
/// Throws std::invalid_argument for i == 0.
Level max_level(ElementIndex i);

/// Level of the single greedy hop from i toward n: the largest L with
/// 2^L | i and i + 2^L <= n. Requires i < n <= kMaxElementIndex.
Level hop_level(ElementIndex i, ElementIndex n);

struct Hop {
  ElementIndex source;
  Level level;
  ElementIndex destination;

  friend bool operator==(const Hop&, const Hop&) = default;
};

using TraversalPath = std::vector<Hop>;

/// Greedy i -> n traversal. Empty when i == n; throws when i > n.
TraversalPath traversal_path(ElementIndex i, ElementIndex n);

/// Number of elements visited by traversal_path(i, n), including both ends.
std::size_t traversal_length(ElementIndex i, ElementIndex n);

}  // namespace aasl
