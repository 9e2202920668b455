#include "aasl/skiplist_math.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace aasl {

Level max_level(ElementIndex i) {
  if (i == 0) throw std::invalid_argument("max_level is undefined for element 0");
  return static_cast<Level>(std::countr_zero(i));
}

Level hop_level(ElementIndex i, ElementIndex n) {
  if (i >= n) {
    throw std::invalid_argument("hop_level requires i < n (got " + std::to_string(i) + ", " +
                                std::to_string(n) + ")");
  }
  if (n > kMaxElementIndex) throw std::out_of_range("element index exceeds 2^63");

  // 0 is divisible by every power of two; the overshoot test bounds the loop.
  Level top = i == 0 ? kMaxLevel : max_level(i);
  ElementIndex remaining = n - i;
  Level best = 0;
  for (Level l = 0; l <= top; ++l) {
    if (level_span(l) > remaining) break;
    best = l;
  }
  return best;
}

TraversalPath traversal_path(ElementIndex i, ElementIndex n) {
  if (i > n) throw std::invalid_argument("traversal_path requires i <= n");
  TraversalPath path;
  for (ElementIndex j = i; j < n;) {
    Level l = hop_level(j, n);
    ElementIndex next = j + level_span(l);
    path.push_back({j, l, next});
    j = next;
  }
  return path;
}

std::size_t traversal_length(ElementIndex i, ElementIndex n) {
  if (i > n) throw std::invalid_argument("traversal_length requires i <= n");
  std::size_t count = 1;
  for (ElementIndex j = i; j < n; ++count) j += level_span(hop_level(j, n));
  return count;
}

}  // namespace aasl
