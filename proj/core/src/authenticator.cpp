#include "aasl/authenticator.hpp"

#include <stdexcept>
#include <string>

namespace aasl {

Bytes encode_hash_input(ElementIndex i, Level l, const Datum& datum, const Digest& pred) {
  Bytes out;
  out.reserve(9 + datum.size() + pred.size());
  put_be(out, i, 8);
  out.push_back(l);
  out.insert(out.end(), datum.bytes().begin(), datum.bytes().end());
  out.insert(out.end(), pred.bytes().begin(), pred.bytes().end());
  return out;
}

Digest partial_authenticator(const HashConfig& hash, ElementIndex i, Level l, const Datum& datum,
                             const Digest& pred) {
  if (l > max_level(i)) {
    throw std::invalid_argument("level " + std::to_string(l) + " out of range for element " +
                                std::to_string(i));
  }
  return hash_bytes(hash, encode_hash_input(i, l, datum, pred));
}

Digest element_authenticator(const HashConfig& hash, ElementIndex i, const Datum& datum,
                             std::span<const Digest> preds) {
  const Level top = max_level(i);
  if (preds.size() != static_cast<std::size_t>(top) + 1) {
    throw std::invalid_argument("element " + std::to_string(i) + " needs " + std::to_string(top + 1) +
                                " predecessors, got " + std::to_string(preds.size()));
  }
  Bytes partials;
  partials.reserve(preds.size() * hash.width());
  for (Level l = 0; l <= top; ++l) {
    Digest partial = hash_bytes(hash, encode_hash_input(i, l, datum, preds[l]));
    partials.insert(partials.end(), partial.bytes().begin(), partial.bytes().end());
  }
  return hash_bytes(hash, partials);
}

Digest genesis_digest(const HashConfig& hash) { return Digest::zeros(hash.width()); }

}  // namespace aasl
