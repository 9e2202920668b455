#pragma once

#include <span>

#include "aasl/bytes.hpp"
#include "aasl/hash.hpp"
#include "aasl/skiplist_math.hpp"

namespace aasl {

// Hash-input layout, bit-exact across implementations:
//   index (8 bytes, big-endian) || level (1 byte) || datum || predecessor digest
Bytes encode_hash_input(ElementIndex i, Level l, const Datum& datum, const Digest& pred);

/// L_i^l: binds element i's datum to its level-l predecessor authenticator.
/// Throws std::invalid_argument when l > max_level(i).
Digest partial_authenticator(const HashConfig& hash, ElementIndex i, Level l, const Datum& datum,
                             const Digest& pred);

/// T^i: hash of the partial authenticators for levels 0..max_level(i), in
/// level order. preds[l] is the claimed authenticator of element i - 2^l.
/// The outer hash is applied for every element, odd ones included.
Digest element_authenticator(const HashConfig& hash, ElementIndex i, const Datum& datum,
                             std::span<const Digest> preds);

/// Authenticator of sentinel element 0 unless a log overrides it.
Digest genesis_digest(const HashConfig& hash);

}  // namespace aasl
