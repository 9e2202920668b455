#pragma once

#include <stdexcept>
#include <vector>

#include "aasl/bytes.hpp"

namespace aasl {

/// C^j: element j's datum plus the authenticators T^{j-2^l} of its
/// predecessors, levels 0..max_level(j) in order.
struct ProofComponent {
  Datum datum;
  std::vector<Digest> predecessors;

  friend bool operator==(const ProofComponent&, const ProofComponent&) = default;
};

/// One component per element on the i -> n traversal, element i first.
struct MembershipProof {
  std::vector<ProofComponent> components;

  friend bool operator==(const MembershipProof&, const MembershipProof&) = default;
};

/// One component per traversal element strictly after i.
struct AdvancementProof {
  std::vector<ProofComponent> components;

  friend bool operator==(const AdvancementProof&, const AdvancementProof&) = default;
};

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wire format:
//   proof     = component count (2 bytes, big-endian) || component*
//   component = datum || predecessor count (1 byte) || predecessor digests
// Datum and digest widths are not self-described; the reader supplies them.
Bytes encode_components(const std::vector<ProofComponent>& components);
std::vector<ProofComponent> decode_components(ByteView wire, std::size_t datum_length,
                                              std::size_t digest_width);

inline Bytes encode_proof(const MembershipProof& proof) { return encode_components(proof.components); }
inline Bytes encode_proof(const AdvancementProof& proof) { return encode_components(proof.components); }

inline MembershipProof decode_membership_proof(ByteView wire, std::size_t datum_length,
                                               std::size_t digest_width) {
  return {decode_components(wire, datum_length, digest_width)};
}
inline AdvancementProof decode_advancement_proof(ByteView wire, std::size_t datum_length,
                                                 std::size_t digest_width) {
  return {decode_components(wire, datum_length, digest_width)};
}

}  // namespace aasl
