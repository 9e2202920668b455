#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aasl/bytes.hpp"
#include "aasl/hash.hpp"
#include "aasl/outcome.hpp"
#include "aasl/proof.hpp"
#include "aasl/skiplist_math.hpp"

namespace aasl {

/// Reusable authenticators remembered across advancements. Slot p (LSB-first,
/// p == linked-list level) is populated iff bit p of the tracked index is set,
/// and then holds the authenticator of that index with bits 0..p cleared.
class Basis {
 public:
  const std::optional<Digest>& slot(Level p) const;
  bool occupied(Level p) const { return slot(p).has_value(); }
  void set(Level p, Digest value);
  void clear(Level p);

  /// Highest populated slot + 1.
  std::size_t slot_count() const { return slots_.size(); }
  /// Bit p set iff slot p is populated.
  std::uint64_t population() const;
  bool matches(ElementIndex j) const { return population() == j; }

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  void trim();

  std::vector<std::optional<Digest>> slots_;
};

/// Everything a verifier keeps per remote log.
struct VerifierState {
  ElementIndex size = 0;
  Digest digest;
  Basis basis;

  static VerifierState fresh(Digest genesis) { return {0, std::move(genesis), {}}; }

  friend bool operator==(const VerifierState&, const VerifierState&) = default;
};

/// "datum occupies position `position` of the log whose anchor-th
/// authenticator the verifier holds".
struct MembershipClaim {
  ElementIndex position = 0;
  ElementIndex anchor = 0;
  Datum datum;
};

struct VerificationOutcome {
  enum class Kind { kClaimTrue, kClaimFalse, kProofInvalid };

  Kind kind = Kind::kProofInvalid;
  std::optional<Rejection> rejection;

  static VerificationOutcome claim_true() { return {Kind::kClaimTrue, std::nullopt}; }
  static VerificationOutcome claim_false() { return {Kind::kClaimFalse, std::nullopt}; }
  static VerificationOutcome invalid(Rejection r) { return {Kind::kProofInvalid, std::move(r)}; }

  bool is_true() const { return kind == Kind::kClaimTrue; }
  bool is_false() const { return kind == Kind::kClaimFalse; }
  bool is_invalid() const { return kind == Kind::kProofInvalid; }
  /// Only meaningful when is_invalid().
  RejectReason reason() const { return rejection ? rejection->reason : RejectReason::kComponentMalformed; }
};

/// Recomputes T^j from C^j after checking it carries max_level(j) + 1
/// predecessors of the hash's width.
Checked<Digest> process_component(const HashConfig& hash, ElementIndex j, const ProofComponent& component);

VerificationOutcome verify_membership(const HashConfig& hash, const MembershipClaim& claim,
                                      const Digest& anchor_digest, const MembershipProof& proof);

/// Basis update for one level-l hop from j (whose authenticator is t) onto
/// j + 2^l, carried by `component`. Works like binary addition of 2^l: an empty
/// slot l takes t; otherwise each occupied slot c from l upward must agree
/// with the component's level-(c+1) predecessor and is carried upward.
Checked<Basis> process_advancement_component(ElementIndex j, const Digest& t, const Basis& basis,
                                             const ProofComponent& component, Level l);

/// Per-hop trace for instrumentation; called after each hop is accepted.
struct AdvancementHop {
  Hop hop;
  const Digest& source_digest;
  const Digest& destination_digest;
  const Basis& basis;
};
using AdvancementObserver = std::function<void(const AdvancementHop&)>;

/// Walks state.size -> new_size. On success returns the new state; on failure
/// the caller's state is untouched (it is taken by const reference).
Checked<VerifierState> verify_advancement(const HashConfig& hash, const VerifierState& state,
                                          ElementIndex new_size, const Digest& new_digest,
                                          const AdvancementProof& proof,
                                          const AdvancementObserver& observer = {});

enum class TemporalOrder { kABeforeB, kNoOrderEstablished };

/// Both claims must verify. A precedes B when A's anchor is no later than B's
/// position: A's datum was fixed before B's was appended.
Checked<TemporalOrder> check_temporal_order(const HashConfig& hash, const MembershipClaim& claim_a,
                                            const MembershipProof& proof_a, const Digest& digest_a,
                                            const MembershipClaim& claim_b,
                                            const MembershipProof& proof_b, const Digest& digest_b);

class StateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// size (8 bytes, big-endian) || digest || slot count (1 byte)
//   || population bitmap (ceil(slots/8) bytes, LSB-first) || populated digests, ascending slot
Bytes serialize_state(const VerifierState& state);
VerifierState parse_state(ByteView bytes, std::size_t digest_width);

}  // namespace aasl
