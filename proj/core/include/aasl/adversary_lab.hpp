#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aasl/log.hpp"
#include "aasl/verifier.hpp"

namespace aasl {

/// Artifacts of the evolutionary-collision forgery: a maintainer commits to
/// version 1 (elements 1..9) with d8_alt at position 8, then to version 2
/// (element 10) whose authenticator mixes in the T^8 built over d8.
///
/// Without a basis, a verifier accepts both membership proofs for position 8.
struct ForgeryKit {
  HashConfig hash;
  std::vector<Digest> prefix;  // T^0 .. T^7 of the honest prefix
  Datum d8, d8_alt, d9, d10;
  Digest t8;       // over d8
  Digest t8_alt;   // over d8_alt, same predecessors
  Digest t9;       // over t8_alt
  Digest t10;      // level 0 over t9, level 1 over t8

  AdvancementProof advance_0_9;    // version 1 commitment
  AdvancementProof advance_9_10;   // forged version 2 commitment
  MembershipProof member_8_at_9;   // authenticates d8_alt against t9
  MembershipProof member_8_at_10;  // authenticates d8 against t10
};

/// Builds the forgery directly from authenticator primitives. `prefix` must
/// hold exactly 7 elements.
ForgeryKit build_forgery(const Log& prefix, const Datum& d8, const Datum& d8_alt, const Datum& d9,
                         const Datum& d10);

/// Basis-tracking verifier that also remembers every digest it accepted and
/// every position it saw proven, so the lab can check it never accepts two
/// different data for one position.
class TrackingVerifier {
 public:
  TrackingVerifier(HashConfig hash, Digest genesis);

  Checked<VerifierState> advance(ElementIndex new_size, const Digest& new_digest, const AdvancementProof& proof);
  /// Only claims anchored at a digest this verifier accepted can succeed.
  VerificationOutcome check_membership(const MembershipClaim& claim, const MembershipProof& proof);

  const VerifierState& state() const { return state_; }
  bool saw_conflict() const { return conflict_; }

 private:
  HashConfig hash_;
  VerifierState state_;
  std::map<ElementIndex, Digest> accepted_digests_;
  std::map<ElementIndex, Datum> proven_;
  bool conflict_ = false;
};

struct ScenarioStep {
  std::string scenario;
  int step = 0;
  std::string action;
  std::string outcome;  // accepted | rejected | true | false | clean | flagged
  std::string reason;
  bool expected = false;

  std::string line() const;
};

struct ScenarioReport {
  std::string name;
  std::vector<ScenarioStep> steps;
  /// Set when any tracking verifier accepted conflicting claims.
  bool conflicting_acceptance = false;

  bool all_expected() const;
  std::string text() const;
};

const std::vector<std::string_view>& scenario_names();

/// Deterministic; throws std::invalid_argument for an unknown name.
ScenarioReport run_scenario(std::string_view name);

}  // namespace aasl
