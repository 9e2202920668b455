#include "aasl/verifier.hpp"

#include <bit>
#include <string>

#include "aasl/authenticator.hpp"

namespace aasl {

namespace {

const std::optional<Digest> kEmptySlot;

std::string at(ElementIndex j) { return "element " + std::to_string(j); }

}  // namespace

// Basis

const std::optional<Digest>& Basis::slot(Level p) const { return p < slots_.size() ? slots_[p] : kEmptySlot; }

void Basis::set(Level p, Digest value) {
  if (p > kMaxLevel) throw std::out_of_range("basis slot beyond level 63");
  if (slots_.size() <= p) slots_.resize(static_cast<std::size_t>(p) + 1);
  slots_[p] = std::move(value);
}

void Basis::clear(Level p) {
  if (p < slots_.size()) slots_[p].reset();
  trim();
}

std::uint64_t Basis::population() const {
  std::uint64_t bits = 0;
  for (std::size_t p = 0; p < slots_.size(); ++p) {
    if (slots_[p]) bits |= std::uint64_t{1} << p;
  }
  return bits;
}

void Basis::trim() {
  while (!slots_.empty() && !slots_.back()) slots_.pop_back();
}

// Membership

Checked<Digest> process_component(const HashConfig& hash, ElementIndex j, const ProofComponent& component) {
  if (j == 0 || j > kMaxElementIndex) return reject(RejectReason::kOutOfRange, at(j));
  const std::size_t expected = static_cast<std::size_t>(max_level(j)) + 1;
  if (component.predecessors.size() != expected) {
    return reject(RejectReason::kComponentMalformed, at(j) + " carries " +
                                                         std::to_string(component.predecessors.size()) +
                                                         " predecessors, expected " + std::to_string(expected));
  }
  for (const Digest& pred : component.predecessors) {
    if (pred.size() != hash.width()) return reject(RejectReason::kComponentMalformed, at(j) + " digest width");
  }
  return element_authenticator(hash, j, component.datum, component.predecessors);
}

VerificationOutcome verify_membership(const HashConfig& hash, const MembershipClaim& claim,
                                      const Digest& anchor_digest, const MembershipProof& proof) {
  const ElementIndex i = claim.position;
  const ElementIndex n = claim.anchor;
  if (i == 0 || i > n || n > kMaxElementIndex) {
    return VerificationOutcome::invalid(
        reject(RejectReason::kOutOfRange, "claim <" + std::to_string(i) + ", " + std::to_string(n) + ">"));
  }
  const auto& components = proof.components;
  if (components.empty()) return VerificationOutcome::invalid(reject(RejectReason::kCountMismatch, "empty proof"));
  for (const ProofComponent& c : components) {
    if (c.datum.size() != components.front().datum.size()) {
      return VerificationOutcome::invalid(reject(RejectReason::kComponentMalformed, "datum widths differ"));
    }
  }

  Checked<Digest> first = process_component(hash, i, components.front());
  if (!first) return VerificationOutcome::invalid(first.error());
  Digest previous = std::move(first).value();

  std::size_t consumed = 1;
  for (ElementIndex j = i; j < n; ++consumed) {
    const Level l = hop_level(j, n);
    j += level_span(l);
    if (consumed >= components.size()) {
      return VerificationOutcome::invalid(reject(RejectReason::kCountMismatch, "proof ends before " + at(j)));
    }
    const ProofComponent& c = components[consumed];
    Checked<Digest> current = process_component(hash, j, c);
    if (!current) return VerificationOutcome::invalid(current.error());
    if (c.predecessors[l] != previous) {
      return VerificationOutcome::invalid(reject(RejectReason::kContinuityBreak, at(j) + " level " + std::to_string(l)));
    }
    previous = std::move(current).value();
  }
  if (consumed != components.size()) {
    return VerificationOutcome::invalid(reject(RejectReason::kCountMismatch,
                                               std::to_string(components.size()) + " components, path needs " +
                                                   std::to_string(consumed)));
  }
  if (previous != anchor_digest) return VerificationOutcome::invalid(reject(RejectReason::kAnchorMismatch));

  return components.front().datum == claim.datum ? VerificationOutcome::claim_true()
                                                 : VerificationOutcome::claim_false();
}

// Advancement

Checked<Basis> process_advancement_component(ElementIndex j, const Digest& t, const Basis& basis,
                                             const ProofComponent& component, Level l) {
  if (l > kMaxLevel || j % level_span(l) != 0 || j >= kMaxElementIndex ||
      level_span(l) > kMaxElementIndex - j) {
    return reject(RejectReason::kOutOfRange, "level " + std::to_string(l) + " hop from " + at(j));
  }
  const ElementIndex destination = j + level_span(l);
  const std::size_t top = max_level(destination);
  if (component.predecessors.size() != top + 1) {
    return reject(RejectReason::kComponentMalformed, at(destination) + " carries " +
                                                         std::to_string(component.predecessors.size()) +
                                                         " predecessors, expected " + std::to_string(top + 1));
  }
  if (!basis.matches(j)) return reject(RejectReason::kBasisConflict, "basis does not mirror " + at(j));

  Basis next = basis;
  if (!next.occupied(l)) {
    next.set(l, t);
    return next;
  }

  // Carry: every occupied slot from l upward must match what this component
  // claims for the same authenticator, then moves up one position.
  Level c = l;
  Digest carry;
  while (next.occupied(c)) {
    if (static_cast<std::size_t>(c) + 1 > top) {
      return reject(RejectReason::kBasisConflict, "slot " + std::to_string(c) + " has no counterpart");
    }
    if (*next.slot(c) != component.predecessors[c + 1]) {
      return reject(RejectReason::kBasisConflict, "slot " + std::to_string(c));
    }
    carry = *next.slot(c);
    next.clear(c);
    ++c;
  }
  next.set(c, std::move(carry));
  return next;
}

Checked<VerifierState> verify_advancement(const HashConfig& hash, const VerifierState& state,
                                          ElementIndex new_size, const Digest& new_digest,
                                          const AdvancementProof& proof, const AdvancementObserver& observer) {
  if (new_size <= state.size || new_size > kMaxElementIndex) {
    return reject(RejectReason::kOutOfRange,
                  "advancement " + std::to_string(state.size) + " -> " + std::to_string(new_size));
  }
  if (new_digest.size() != hash.width() || state.digest.size() != hash.width()) {
    return reject(RejectReason::kComponentMalformed, "digest width");
  }
  const auto& components = proof.components;
  for (const ProofComponent& c : components) {
    if (c.datum.size() != components.front().datum.size()) {
      return reject(RejectReason::kComponentMalformed, "datum widths differ");
    }
  }

  Basis basis = state.basis;
  Digest previous = state.digest;
  std::size_t consumed = 0;
  for (ElementIndex j = state.size; j < new_size; ++consumed) {
    const Level l = hop_level(j, new_size);
    const ElementIndex destination = j + level_span(l);
    if (consumed >= components.size()) {
      return reject(RejectReason::kCountMismatch, "proof ends before " + at(destination));
    }
    const ProofComponent& c = components[consumed];

    Checked<Basis> next_basis = process_advancement_component(j, previous, basis, c, l);
    if (!next_basis) return next_basis.error();
    Checked<Digest> current = process_component(hash, destination, c);
    if (!current) return current.error();
    if (c.predecessors[l] != previous) {
      return reject(RejectReason::kContinuityBreak, at(destination) + " level " + std::to_string(l));
    }

    basis = std::move(next_basis).value();
    Digest source = std::exchange(previous, std::move(current).value());
    if (observer) observer({Hop{j, l, destination}, source, previous, basis});
    j = destination;
  }
  if (consumed != components.size()) {
    return reject(RejectReason::kCountMismatch, std::to_string(components.size()) + " components, path needs " +
                                                    std::to_string(consumed));
  }
  if (previous != new_digest) return reject(RejectReason::kAnchorMismatch);
  return VerifierState{new_size, new_digest, std::move(basis)};
}

Checked<TemporalOrder> check_temporal_order(const HashConfig& hash, const MembershipClaim& claim_a,
                                            const MembershipProof& proof_a, const Digest& digest_a,
                                            const MembershipClaim& claim_b,
                                            const MembershipProof& proof_b, const Digest& digest_b) {
  VerificationOutcome a = verify_membership(hash, claim_a, digest_a, proof_a);
  if (a.is_invalid()) return *a.rejection;
  VerificationOutcome b = verify_membership(hash, claim_b, digest_b, proof_b);
  if (b.is_invalid()) return *b.rejection;
  if (a.is_true() && b.is_true() && claim_a.anchor <= claim_b.position) return TemporalOrder::kABeforeB;
  return TemporalOrder::kNoOrderEstablished;
}

// Serialization

Bytes serialize_state(const VerifierState& state) {
  Bytes out;
  put_be(out, state.size, 8);
  out.insert(out.end(), state.digest.bytes().begin(), state.digest.bytes().end());
  const std::size_t slots = state.basis.slot_count();
  out.push_back(static_cast<std::uint8_t>(slots));
  Bytes bitmap((slots + 7) / 8, 0);
  for (std::size_t p = 0; p < slots; ++p) {
    if (state.basis.occupied(static_cast<Level>(p))) bitmap[p / 8] |= static_cast<std::uint8_t>(1u << (p % 8));
  }
  out.insert(out.end(), bitmap.begin(), bitmap.end());
  for (std::size_t p = 0; p < slots; ++p) {
    const auto& slot = state.basis.slot(static_cast<Level>(p));
    if (slot) out.insert(out.end(), slot->bytes().begin(), slot->bytes().end());
  }
  return out;
}

VerifierState parse_state(ByteView bytes, std::size_t digest_width) {
  std::size_t pos = 0;
  auto take = [&](std::size_t n) {
    if (bytes.size() - pos < n) throw StateFormatError("verifier state truncated");
    ByteView view = bytes.subspan(pos, n);
    pos += n;
    return view;
  };

  VerifierState state;
  state.size = get_be(take(8), 8);
  if (state.size > kMaxElementIndex) throw StateFormatError("verifier state size exceeds 2^63");
  state.digest = Digest(take(digest_width));
  const std::size_t slots = take(1)[0];
  if (slots != static_cast<std::size_t>(std::bit_width(state.size))) {
    throw StateFormatError("slot count does not match state size");
  }
  ByteView bitmap = take((slots + 7) / 8);
  for (std::size_t p = 0; p < bitmap.size() * 8; ++p) {
    const bool bit = (bitmap[p / 8] >> (p % 8)) & 1u;
    const bool expected = p < 64 && ((state.size >> p) & 1u);
    if (bit != expected) throw StateFormatError("basis bitmap does not mirror state size");
    if (bit) state.basis.set(static_cast<Level>(p), Digest(take(digest_width)));
  }
  if (pos != bytes.size()) throw StateFormatError("trailing bytes after verifier state");
  return state;
}

}  // namespace aasl
