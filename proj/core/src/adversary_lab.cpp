#include "aasl/adversary_lab.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "aasl/authenticator.hpp"
#include "aasl/storage.hpp"

namespace aasl {

namespace {

constexpr std::uint32_t kDatumLength = 32;

Datum seeded_datum(const HashConfig& hash, std::uint64_t seed, std::uint64_t k) {
  Bytes input{'l', 'a', 'b'};
  put_be(input, seed, 8);
  put_be(input, k, 8);
  Digest d = hash_bytes(hash, input);
  return Datum(d.bytes().first(kDatumLength));
}

std::vector<Datum> fill_log(Log& log, std::uint64_t seed, ElementIndex count) {
  std::vector<Datum> data{Datum{}};
  Bytes insensitive(log.config().insensitive_length, 0xab);
  for (ElementIndex k = 1; k <= count; ++k) {
    data.push_back(seeded_datum(log.config().hash, seed, k));
    log.append(data.back(), insensitive);
  }
  return data;
}

std::string describe(const VerificationOutcome& v) {
  if (v.is_true()) return "true";
  if (v.is_false()) return "false";
  return "rejected";
}

class Recorder {
 public:
  explicit Recorder(std::string name) { report_.name = std::move(name); }

  void add(std::string action, std::string outcome, std::string reason, bool expected) {
    report_.steps.push_back({report_.name, static_cast<int>(report_.steps.size()) + 1, std::move(action),
                             std::move(outcome), std::move(reason), expected});
  }

  void membership(std::string action, const VerificationOutcome& v, bool expected) {
    add(std::move(action), describe(v), v.rejection ? v.rejection->describe() : "", expected);
  }

  template <typename T>
  void checked(std::string action, const Checked<T>& c, bool expected) {
    add(std::move(action), c.ok() ? "accepted" : "rejected", c.ok() ? "" : c.error().describe(), expected);
  }

  void audit(std::string action, const AuditReport& r, bool expected) {
    add(std::move(action), r.clean() ? "clean" : "flagged",
        r.clean() ? "" : "first mismatch at element " + std::to_string(*r.first_mismatch), expected);
  }

  void note_conflict(const TrackingVerifier& v) { report_.conflicting_acceptance |= v.saw_conflict(); }

  ScenarioReport take() { return std::move(report_); }

 private:
  ScenarioReport report_;
};

std::filesystem::path scratch_path(std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  return std::filesystem::temp_directory_path() /
         ("aasl-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".aasl");
}

void flip_file_bit(const std::filesystem::path& path, std::uint64_t offset, unsigned bit) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(static_cast<std::streamoff>(offset));
  char byte = 0;
  f.read(&byte, 1);
  byte = static_cast<char>(byte ^ (1 << bit));
  f.seekp(static_cast<std::streamoff>(offset));
  f.write(&byte, 1);
}

ScenarioReport need_for_bases() {
  Recorder rec("need-for-bases");
  const HashConfig hash;
  Log prefix = create_log({kDatumLength, 0, hash, {}});
  fill_log(prefix, 1, 7);
  ForgeryKit kit = build_forgery(prefix, seeded_datum(hash, 1, 8), seeded_datum(hash, 1, 1008),
                                 seeded_datum(hash, 1, 9), seeded_datum(hash, 1, 10));

  TrackingVerifier verifier(hash, prefix.digest_at(0));
  auto v1 = verifier.advance(9, kit.t9, kit.advance_0_9);
  rec.checked("advance 0->9 (version 1, alternate datum at 8)", v1, v1.ok());
  auto v2 = verifier.advance(10, kit.t10, kit.advance_9_10);
  rec.checked("advance 9->10 (forged version 2)", v2,
              !v2.ok() && v2.error().reason == RejectReason::kBasisConflict);

  auto stateless_v1 = verify_membership(hash, {8, 9, kit.d8_alt}, kit.t9, kit.member_8_at_9);
  rec.membership("stateless membership <8, 9, alternate datum>", stateless_v1, stateless_v1.is_true());
  auto stateless_v2 = verify_membership(hash, {8, 10, kit.d8}, kit.t10, kit.member_8_at_10);
  rec.membership("stateless membership <8, 10, original datum>", stateless_v2, stateless_v2.is_true());

  auto tracked_v2 = verifier.check_membership({8, 10, kit.d8}, kit.member_8_at_10);
  rec.membership("tracked membership <8, 10, original datum>", tracked_v2, !tracked_v2.is_true());
  auto tracked_v1 = verifier.check_membership({8, 9, kit.d8_alt}, kit.member_8_at_9);
  rec.membership("tracked membership <8, 9, alternate datum>", tracked_v1, tracked_v1.is_true());
  rec.note_conflict(verifier);
  return rec.take();
}

ScenarioReport bit_flip_proof() {
  Recorder rec("bit-flip-proof");
  const HashConfig hash;
  Log log = create_log({kDatumLength, 0, hash, {}});
  auto data = fill_log(log, 2, 16);
  std::mt19937_64 rng(0x5eed0002);

  const MembershipProof honest = log.build_membership_proof(5, 16);
  rec.membership("honest membership <5, 16>", verify_membership(hash, {5, 16, data[5]}, log.digest(), honest), true);

  const Bytes wire = encode_proof(honest);
  for (int trial = 0; trial < 8; ++trial) {
    Bytes tampered = wire;
    const std::size_t bit = std::uniform_int_distribution<std::size_t>(0, wire.size() * 8 - 1)(rng);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    const std::string action = "membership <5, 16> with proof bit " + std::to_string(bit) + " flipped";
    try {
      MembershipProof proof = decode_membership_proof(tampered, kDatumLength, hash.width());
      auto v = verify_membership(hash, {5, 16, proof.components.front().datum}, log.digest(), proof);
      rec.membership(action, v, !v.is_true());
    } catch (const ProofFormatError& e) {
      rec.add(action, "rejected", std::string("undecodable: ") + e.what(), true);
    }
  }

  const VerifierState at5{5, log.digest_at(5), [&] {
                            Basis b;
                            b.set(0, log.digest_at(4));
                            b.set(2, log.digest_at(0));
                            return b;
                          }()};
  const Bytes adv_wire = encode_proof(log.build_advancement_proof(5, 16));
  for (int trial = 0; trial < 8; ++trial) {
    Bytes tampered = adv_wire;
    const std::size_t bit = std::uniform_int_distribution<std::size_t>(0, adv_wire.size() * 8 - 1)(rng);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    const std::string action = "advance 5->16 with proof bit " + std::to_string(bit) + " flipped";
    try {
      auto v = verify_advancement(hash, at5, 16, log.digest(),
                                  decode_advancement_proof(tampered, kDatumLength, hash.width()));
      rec.checked(action, v, !v.ok());
    } catch (const ProofFormatError& e) {
      rec.add(action, "rejected", std::string("undecodable: ") + e.what(), true);
    }
  }
  return rec.take();
}

ScenarioReport bit_flip_store() {
  Recorder rec("bit-flip-store");
  const auto path = scratch_path("bit-flip-store");
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() { std::filesystem::remove(p); }
  } cleanup{path};

  Log log = open_or_create(path, {kDatumLength, 4, HashConfig{}, {}});
  fill_log(log, 3, 16);
  const auto& store = dynamic_cast<const FileStore&>(log.store());
  const std::size_t auth_offset = kDatumLength + 4;

  auto untouched = audit_file(log);
  rec.audit("audit untouched file", untouched, untouched.clean());

  flip_file_bit(path, store.record_offset(6) + 3, 5);
  auto flipped_datum = audit_file(log);
  rec.audit("audit after flipping a sensitive bit of element 6", flipped_datum, flipped_datum.first_mismatch == 6u);
  flip_file_bit(path, store.record_offset(6) + 3, 5);

  flip_file_bit(path, store.record_offset(11) + auth_offset + 17, 0);
  auto flipped_auth = audit_file(log);
  rec.audit("audit after flipping an authenticator bit of element 11", flipped_auth,
            flipped_auth.first_mismatch == 11u);
  flip_file_bit(path, store.record_offset(11) + auth_offset + 17, 0);

  flip_file_bit(path, store.record_offset(9) + kDatumLength + 1, 7);
  auto flipped_insensitive = audit_file(log);
  rec.audit("audit after flipping an insensitive bit of element 9", flipped_insensitive,
            flipped_insensitive.clean());
  return rec.take();
}

ScenarioReport wrong_count() {
  Recorder rec("wrong-count");
  const HashConfig hash;
  Log log = create_log({kDatumLength, 0, hash, {}});
  auto data = fill_log(log, 4, 16);
  auto is_count = [](RejectReason r) { return r == RejectReason::kCountMismatch; };

  MembershipProof shorter = log.build_membership_proof(3, 13);
  shorter.components.pop_back();
  auto v1 = verify_membership(hash, {3, 13, data[3]}, log.digest_at(13), shorter);
  rec.membership("membership <3, 13> missing its last component", v1, v1.is_invalid() && is_count(v1.reason()));

  MembershipProof longer = log.build_membership_proof(3, 13);
  longer.components.push_back(longer.components.back());
  auto v2 = verify_membership(hash, {3, 13, data[3]}, log.digest_at(13), longer);
  rec.membership("membership <3, 13> with a duplicated trailing component", v2,
                 v2.is_invalid() && is_count(v2.reason()));

  auto v3 = verify_membership(hash, {3, 13, data[3]}, log.digest_at(13), MembershipProof{});
  rec.membership("membership <3, 13> with an empty proof", v3, v3.is_invalid() && is_count(v3.reason()));

  const VerifierState at4{4, log.digest_at(4), [&] {
                            Basis b;
                            b.set(2, log.digest_at(0));
                            return b;
                          }()};
  AdvancementProof adv_short = log.build_advancement_proof(4, 13);
  adv_short.components.pop_back();
  auto v4 = verify_advancement(hash, at4, 13, log.digest_at(13), adv_short);
  rec.checked("advance 4->13 missing its last component", v4, !v4.ok() && is_count(v4.error().reason));

  AdvancementProof adv_long = log.build_advancement_proof(4, 13);
  adv_long.components.push_back(adv_long.components.back());
  auto v5 = verify_advancement(hash, at4, 13, log.digest_at(13), adv_long);
  rec.checked("advance 4->13 with a duplicated trailing component", v5, !v5.ok() && is_count(v5.error().reason));
  return rec.take();
}

ScenarioReport replay_stale_digest() {
  Recorder rec("replay-stale-digest");
  const HashConfig hash;
  Log log = create_log({kDatumLength, 0, hash, {}});
  auto data = fill_log(log, 5, 16);

  TrackingVerifier verifier(hash, log.digest_at(0));
  rec.checked("advance 0->10", verifier.advance(10, log.digest_at(10), log.build_advancement_proof(0, 10)), true);
  const MembershipProof old_proof = log.build_membership_proof(4, 10);
  rec.membership("membership <4, 10> against the digest of size 10",
                 verifier.check_membership({4, 10, data[4]}, old_proof), true);
  rec.checked("advance 10->16", verifier.advance(16, log.digest(), log.build_advancement_proof(10, 16)), true);

  auto stale = verify_membership(hash, {4, 10, data[4]}, log.digest(), old_proof);
  rec.membership("old membership proof <4, 10> against the newest digest", stale,
                 stale.is_invalid() && stale.reason() == RejectReason::kAnchorMismatch);

  auto replayed = verifier.advance(10, log.digest_at(10), log.build_advancement_proof(0, 10));
  rec.checked("replay advance 0->10 at size 16", replayed, !replayed.ok());

  const VerifierState at10 = [&] {
    TrackingVerifier fresh(hash, log.digest_at(0));
    return fresh.advance(10, log.digest_at(10), log.build_advancement_proof(0, 10)).value();
  }();
  auto stale_target = verify_advancement(hash, at10, 16, log.digest_at(10), log.build_advancement_proof(10, 16));
  rec.checked("advance 10->16 claiming the size-10 digest", stale_target,
              !stale_target.ok() && stale_target.error().reason == RejectReason::kAnchorMismatch);
  rec.note_conflict(verifier);
  return rec.take();
}

}  // namespace

ForgeryKit build_forgery(const Log& prefix, const Datum& d8, const Datum& d8_alt, const Datum& d9,
                         const Datum& d10) {
  if (prefix.size() != 7) throw std::invalid_argument("forgery needs a prefix of exactly 7 elements");
  const LogConfig& cfg = prefix.config();
  for (const Datum* d : {&d8, &d8_alt, &d9, &d10}) {
    if (d->size() != cfg.sensitive_length) throw std::invalid_argument("forgery datum has the wrong length");
  }

  ForgeryKit kit;
  kit.hash = cfg.hash;
  for (ElementIndex k = 0; k <= 7; ++k) kit.prefix.push_back(prefix.digest_at(k));
  kit.d8 = d8;
  kit.d8_alt = d8_alt;
  kit.d9 = d9;
  kit.d10 = d10;

  const std::vector<Digest> preds8{kit.prefix[7], kit.prefix[6], kit.prefix[4], kit.prefix[0]};
  kit.t8 = element_authenticator(kit.hash, 8, d8, preds8);
  kit.t8_alt = element_authenticator(kit.hash, 8, d8_alt, preds8);
  kit.t9 = element_authenticator(kit.hash, 9, d9, std::vector<Digest>{kit.t8_alt});
  kit.t10 = element_authenticator(kit.hash, 10, d10, std::vector<Digest>{kit.t9, kit.t8});

  const ProofComponent c8{d8, preds8};
  const ProofComponent c8_alt{d8_alt, preds8};
  const ProofComponent c9{d9, {kit.t8_alt}};
  const ProofComponent c10{d10, {kit.t9, kit.t8}};

  kit.advance_0_9 = {{c8_alt, c9}};
  kit.advance_9_10 = {{c10}};
  kit.member_8_at_9 = {{c8_alt, c9}};
  kit.member_8_at_10 = {{c8, c10}};
  return kit;
}

TrackingVerifier::TrackingVerifier(HashConfig hash, Digest genesis)
    : hash_(hash), state_(VerifierState::fresh(std::move(genesis))) {
  accepted_digests_.emplace(0, state_.digest);
}

Checked<VerifierState> TrackingVerifier::advance(ElementIndex new_size, const Digest& new_digest,
                                                 const AdvancementProof& proof) {
  Checked<VerifierState> next = verify_advancement(hash_, state_, new_size, new_digest, proof);
  if (next) {
    state_ = next.value();
    accepted_digests_.emplace(new_size, new_digest);
  }
  return next;
}

VerificationOutcome TrackingVerifier::check_membership(const MembershipClaim& claim, const MembershipProof& proof) {
  auto held = accepted_digests_.find(claim.anchor);
  if (held == accepted_digests_.end()) {
    return VerificationOutcome::invalid(
        reject(RejectReason::kOutOfRange, "no accepted digest for size " + std::to_string(claim.anchor)));
  }
  VerificationOutcome outcome = verify_membership(hash_, claim, held->second, proof);
  if (outcome.is_true()) {
    auto [it, inserted] = proven_.emplace(claim.position, claim.datum);
    if (!inserted && it->second != claim.datum) conflict_ = true;
  }
  return outcome;
}

std::string ScenarioStep::line() const {
  std::string out = scenario + " step " + std::to_string(step) + ": " + action + " -> " + outcome;
  if (!reason.empty()) out += ": " + reason;
  out += expected ? " [expected]" : " [UNEXPECTED]";
  return out;
}

bool ScenarioReport::all_expected() const {
  if (conflicting_acceptance) return false;
  for (const auto& s : steps) {
    if (!s.expected) return false;
  }
  return true;
}

std::string ScenarioReport::text() const {
  std::string out;
  for (const auto& s : steps) out += s.line() + "\n";
  if (conflicting_acceptance) out += name + ": tracking verifier accepted conflicting claims\n";
  return out;
}

const std::vector<std::string_view>& scenario_names() {
  static const std::vector<std::string_view> names{"need-for-bases", "bit-flip-proof", "bit-flip-store",
                                                   "wrong-count", "replay-stale-digest"};
  return names;
}

ScenarioReport run_scenario(std::string_view name) {
  if (name == "need-for-bases") return need_for_bases();
  if (name == "bit-flip-proof") return bit_flip_proof();
  if (name == "bit-flip-store") return bit_flip_store();
  if (name == "wrong-count") return wrong_count();
  if (name == "replay-stale-digest") return replay_stale_digest();
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

}  // namespace aasl
