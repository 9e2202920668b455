// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any fails.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "aasl/aasl.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using namespace aasl;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Datum random_datum(std::mt19937_64& rng, std::size_t length) {
  Bytes b(length);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return Datum(std::move(b));
}

std::vector<Datum> fill(Log& log, ElementIndex count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Datum> data{Datum{}};
  const Bytes insensitive(log.config().insensitive_length, 0);
  for (ElementIndex k = 1; k <= count; ++k) {
    data.push_back(random_datum(rng, log.config().sensitive_length));
    log.append(data.back(), insensitive);
  }
  return data;
}

Basis canonical_basis(const Log& log, ElementIndex j) {
  Basis b;
  for (Level p = 0; p < 64; ++p) {
    if ((j >> p) & 1u) b.set(p, log.digest_at(j & ~((ElementIndex{2} << p) - 1)));
  }
  return b;
}

VerifierState canonical_state(const Log& log, ElementIndex j) { return {j, log.digest_at(j), canonical_basis(log, j)}; }

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("aasl-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

Bytes slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void spill(const fs::path& p, ByteView bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// 1
Verdict worked_example() {
  Log log = create_log({});
  fill(log, 10, 1);
  const auto a09 = log.build_advancement_proof(0, 9);
  const auto a910 = log.build_advancement_proof(9, 10);
  std::ostringstream shapes;
  bool ok = a09.components.size() == 2 && a910.components.size() == 1;
  if (ok) {
    ok = a09.components[0].datum == log.entry(8).record.sensitive && a09.components[0].predecessors.size() == 4 &&
         a09.components[1].datum == log.entry(9).record.sensitive && a09.components[1].predecessors.size() == 1 &&
         a910.components[0].datum == log.entry(10).record.sensitive && a910.components[0].predecessors.size() == 2;
    shapes << "<d8;" << a09.components[0].predecessors.size() << "> <d9;" << a09.components[1].predecessors.size()
           << "> <d10;" << a910.components[0].predecessors.size() << ">";
  }
  const auto s9 = verify_advancement(log.config().hash, VerifierState::fresh(log.digest_at(0)), 9, log.digest_at(9), a09);
  std::string slots;
  if (s9.ok()) {
    for (Level p = 0; p < s9.value().basis.slot_count(); ++p) {
      if (s9.value().basis.occupied(p)) slots += (slots.empty() ? "" : ",") + std::to_string(p);
    }
    ok = ok && s9.value().basis.population() == 0b1001 && *s9.value().basis.slot(0) == log.digest_at(8) &&
         *s9.value().basis.slot(3) == log.digest_at(0);
  } else {
    ok = false;
  }
  return {ok, shapes.str() + ", basis slots {" + slots + "}"};
}

// 2
Verdict need_for_bases() {
  Log prefix = create_log({});
  fill(prefix, 7, 2);
  std::mt19937_64 rng(3);
  const Datum d8 = random_datum(rng, 32), d8_alt = random_datum(rng, 32);
  const ForgeryKit kit = build_forgery(prefix, d8, d8_alt, random_datum(rng, 32), random_datum(rng, 32));
  const bool v1 = verify_membership(kit.hash, {8, 9, kit.d8_alt}, kit.t9, kit.member_8_at_9).is_true();
  const bool v2 = verify_membership(kit.hash, {8, 10, kit.d8}, kit.t10, kit.member_8_at_10).is_true();
  const auto s9 = verify_advancement(kit.hash, VerifierState::fresh(kit.prefix[0]), 9, kit.t9, kit.advance_0_9);
  std::string second = "not reached";
  bool caught = false;
  if (s9.ok()) {
    const auto s10 = verify_advancement(kit.hash, s9.value(), 10, kit.t10, kit.advance_9_10);
    caught = !s10.ok() && s10.error().reason == RejectReason::kBasisConflict;
    second = s10.ok() ? "accepted" : std::string(to_string(s10.error().reason));
  }
  return {v1 && v2 && caught, std::string("stateless <8,9,d8'> ") + (v1 ? "TRUE" : "not TRUE") + ", <8,10,d8> " +
                                  (v2 ? "TRUE" : "not TRUE") + ", advance 9->10 " + second};
}

// 3
Verdict round_trip() {
  Log log = create_log({});
  const auto data = fill(log, 1024, 4);
  const HashConfig& h = log.config().hash;
  std::vector<std::pair<ElementIndex, ElementIndex>> pairs;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10000; ++k) {
    const ElementIndex n = std::uniform_int_distribution<ElementIndex>(1, 1024)(rng);
    pairs.emplace_back(std::uniform_int_distribution<ElementIndex>(1, n)(rng), n);
  }
  for (ElementIndex n : {1u, 2u, 3u, 1024u}) {
    for (ElementIndex i = 1; i <= n; ++i) pairs.emplace_back(i, n);
  }
  std::size_t failures = 0;
  for (auto [i, n] : pairs) {
    if (!verify_membership(h, {i, n, data[i]}, log.digest_at(n), log.build_membership_proof(i, n)).is_true()) {
      ++failures;
    }
  }
  return {failures == 0, std::to_string(pairs.size()) + " pairs, " + std::to_string(failures) + " failures"};
}

// 4
Verdict tamper_evidence() {
  std::mt19937_64 rng(6);
  std::size_t wrong_true = 0, missed_audits = 0;
  std::size_t proof_flips = 0, data_flips = 0, auth_flips = 0;

  {
    Log log = create_log({});
    const auto data = fill(log, 1024, 7);
    const HashConfig& h = log.config().hash;
    for (; proof_flips < 6000; ++proof_flips) {
      const ElementIndex n = std::uniform_int_distribution<ElementIndex>(1, 1024)(rng);
      const ElementIndex i = std::uniform_int_distribution<ElementIndex>(1, n)(rng);
      Bytes wire = encode_proof(log.build_membership_proof(i, n));
      const std::size_t bit = std::uniform_int_distribution<std::size_t>(0, wire.size() * 8 - 1)(rng);
      wire[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      MembershipProof proof;
      try {
        proof = decode_membership_proof(wire, 32, h.width());
      } catch (const ProofFormatError&) {
        continue;
      }
      if (proof.components.empty()) continue;
      const Datum claimed = proof.components.front().datum;
      if (claimed != data[i] && verify_membership(h, {i, n, claimed}, log.digest_at(n), proof).is_true()) ++wrong_true;
    }
  }

  const fs::path dir = scratch_dir();
  const fs::path path = dir / "tamper.aasl";
  std::vector<Datum> data;
  std::vector<Digest> honest;
  {
    Log log = open_or_create(path, {32, 0, {}, {}});
    data = fill(log, 256, 8);
    for (ElementIndex k = 0; k <= 256; ++k) honest.push_back(log.digest_at(k));
  }
  const std::size_t record = 32 + 32;
  int fd = ::open(path.c_str(), O_RDWR);
  Log reader = open_log(path, OpenMode::kReadOnly);
  const HashConfig& h = reader.config().hash;
  auto flip = [&](std::uint64_t offset, int bit) {
    std::uint8_t b = 0;
    if (::pread(fd, &b, 1, static_cast<off_t>(offset)) != 1) throw std::runtime_error("pread");
    b ^= static_cast<std::uint8_t>(1u << bit);
    if (::pwrite(fd, &b, 1, static_cast<off_t>(offset)) != 1) throw std::runtime_error("pwrite");
  };
  for (int trial = 0; trial < 4000; ++trial) {
    const ElementIndex j = std::uniform_int_distribution<ElementIndex>(1, 256)(rng);
    const bool in_data = trial % 2 == 0;
    const std::uint64_t offset = kPreambleSize + j * record + (in_data ? 0 : 32) +
                                 std::uniform_int_distribution<std::uint64_t>(0, 31)(rng);
    const int bit = static_cast<int>(rng() % 8);
    flip(offset, bit);
    (in_data ? data_flips : auth_flips)++;

    const AuditReport report = audit_file(reader);
    if (report.clean() || *report.first_mismatch != j) ++missed_audits;

    // A proof served from the tampered store, checked against the honest
    // digest the verifier already holds.
    const ElementIndex n = std::uniform_int_distribution<ElementIndex>(j, 256)(rng);
    const Datum served = reader.entry(j).record.sensitive;
    const auto outcome = verify_membership(h, {j, n, served}, honest[n], reader.build_membership_proof(j, n));
    if (served != data[j] && outcome.is_true()) ++wrong_true;
    flip(offset, bit);
  }
  ::close(fd);
  fs::remove_all(dir);

  const std::size_t total = proof_flips + data_flips + auth_flips;
  return {wrong_true == 0 && missed_audits == 0 && total >= 10000,
          std::to_string(total) + " flips (" + std::to_string(proof_flips) + " proof, " + std::to_string(data_flips) +
              " data, " + std::to_string(auth_flips) + " authenticator), " + std::to_string(wrong_true) +
              " wrong TRUE, " + std::to_string(missed_audits) + " missed audits"};
}

// 5
Verdict proof_size() {
  constexpr ElementIndex n = ElementIndex{1} << 20;
  Log log = create_log({8, 0, {}, {}});
  for (ElementIndex k = 1; k <= n; ++k) {
    Bytes d;
    put_be(d, k, 8);
    log.append(Datum(std::move(d)));
  }
  const auto proof = log.build_membership_proof(1, n);
  const bool verified =
      verify_membership(log.config().hash, {1, n, log.entry(1).record.sensitive}, log.digest(), proof).is_true();
  const std::size_t count = proof.components.size();
  return {count <= 41 && verified, "n = 2^20, i = 1: " + std::to_string(count) + " components (bound 41)" +
                                       (verified ? "" : ", proof did not verify")};
}

// 6
Verdict invariant_suites() {
  std::uint64_t violations = 0;
  std::uint64_t hops = 0;
  for (ElementIndex n = 1; n <= 512; ++n) {
    for (ElementIndex i = 0; i < n; ++i) {
      for (const Hop& hop : traversal_path(i, n)) {
        ++hops;
        const ElementIndex span = level_span(hop.level);
        if (hop.source % span || hop.destination % span || hop.destination > n) ++violations;
      }
    }
  }

  Log log = create_log({8, 0, {}, {}});
  fill(log, 4096, 9);
  const HashConfig& h = log.config().hash;
  auto step = [&](const VerifierState& s, ElementIndex to) {
    return verify_advancement(h, s, to, log.digest_at(to), log.build_advancement_proof(s.size, to));
  };

  std::vector<VerifierState> canonical;
  for (ElementIndex j = 0; j <= 20; ++j) canonical.push_back(canonical_state(log, j));
  std::uint64_t partitions = 0;
  std::vector<VerifierState> stack{VerifierState::fresh(log.digest_at(0))};
  while (!stack.empty()) {
    VerifierState s = std::move(stack.back());
    stack.pop_back();
    for (ElementIndex next = s.size + 1; next <= 20; ++next) {
      auto r = step(s, next);
      ++partitions;
      if (!r.ok() || !r.value().basis.matches(next) || !(r.value() == canonical[next])) {
        ++violations;
        continue;
      }
      stack.push_back(std::move(r).value());
    }
  }

  std::mt19937_64 rng(10);
  int walks = 0;
  for (; walks < 300; ++walks) {
    const ElementIndex target = std::uniform_int_distribution<ElementIndex>(1, 4096)(rng);
    VerifierState s = VerifierState::fresh(log.digest_at(0));
    while (s.size < target) {
      const ElementIndex room = target - s.size;
      const ElementIndex stride = rng() % 2
                                      ? std::uniform_int_distribution<ElementIndex>(1, std::min<ElementIndex>(room, 8))(rng)
                                      : std::uniform_int_distribution<ElementIndex>(1, room)(rng);
      auto r = step(s, s.size + stride);
      if (!r.ok()) {
        ++violations;
        break;
      }
      s = std::move(r).value();
      if (!s.basis.matches(s.size)) ++violations;
    }
    if (!(s == canonical_state(log, target))) ++violations;
  }
  return {violations == 0, std::to_string(hops) + " hops, " + std::to_string(partitions) +
                               " partition prefixes to 20, " + std::to_string(walks) + " random walks to <= 4096, " +
                               std::to_string(violations) + " violations"};
}

// 7
Verdict fixture() {
  const fs::path dir = AASL_FIXTURE_DIR;
  Log log = open_log(dir / "conformance10.aasl", OpenMode::kReadOnly);
  std::ifstream in(dir / "conformance10.digests");
  ElementIndex k = 0;
  std::string hex;
  int rows = 0, mismatches = 0;
  while (in >> k >> hex) {
    ++rows;
    if (k > log.size() || log.digest_at(k).hex() != hex) ++mismatches;
  }
  const bool clean = audit_file(log).clean();
  return {rows == 11 && mismatches == 0 && clean && log.size() == 10,
          std::to_string(rows) + " digests compared, " + std::to_string(mismatches) + " mismatches, audit " +
              (clean ? "clean" : "flagged")};
}

// 8
Verdict state_file_untouched() {
  const fs::path dir = scratch_dir();
  const auto path = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream sink;
  const auto cli = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };

  Log prefix = create_log({});
  fill(prefix, 7, 11);
  std::mt19937_64 rng(12);
  const ForgeryKit kit = build_forgery(prefix, random_datum(rng, 32), random_datum(rng, 32), random_datum(rng, 32),
                                       random_datum(rng, 32));
  spill(path("v1"), encode_proof(kit.advance_0_9));
  spill(path("forged"), encode_proof(kit.advance_9_10));

  Log honest = create_log({});
  fill(honest, 40, 13);
  spill(path("h0_20"), encode_proof(honest.build_advancement_proof(0, 20)));
  const AdvancementProof h20_40 = honest.build_advancement_proof(20, 40);
  spill(path("h20_40"), encode_proof(h20_40));

  struct Attempt {
    std::string label;
    std::string state;
    std::vector<std::string> args;
  };
  std::vector<Attempt> attempts;
  const auto av = [&](const std::string& proof, const std::string& state, ElementIndex to, const Digest& d) {
    return std::vector<std::string>{"advance-verify", path(proof), "--state", path(state), "--to",
                                    std::to_string(to), "--digest", d.hex(), "--sensitive-len", "32"};
  };

  if (cli(av("v1", "forgery.state", 9, kit.t9)) != cli::kExitOk) return {false, "setup: version 1 not accepted"};
  if (cli(av("h0_20", "honest.state", 20, honest.digest_at(20))) != cli::kExitOk) {
    return {false, "setup: honest 0->20 not accepted"};
  }
  attempts.push_back({"forged 9->10", "forgery.state", av("forged", "forgery.state", 10, kit.t10)});
  attempts.push_back({"wrong digest", "honest.state", av("h20_40", "honest.state", 40, honest.digest_at(39))});
  attempts.push_back({"wrong size", "honest.state", av("h20_40", "honest.state", 39, honest.digest_at(40))});
  attempts.push_back({"stale target", "honest.state", av("h0_20", "honest.state", 20, honest.digest_at(20))});
  attempts.push_back({"replayed proof", "honest.state", av("h0_20", "honest.state", 40, honest.digest_at(40))});

  auto truncated = h20_40;
  truncated.components.pop_back();
  spill(path("short"), encode_proof(truncated));
  attempts.push_back({"missing component", "honest.state", av("short", "honest.state", 40, honest.digest_at(40))});
  auto padded = h20_40;
  padded.components.push_back(h20_40.components.back());
  spill(path("long"), encode_proof(padded));
  attempts.push_back({"extra component", "honest.state", av("long", "honest.state", 40, honest.digest_at(40))});

  const Bytes wire = encode_proof(h20_40);
  for (int k = 0; k < 64; ++k) {
    Bytes flipped = wire;
    const std::size_t bit = std::uniform_int_distribution<std::size_t>(0, wire.size() * 8 - 1)(rng);
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    const std::string name = "flip" + std::to_string(k);
    spill(path(name), flipped);
    attempts.push_back({"bit flip " + std::to_string(bit), "honest.state", av(name, "honest.state", 40,
                                                                              honest.digest_at(40))});
  }

  int changed = 0, accepted = 0;
  for (const Attempt& a : attempts) {
    const Digest before = hash_bytes({}, slurp(path(a.state)));
    if (cli(a.args) == cli::kExitOk) ++accepted;
    if (hash_bytes({}, slurp(path(a.state))) != before) ++changed;
  }
  fs::remove_all(dir);
  return {changed == 0 && accepted == 0, std::to_string(attempts.size()) + " rejected advancements, " +
                                              std::to_string(accepted) + " accepted, " + std::to_string(changed) +
                                              " state files changed"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "worked example", 1.0, worked_example},
      {2, "need for bases", 1.0, need_for_bases},
      {3, "round-trip completeness", 30.0, round_trip},
      {4, "tamper evidence", 60.0, tamper_evidence},
      {5, "logarithmic proof size", 0.0, proof_size},
      {6, "invariant suites", 60.0, invariant_suites},
      {7, "conformance fixture", 0.0, fixture},
      {8, "state file untouched on rejection", 0.0, state_file_untouched},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s <= 0 || seconds < c.budget_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    char timing[64];
    if (c.budget_s > 0) {
      std::snprintf(timing, sizeof timing, "%.2f s, budget %.0f s", seconds, c.budget_s);
    } else {
      std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    }
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.name << ": " << v.detail
              << " [" << timing << "]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
