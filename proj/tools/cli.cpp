#include "cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>

#include "aasl/aasl.hpp"

namespace aasl::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("short write to " + path.string());
}

// Write to a sibling temp file, fsync, then rename over the target.
void replace_file_atomically(const fs::path& path, ByteView bytes) {
  const fs::path tmp = path.string() + ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw UsageError("cannot write " + tmp.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      ::close(fd);
      throw UsageError("write failed on " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw UsageError("fsync failed on " + tmp.string());
  fs::rename(tmp, path);
}

/// "@path" reads raw bytes from a file; anything else is hex.
Bytes data_argument(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return read_file(arg.substr(1));
  try {
    return from_hex(arg);
  } catch (const std::invalid_argument& e) {
    throw UsageError("bad hex data: " + std::string(e.what()));
  }
}

Digest digest_argument(const std::string& hex, const HashConfig& hash) {
  Digest d = Digest::from_hex(hex);
  if (d.size() != hash.width()) {
    throw UsageError("digest is " + std::to_string(d.size()) + " bytes, " + std::string(hash.name()) + " needs " +
                     std::to_string(hash.width()));
  }
  return d;
}

MembershipClaim claim_argument(const std::string& text) {
  const auto first = text.find(',');
  const auto second = first == std::string::npos ? first : text.find(',', first + 1);
  if (second == std::string::npos) throw UsageError("--claim expects i,n,datum");
  try {
    return {std::stoull(text.substr(0, first)), std::stoull(text.substr(first + 1, second - first - 1)),
            Datum(data_argument(text.substr(second + 1)))};
  } catch (const std::logic_error&) {
    throw UsageError("--claim indices must be unsigned integers");
  }
}

struct Options {
  std::string log_path;
  std::string proof_path;
  std::string out_path;
  std::string state_path;
  std::string data;
  std::string insensitive;
  std::string genesis;
  std::string digest;
  std::string claim;
  std::string hash = "sha256";
  std::string scenario;
  std::uint32_t sensitive_len = 0;
  std::uint32_t insensitive_len = 0;
  std::uint64_t member = 0, anchor = 0, from = 0, to = 0;
  std::optional<std::uint64_t> at;
};

int cmd_init(const Options& o, std::ostream& out) {
  if (fs::exists(o.log_path)) throw UsageError(o.log_path + " already exists");
  LogConfig config{o.sensitive_len, o.insensitive_len, HashConfig::from_name(o.hash), {}};
  if (!o.genesis.empty()) config.genesis = Digest::from_hex(o.genesis);
  config.validate();
  Log log(FileStore::create(o.log_path, config));
  out << log.digest_at(0).hex() << "\n";
  return kExitOk;
}

int cmd_append(const Options& o, std::ostream& out) {
  Log log = open_log(o.log_path);
  const Bytes insensitive =
      o.insensitive.empty() ? Bytes(log.config().insensitive_length, 0) : data_argument(o.insensitive);
  AppendResult r = log.append(Datum(data_argument(o.data)), insensitive);
  out << r.index << " " << r.authenticator.hex() << "\n";
  return kExitOk;
}

int cmd_digest(const Options& o, std::ostream& out) {
  Log log = open_log(o.log_path, OpenMode::kReadOnly);
  const ElementIndex n = o.at.value_or(log.size());
  out << n << " " << log.digest_at(n).hex() << "\n";
  return kExitOk;
}

int cmd_prove(const Options& o, std::ostream& out) {
  Log log = open_log(o.log_path, OpenMode::kReadOnly);
  MembershipProof proof = log.build_membership_proof(o.member, o.anchor);
  write_file(o.out_path, encode_proof(proof));
  out << proof.components.size() << "\n";
  return kExitOk;
}

int cmd_advance(const Options& o, std::ostream& out) {
  Log log = open_log(o.log_path, OpenMode::kReadOnly);
  AdvancementProof proof = log.build_advancement_proof(o.from, o.to);
  write_file(o.out_path, encode_proof(proof));
  out << proof.components.size() << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const HashConfig hash = HashConfig::from_name(o.hash);
  const MembershipClaim claim = claim_argument(o.claim);
  const Digest anchor = digest_argument(o.digest, hash);
  const Bytes wire = read_file(o.proof_path);

  VerificationOutcome outcome;
  try {
    outcome = verify_membership(hash, claim, anchor, decode_membership_proof(wire, claim.datum.size(), hash.width()));
  } catch (const ProofFormatError&) {
    outcome = VerificationOutcome::invalid(reject(RejectReason::kComponentMalformed));
  }
  if (outcome.is_true()) {
    out << "TRUE\n";
    return kExitOk;
  }
  if (outcome.is_false()) {
    out << "FALSE\n";
    return kExitFalse;
  }
  out << "INVALID:" << to_string(outcome.reason()) << "\n";
  return kExitError;
}

int cmd_advance_verify(const Options& o, std::ostream& out) {
  const HashConfig hash = HashConfig::from_name(o.hash);
  if (o.sensitive_len == 0) throw UsageError("--sensitive-len must be at least 1");
  const Digest new_digest = digest_argument(o.digest, hash);

  VerifierState state;
  if (fs::exists(o.state_path)) {
    try {
      state = parse_state(read_file(o.state_path), hash.width());
    } catch (const StateFormatError& e) {
      throw UsageError(o.state_path + ": " + e.what());
    }
  } else {
    state = VerifierState::fresh(o.genesis.empty() ? genesis_digest(hash) : digest_argument(o.genesis, hash));
  }

  Checked<VerifierState> next = reject(RejectReason::kComponentMalformed);
  try {
    next = verify_advancement(hash, state, o.to, new_digest,
                              decode_advancement_proof(read_file(o.proof_path), o.sensitive_len, hash.width()));
  } catch (const ProofFormatError&) {
  }
  if (!next) {
    out << "INVALID:" << to_string(next.error().reason) << "\n";
    return kExitError;
  }
  replace_file_atomically(o.state_path, serialize_state(next.value()));
  out << "ACCEPTED " << next.value().size << " " << next.value().digest.hex() << "\n";
  return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  Log log = open_log(o.log_path, OpenMode::kReadOnly);
  AuditReport report = audit_file(log);
  if (report.clean()) {
    out << "clean: " << report.checked << " elements checked\n";
    return kExitOk;
  }
  out << "tampered: first mismatch at element " << *report.first_mismatch << " (" << report.mismatches
      << " of " << report.checked << " elements differ)\n";
  return kExitError;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  ScenarioReport report = run_scenario(o.scenario);
  out << report.text();
  return report.all_expected() ? kExitOk : kExitError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Authenticated append-only skip list log"};
  app.require_subcommand(1, 1);
  Options o;

  auto* init = app.add_subcommand("init", "Create a new log file");
  init->add_option("log", o.log_path)->required();
  init->add_option("--sensitive-len", o.sensitive_len, "Bytes of authenticated data per element")->required();
  init->add_option("--insensitive-len", o.insensitive_len, "Bytes of unauthenticated data per element");
  init->add_option("--genesis", o.genesis, "Genesis digest (hex); defaults to all zeros");
  init->add_option("--hash", o.hash, "sha256 | sha512 | sha3-256");

  auto* append = app.add_subcommand("append", "Append one element");
  append->add_option("log", o.log_path)->required();
  append->add_option("--data", o.data, "Sensitive datum: hex or @file")->required();
  append->add_option("--insensitive", o.insensitive, "Insensitive datum: hex or @file");

  auto* digest = app.add_subcommand("digest", "Print the digest at a size (default: current)");
  digest->add_option("log", o.log_path)->required();
  digest->add_option("--at", o.at);

  auto* prove = app.add_subcommand("prove", "Write a membership proof");
  prove->add_option("log", o.log_path)->required();
  prove->add_option("--member", o.member)->required();
  prove->add_option("--anchor", o.anchor)->required();
  prove->add_option("--out", o.out_path)->required();

  auto* advance = app.add_subcommand("advance", "Write an advancement proof");
  advance->add_option("log", o.log_path)->required();
  advance->add_option("--from", o.from)->required();
  advance->add_option("--to", o.to)->required();
  advance->add_option("--out", o.out_path)->required();

  auto* verify = app.add_subcommand("verify", "Check a membership claim against a digest");
  verify->add_option("proof", o.proof_path)->required();
  verify->add_option("--claim", o.claim, "i,n,datum (datum: hex or @file)")->required();
  verify->add_option("--digest", o.digest, "Digest of size n (hex)")->required();
  verify->add_option("--hash", o.hash);

  auto* advance_verify = app.add_subcommand("advance-verify", "Advance a verifier-state file");
  advance_verify->add_option("proof", o.proof_path)->required();
  advance_verify->add_option("--state", o.state_path, "Created fresh when missing")->required();
  advance_verify->add_option("--to", o.to)->required();
  advance_verify->add_option("--digest", o.digest)->required();
  advance_verify->add_option("--sensitive-len", o.sensitive_len)->required();
  advance_verify->add_option("--hash", o.hash);
  advance_verify->add_option("--genesis", o.genesis, "Genesis for a fresh state (hex)");

  auto* audit = app.add_subcommand("audit", "Recompute and compare every authenticator");
  audit->add_option("log", o.log_path)->required();

  auto* scenario = app.add_subcommand("scenario", "Run an attack scenario");
  scenario->add_option("name", o.scenario)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*init) return cmd_init(o, out);
    if (*append) return cmd_append(o, out);
    if (*digest) return cmd_digest(o, out);
    if (*prove) return cmd_prove(o, out);
    if (*advance) return cmd_advance(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*advance_verify) return cmd_advance_verify(o, out);
    if (*audit) return cmd_audit(o, out);
    if (*scenario) return cmd_scenario(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace aasl::cli
