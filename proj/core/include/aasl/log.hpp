#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>

#include "aasl/bytes.hpp"
#include "aasl/hash.hpp"
#include "aasl/proof.hpp"
#include "aasl/skiplist_math.hpp"

namespace aasl {

struct LogConfig {
  std::uint32_t sensitive_length = 32;
  std::uint32_t insensitive_length = 0;
  HashConfig hash;
  /// Authenticator of element 0. Left empty, it resolves to genesis_digest(hash).
  Digest genesis;

  /// Throws std::invalid_argument for a zero sensitive length or a genesis of
  /// the wrong width.
  void validate() const;
  Digest genesis_value() const;

  friend bool operator==(const LogConfig& a, const LogConfig& b) {
    return a.sensitive_length == b.sensitive_length && a.insensitive_length == b.insensitive_length &&
           a.hash == b.hash && a.genesis_value() == b.genesis_value();
  }
};

/// What the backing store keeps per element. Only the sensitive datum feeds
/// the authenticator.
struct EntryRecord {
  Datum sensitive;
  Bytes insensitive;
  Digest authenticator;

  friend bool operator==(const EntryRecord&, const EntryRecord&) = default;
};

struct ElementEntry {
  ElementIndex index = 0;
  EntryRecord record;
};

/// Random-access element storage. Entry 0 is always present and holds the
/// genesis authenticator. Implementations need not be thread-safe; Log
/// serializes access.
class EntryStore {
 public:
  virtual ~EntryStore() = default;

  virtual const LogConfig& config() const = 0;
  virtual ElementIndex last_index() const = 0;
  virtual EntryRecord read_record(ElementIndex j) const = 0;
  virtual Datum read_sensitive(ElementIndex j) const { return read_record(j).sensitive; }
  virtual Digest read_authenticator(ElementIndex j) const { return read_record(j).authenticator; }
  /// Appends at last_index() + 1.
  virtual void append_record(const EntryRecord& record) = 0;
  virtual void write_insensitive(ElementIndex j, ByteView bytes) = 0;
  /// Re-reads committed state written by another handle. No-op by default.
  virtual void refresh() {}
};

class MemoryStore final : public EntryStore {
 public:
  explicit MemoryStore(LogConfig config);

  const LogConfig& config() const override { return config_; }
  ElementIndex last_index() const override { return records_.size() - 1; }
  EntryRecord read_record(ElementIndex j) const override;
  Digest read_authenticator(ElementIndex j) const override;
  Datum read_sensitive(ElementIndex j) const override;
  void append_record(const EntryRecord& record) override;
  void write_insensitive(ElementIndex j, ByteView bytes) override;

 private:
  const EntryRecord& at(ElementIndex j) const;

  LogConfig config_;
  std::vector<EntryRecord> records_;
};

struct AppendResult {
  ElementIndex index = 0;
  Digest authenticator;
};

/// Maintainer-side AASL: the append-only element sequence, its authenticator
/// chain, and proof construction.
///
/// One writer at a time; readers may build proofs concurrently with appends
/// and always see a consistent prefix.
class Log {
 public:
  explicit Log(std::unique_ptr<EntryStore> store);

  Log(const Log&) = delete;
  Log& operator=(const Log&) = delete;

  const LogConfig& config() const { return store_->config(); }
  ElementIndex size() const;

  /// Empty `insensitive` stores zeros.
  AppendResult append(const Datum& sensitive, ByteView insensitive = {});

  Digest digest() const;
  Digest digest_at(ElementIndex n) const;
  ElementEntry entry(ElementIndex j) const;

  /// Insensitive bytes are unauthenticated and may be rewritten at will.
  void set_insensitive(ElementIndex j, ByteView bytes);

  ProofComponent build_component(ElementIndex j) const;
  /// Requires 1 <= i <= n <= size(). For i == n the proof is just C^i.
  MembershipProof build_membership_proof(ElementIndex i, ElementIndex n) const;
  /// Requires 0 <= i < n <= size().
  AdvancementProof build_advancement_proof(ElementIndex i, ElementIndex n) const;

  void refresh();

  const EntryStore& store() const { return *store_; }

 private:
  ProofComponent component_unlocked(ElementIndex j) const;
  void check_range(ElementIndex j, const char* what) const;

  std::unique_ptr<EntryStore> store_;
  mutable std::shared_mutex mutex_;
};

/// A fresh in-memory log holding only the sentinel element 0.
Log create_log(const LogConfig& config);

}  // namespace aasl
