#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>

#include "aasl/log.hpp"

namespace aasl {

// On-disk layout, all integers big-endian:
//
//   preamble (26 bytes)
//     magic "AASL" | format version u16 | hash id u16 | digest width u16
//     | sensitive length u32 | insensitive length u32 | last index u64
//   record 0 .. record last-index, each
//     sensitive datum | insensitive datum | authenticator
//
// Record k starts at kPreambleSize + k * record_size. Record 0 is the
// sentinel: zero data, genesis authenticator. Bytes past the last committed
// record are ignored.
inline constexpr std::size_t kPreambleSize = 26;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kLastIndexOffset = 18;

struct FilePreamble {
  std::uint16_t format_version = kFormatVersion;
  std::uint16_t hash_id = 0;
  std::uint16_t digest_width = 0;
  std::uint32_t sensitive_length = 0;
  std::uint32_t insensitive_length = 0;
  std::uint64_t last_index = 0;

  Bytes encode() const;
  /// Throws StorageError on bad magic, unknown version/hash, or width mismatch.
  static FilePreamble decode(ByteView bytes);

  std::size_t record_size() const { return std::size_t{sensitive_length} + insensitive_length + digest_width; }
};

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OpenMode { kReadWrite, kReadOnly };

/// File-backed EntryStore. A read-write handle holds an exclusive advisory
/// lock; read-only handles take none and see the last committed size as of
/// open() or refresh().
class FileStore final : public EntryStore {
 public:
  /// Fails if the path already exists.
  static std::unique_ptr<FileStore> create(const std::filesystem::path& path, const LogConfig& config);
  static std::unique_ptr<FileStore> open(const std::filesystem::path& path, OpenMode mode = OpenMode::kReadWrite);
  /// Opens an existing file after checking its preamble against `config`, or
  /// creates it.
  static std::unique_ptr<FileStore> open_or_create(const std::filesystem::path& path, const LogConfig& config);

  ~FileStore() override;
  FileStore(const FileStore&) = delete;
  FileStore& operator=(const FileStore&) = delete;

  const LogConfig& config() const override { return config_; }
  ElementIndex last_index() const override { return preamble_.last_index; }
  EntryRecord read_record(ElementIndex j) const override;
  Datum read_sensitive(ElementIndex j) const override;
  Digest read_authenticator(ElementIndex j) const override;
  void append_record(const EntryRecord& record) override;
  void write_insensitive(ElementIndex j, ByteView bytes) override;
  void refresh() override;

  const FilePreamble& preamble() const { return preamble_; }
  const std::filesystem::path& path() const { return path_; }
  std::uint64_t record_offset(ElementIndex j) const { return kPreambleSize + j * preamble_.record_size(); }

 private:
  FileStore(std::filesystem::path path, int fd, OpenMode mode);

  void load();
  Bytes read_at(std::uint64_t offset, std::size_t length) const;
  void write_at(std::uint64_t offset, ByteView bytes);
  void sync();
  void check_index(ElementIndex j) const;
  void require_writable() const;

  std::filesystem::path path_;
  int fd_ = -1;
  OpenMode mode_;
  FilePreamble preamble_;
  LogConfig config_;
};

Log open_or_create(const std::filesystem::path& path, const LogConfig& config);
Log open_log(const std::filesystem::path& path, OpenMode mode = OpenMode::kReadWrite);

struct AuditReport {
  ElementIndex checked = 0;
  std::optional<ElementIndex> first_mismatch;
  std::uint64_t mismatches = 0;

  bool clean() const { return !first_mismatch.has_value(); }
};

/// Rebuilds the authenticator column from the sensitive data alone and
/// compares it with what is stored. Corruption is reported, not thrown.
AuditReport audit_file(const Log& log);

}  // namespace aasl
