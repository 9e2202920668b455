#include "aasl/storage.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "aasl/authenticator.hpp"

namespace aasl {

namespace {

constexpr char kMagic[4] = {'A', 'A', 'S', 'L'};

std::string errno_text() { return std::strerror(errno); }

}  // namespace

Bytes FilePreamble::encode() const {
  Bytes out(kMagic, kMagic + 4);
  put_be(out, format_version, 2);
  put_be(out, hash_id, 2);
  put_be(out, digest_width, 2);
  put_be(out, sensitive_length, 4);
  put_be(out, insensitive_length, 4);
  put_be(out, last_index, 8);
  return out;
}

FilePreamble FilePreamble::decode(ByteView bytes) {
  if (bytes.size() < kPreambleSize) throw StorageError("preamble truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw StorageError("bad magic, not an AASL file");
  FilePreamble p;
  p.format_version = static_cast<std::uint16_t>(get_be(bytes.subspan(4), 2));
  p.hash_id = static_cast<std::uint16_t>(get_be(bytes.subspan(6), 2));
  p.digest_width = static_cast<std::uint16_t>(get_be(bytes.subspan(8), 2));
  p.sensitive_length = static_cast<std::uint32_t>(get_be(bytes.subspan(10), 4));
  p.insensitive_length = static_cast<std::uint32_t>(get_be(bytes.subspan(14), 4));
  p.last_index = get_be(bytes.subspan(kLastIndexOffset), 8);

  if (p.format_version != kFormatVersion) {
    throw StorageError("unsupported format version " + std::to_string(p.format_version));
  }
  HashConfig hash;
  try {
    hash = HashConfig::from_id(p.hash_id);
  } catch (const std::invalid_argument& e) {
    throw StorageError(std::string("preamble: ") + e.what());
  }
  if (p.digest_width != hash.width()) throw StorageError("preamble digest width does not match hash");
  if (p.sensitive_length == 0) throw StorageError("preamble declares zero-length sensitive data");
  if (p.last_index > kMaxElementIndex) throw StorageError("preamble last index exceeds 2^63");
  return p;
}

FileStore::FileStore(std::filesystem::path path, int fd, OpenMode mode)
    : path_(std::move(path)), fd_(fd), mode_(mode) {}

FileStore::~FileStore() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FileStore> FileStore::create(const std::filesystem::path& path, const LogConfig& config) {
  config.validate();
  int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) throw StorageError("cannot create " + path.string() + ": " + errno_text());
  std::unique_ptr<FileStore> store(new FileStore(path, fd, OpenMode::kReadWrite));
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) throw StorageError(path.string() + " is locked by another writer");

  FilePreamble& p = store->preamble_;
  p.hash_id = static_cast<std::uint16_t>(config.hash.algorithm);
  p.digest_width = static_cast<std::uint16_t>(config.hash.width());
  p.sensitive_length = config.sensitive_length;
  p.insensitive_length = config.insensitive_length;
  p.last_index = 0;

  Bytes blob = p.encode();
  blob.resize(blob.size() + config.sensitive_length + config.insensitive_length, 0);
  Digest genesis = config.genesis_value();
  blob.insert(blob.end(), genesis.bytes().begin(), genesis.bytes().end());
  store->write_at(0, blob);
  store->sync();

  store->config_ = config;
  store->config_.genesis = genesis;
  return store;
}

std::unique_ptr<FileStore> FileStore::open(const std::filesystem::path& path, OpenMode mode) {
  const int flags = (mode == OpenMode::kReadWrite ? O_RDWR : O_RDONLY) | O_CLOEXEC;
  int fd = ::open(path.c_str(), flags);
  if (fd < 0) throw StorageError("cannot open " + path.string() + ": " + errno_text());
  std::unique_ptr<FileStore> store(new FileStore(path, fd, mode));
  if (mode == OpenMode::kReadWrite && ::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    throw StorageError(path.string() + " is locked by another writer");
  }
  store->load();
  return store;
}

std::unique_ptr<FileStore> FileStore::open_or_create(const std::filesystem::path& path, const LogConfig& config) {
  if (!std::filesystem::exists(path)) return create(path, config);
  config.validate();
  auto store = open(path, OpenMode::kReadWrite);
  const LogConfig& found = store->config();
  if (found.sensitive_length != config.sensitive_length || found.insensitive_length != config.insensitive_length ||
      found.hash != config.hash) {
    throw StorageError(path.string() + ": preamble does not match the requested configuration");
  }
  if (!config.genesis.empty() && config.genesis != found.genesis) {
    throw StorageError(path.string() + ": genesis digest does not match the requested configuration");
  }
  return store;
}

void FileStore::load() {
  preamble_ = FilePreamble::decode(read_at(0, kPreambleSize));
  struct stat st {};
  if (::fstat(fd_, &st) != 0) throw StorageError("fstat failed: " + errno_text());
  const std::uint64_t committed_end = record_offset(preamble_.last_index + 1);
  if (static_cast<std::uint64_t>(st.st_size) < committed_end) {
    throw StorageError(path_.string() + " is truncated: " + std::to_string(st.st_size) + " bytes, committed data needs " +
                       std::to_string(committed_end));
  }
  config_.sensitive_length = preamble_.sensitive_length;
  config_.insensitive_length = preamble_.insensitive_length;
  config_.hash = HashConfig::from_id(preamble_.hash_id);
  config_.genesis = Digest(read_at(record_offset(0) + preamble_.sensitive_length + preamble_.insensitive_length,
                                   preamble_.digest_width));
}

void FileStore::refresh() { load(); }

Bytes FileStore::read_at(std::uint64_t offset, std::size_t length) const {
  Bytes out(length);
  std::size_t done = 0;
  while (done < length) {
    ssize_t n = ::pread(fd_, out.data() + done, length - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError("read failed on " + path_.string() + ": " + errno_text());
    }
    if (n == 0) throw StorageError(path_.string() + " is truncated at offset " + std::to_string(offset + done));
    done += static_cast<std::size_t>(n);
  }
  return out;
}

void FileStore::write_at(std::uint64_t offset, ByteView bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    ssize_t n = ::pwrite(fd_, bytes.data() + done, bytes.size() - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError("write failed on " + path_.string() + ": " + errno_text());
    }
    done += static_cast<std::size_t>(n);
  }
}

void FileStore::sync() {
  if (::fdatasync(fd_) != 0) throw StorageError("fdatasync failed on " + path_.string() + ": " + errno_text());
}

void FileStore::check_index(ElementIndex j) const {
  if (j > preamble_.last_index) {
    throw std::out_of_range("element " + std::to_string(j) + " beyond last index " +
                            std::to_string(preamble_.last_index));
  }
}

void FileStore::require_writable() const {
  if (mode_ != OpenMode::kReadWrite) throw StorageError(path_.string() + " is open read-only");
}

EntryRecord FileStore::read_record(ElementIndex j) const {
  check_index(j);
  Bytes raw = read_at(record_offset(j), preamble_.record_size());
  const auto s = preamble_.sensitive_length;
  const auto ins = preamble_.insensitive_length;
  ByteView view(raw);
  return {Datum(view.subspan(0, s)), Bytes(raw.begin() + s, raw.begin() + s + ins),
          Digest(view.subspan(s + ins, preamble_.digest_width))};
}

Datum FileStore::read_sensitive(ElementIndex j) const {
  check_index(j);
  return Datum(read_at(record_offset(j), preamble_.sensitive_length));
}

Digest FileStore::read_authenticator(ElementIndex j) const {
  check_index(j);
  return Digest(read_at(record_offset(j) + preamble_.sensitive_length + preamble_.insensitive_length,
                        preamble_.digest_width));
}

void FileStore::append_record(const EntryRecord& record) {
  require_writable();
  if (record.sensitive.size() != preamble_.sensitive_length ||
      record.insensitive.size() != preamble_.insensitive_length ||
      record.authenticator.size() != preamble_.digest_width) {
    throw std::invalid_argument("record fields do not match the preamble lengths");
  }
  Bytes raw;
  raw.reserve(preamble_.record_size());
  raw.insert(raw.end(), record.sensitive.bytes().begin(), record.sensitive.bytes().end());
  raw.insert(raw.end(), record.insensitive.begin(), record.insensitive.end());
  raw.insert(raw.end(), record.authenticator.bytes().begin(), record.authenticator.bytes().end());

  // Record first, then the commit point in the preamble.
  const ElementIndex next = preamble_.last_index + 1;
  write_at(record_offset(next), raw);
  sync();
  Bytes last;
  put_be(last, next, 8);
  write_at(kLastIndexOffset, last);
  sync();
  preamble_.last_index = next;
}

void FileStore::write_insensitive(ElementIndex j, ByteView bytes) {
  require_writable();
  check_index(j);
  if (bytes.size() != preamble_.insensitive_length) throw std::invalid_argument("insensitive datum has the wrong length");
  write_at(record_offset(j) + preamble_.sensitive_length, bytes);
  sync();
}

Log open_or_create(const std::filesystem::path& path, const LogConfig& config) {
  return Log(FileStore::open_or_create(path, config));
}

Log open_log(const std::filesystem::path& path, OpenMode mode) { return Log(FileStore::open(path, mode)); }

AuditReport audit_file(const Log& log) {
  const EntryStore& store = log.store();
  const HashConfig hash = store.config().hash;
  const ElementIndex last = store.last_index();

  AuditReport report;
  std::vector<Digest> recomputed;
  recomputed.reserve(last + 1);
  recomputed.push_back(store.read_authenticator(0));

  std::vector<Digest> preds;
  for (ElementIndex j = 1; j <= last; ++j) {
    preds.clear();
    for (Level l = 0; l <= max_level(j); ++l) preds.push_back(recomputed[j - level_span(l)]);
    recomputed.push_back(element_authenticator(hash, j, store.read_sensitive(j), preds));
    if (recomputed.back() != store.read_authenticator(j)) {
      if (!report.first_mismatch) report.first_mismatch = j;
      ++report.mismatches;
    }
    ++report.checked;
  }
  return report;
}

}  // namespace aasl
