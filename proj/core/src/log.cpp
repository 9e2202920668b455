#include "aasl/log.hpp"

#include <mutex>
#include <stdexcept>
#include <string>

#include "aasl/authenticator.hpp"

namespace aasl {

void LogConfig::validate() const {
  if (sensitive_length == 0) throw std::invalid_argument("sensitive length must be at least 1 byte");
  if (!genesis.empty() && genesis.size() != hash.width()) {
    throw std::invalid_argument("genesis digest is " + std::to_string(genesis.size()) + " bytes, " +
                                std::string(hash.name()) + " produces " + std::to_string(hash.width()));
  }
}

Digest LogConfig::genesis_value() const { return genesis.empty() ? genesis_digest(hash) : genesis; }

MemoryStore::MemoryStore(LogConfig config) : config_(std::move(config)) {
  config_.validate();
  config_.genesis = config_.genesis_value();
  records_.push_back({Datum::zeros(config_.sensitive_length), Bytes(config_.insensitive_length, 0),
                      config_.genesis});
}

const EntryRecord& MemoryStore::at(ElementIndex j) const {
  if (j >= records_.size()) throw std::out_of_range("element " + std::to_string(j) + " not in store");
  return records_[j];
}

EntryRecord MemoryStore::read_record(ElementIndex j) const { return at(j); }
Digest MemoryStore::read_authenticator(ElementIndex j) const { return at(j).authenticator; }
Datum MemoryStore::read_sensitive(ElementIndex j) const { return at(j).sensitive; }

void MemoryStore::append_record(const EntryRecord& record) { records_.push_back(record); }

void MemoryStore::write_insensitive(ElementIndex j, ByteView bytes) {
  if (j >= records_.size()) throw std::out_of_range("element " + std::to_string(j) + " not in store");
  records_[j].insensitive.assign(bytes.begin(), bytes.end());
}

Log::Log(std::unique_ptr<EntryStore> store) : store_(std::move(store)) {
  if (!store_) throw std::invalid_argument("log needs a store");
}

ElementIndex Log::size() const {
  std::shared_lock lock(mutex_);
  return store_->last_index();
}

AppendResult Log::append(const Datum& sensitive, ByteView insensitive) {
  const LogConfig& cfg = config();
  if (sensitive.size() != cfg.sensitive_length) {
    throw std::invalid_argument("sensitive datum is " + std::to_string(sensitive.size()) +
                                " bytes, log expects " + std::to_string(cfg.sensitive_length));
  }
  if (!insensitive.empty() && insensitive.size() != cfg.insensitive_length) {
    throw std::invalid_argument("insensitive datum is " + std::to_string(insensitive.size()) +
                                " bytes, log expects " + std::to_string(cfg.insensitive_length));
  }

  std::unique_lock lock(mutex_);
  const ElementIndex i = store_->last_index() + 1;
  if (i > kMaxElementIndex) throw std::overflow_error("log is full");

  std::vector<Digest> preds;
  for (Level l = 0; l <= max_level(i); ++l) preds.push_back(store_->read_authenticator(i - level_span(l)));
  Digest authenticator = element_authenticator(cfg.hash, i, sensitive, preds);

  Bytes extra = insensitive.empty() ? Bytes(cfg.insensitive_length, 0) : Bytes(insensitive.begin(), insensitive.end());
  store_->append_record({sensitive, std::move(extra), authenticator});
  return {i, std::move(authenticator)};
}

Digest Log::digest() const {
  std::shared_lock lock(mutex_);
  return store_->read_authenticator(store_->last_index());
}

Digest Log::digest_at(ElementIndex n) const {
  std::shared_lock lock(mutex_);
  check_range(n, "digest_at");
  return store_->read_authenticator(n);
}

ElementEntry Log::entry(ElementIndex j) const {
  std::shared_lock lock(mutex_);
  check_range(j, "entry");
  return {j, store_->read_record(j)};
}

void Log::set_insensitive(ElementIndex j, ByteView bytes) {
  if (bytes.size() != config().insensitive_length) {
    throw std::invalid_argument("insensitive datum has the wrong length");
  }
  std::unique_lock lock(mutex_);
  check_range(j, "set_insensitive");
  if (j == 0) throw std::invalid_argument("element 0 has no insensitive data to set");
  store_->write_insensitive(j, bytes);
}

void Log::check_range(ElementIndex j, const char* what) const {
  if (j > store_->last_index()) {
    throw std::out_of_range(std::string(what) + ": element " + std::to_string(j) + " beyond log size " +
                            std::to_string(store_->last_index()));
  }
}

ProofComponent Log::component_unlocked(ElementIndex j) const {
  ProofComponent c{store_->read_sensitive(j), {}};
  for (Level l = 0; l <= max_level(j); ++l) c.predecessors.push_back(store_->read_authenticator(j - level_span(l)));
  return c;
}

ProofComponent Log::build_component(ElementIndex j) const {
  std::shared_lock lock(mutex_);
  if (j == 0) throw std::out_of_range("element 0 has no proof component");
  check_range(j, "build_component");
  return component_unlocked(j);
}

MembershipProof Log::build_membership_proof(ElementIndex i, ElementIndex n) const {
  std::shared_lock lock(mutex_);
  if (i == 0 || i > n) {
    throw std::out_of_range("membership proof needs 1 <= i <= n (got i=" + std::to_string(i) +
                            ", n=" + std::to_string(n) + ")");
  }
  check_range(n, "build_membership_proof");
  MembershipProof proof;
  proof.components.push_back(component_unlocked(i));
  for (const Hop& hop : traversal_path(i, n)) proof.components.push_back(component_unlocked(hop.destination));
  return proof;
}

AdvancementProof Log::build_advancement_proof(ElementIndex i, ElementIndex n) const {
  std::shared_lock lock(mutex_);
  if (i >= n) {
    throw std::out_of_range("advancement proof needs i < n (got i=" + std::to_string(i) +
                            ", n=" + std::to_string(n) + ")");
  }
  check_range(n, "build_advancement_proof");
  AdvancementProof proof;
  for (const Hop& hop : traversal_path(i, n)) proof.components.push_back(component_unlocked(hop.destination));
  return proof;
}

void Log::refresh() {
  std::unique_lock lock(mutex_);
  store_->refresh();
}

Log create_log(const LogConfig& config) { return Log(std::make_unique<MemoryStore>(config)); }

}  // namespace aasl
