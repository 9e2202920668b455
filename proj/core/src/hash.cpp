#include "aasl/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace aasl {

namespace {

const EVP_MD* evp_for(HashAlgorithm algorithm) {
  switch (algorithm) {
    case HashAlgorithm::kSha256: return EVP_sha256();
    case HashAlgorithm::kSha512: return EVP_sha512();
    case HashAlgorithm::kSha3_256: return EVP_sha3_256();
  }
  throw std::invalid_argument("unknown hash algorithm");
}

}  // namespace

std::size_t HashConfig::width() const {
  switch (algorithm) {
    case HashAlgorithm::kSha256: return 32;
    case HashAlgorithm::kSha512: return 64;
    case HashAlgorithm::kSha3_256: return 32;
  }
  throw std::invalid_argument("unknown hash algorithm");
}

std::string_view HashConfig::name() const {
  switch (algorithm) {
    case HashAlgorithm::kSha256: return "sha256";
    case HashAlgorithm::kSha512: return "sha512";
    case HashAlgorithm::kSha3_256: return "sha3-256";
  }
  throw std::invalid_argument("unknown hash algorithm");
}

HashConfig HashConfig::from_id(std::uint16_t id) {
  if (id < 1 || id > 3) throw std::invalid_argument("unknown hash algorithm id " + std::to_string(id));
  return HashConfig{static_cast<HashAlgorithm>(id)};
}

HashConfig HashConfig::from_name(std::string_view name) {
  for (std::uint16_t id = 1; id <= 3; ++id) {
    HashConfig config = from_id(id);
    if (config.name() == name) return config;
  }
  throw std::invalid_argument("unknown hash algorithm '" + std::string(name) + "'");
}

Digest hash_bytes(const HashConfig& config, ByteView input) {
  Bytes out(EVP_MAX_MD_SIZE);
  unsigned int length = 0;
  if (EVP_Digest(input.data(), input.size(), out.data(), &length, evp_for(config.algorithm), nullptr) != 1) {
    throw std::runtime_error("EVP_Digest failed");
  }
  out.resize(length);
  return Digest(std::move(out));
}

}  // namespace aasl
