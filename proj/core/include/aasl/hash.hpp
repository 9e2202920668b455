#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "aasl/bytes.hpp"

namespace aasl {

/// Wire identifiers are stored in the log preamble; never renumber.
enum class HashAlgorithm : std::uint16_t {
  kSha256 = 1,
  kSha512 = 2,
  kSha3_256 = 3,
};

struct HashConfig {
  HashAlgorithm algorithm = HashAlgorithm::kSha256;

  std::size_t width() const;
  std::string_view name() const;

  static HashConfig from_id(std::uint16_t id);
  static HashConfig from_name(std::string_view name);

  friend bool operator==(const HashConfig&, const HashConfig&) = default;
};

Digest hash_bytes(const HashConfig& config, ByteView input);

}  // namespace aasl
