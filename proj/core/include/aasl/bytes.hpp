#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aasl {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);

// Accepts upper or lower case; throws std::invalid_argument on odd length or
// non-hex characters.
Bytes from_hex(std::string_view hex);

void put_be(Bytes& out, std::uint64_t value, std::size_t width);
std::uint64_t get_be(ByteView in, std::size_t width);

/// Octet string with a distinct type per domain role, so a datum can never be
/// passed where a digest is expected.
template <typename Tag>
class OctetString {
 public:
  OctetString() = default;
  explicit OctetString(Bytes bytes) : bytes_(std::move(bytes)) {}
  explicit OctetString(ByteView bytes) : bytes_(bytes.begin(), bytes.end()) {}

  static OctetString zeros(std::size_t width) { return OctetString(Bytes(width, 0)); }
  static OctetString from_hex(std::string_view hex) { return OctetString(aasl::from_hex(hex)); }

  ByteView bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }
  std::string hex() const { return to_hex(bytes_); }

  void flip_bit(std::size_t bit) { bytes_.at(bit / 8) ^= static_cast<std::uint8_t>(1u << (bit % 8)); }

  friend bool operator==(const OctetString&, const OctetString&) = default;
  friend auto operator<=>(const OctetString&, const OctetString&) = default;

 private:
  Bytes bytes_;
};

using Digest = OctetString<struct DigestTag>;
using Datum = OctetString<struct DatumTag>;

}  // namespace aasl
