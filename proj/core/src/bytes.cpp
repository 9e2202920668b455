#include "aasl/bytes.hpp"

#include <stdexcept>

namespace aasl {

namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    int hi = nibble(hex[2 * k]);
    int lo = nibble(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out[k] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void put_be(Bytes& out, std::uint64_t value, std::size_t width) {
  for (std::size_t k = width; k-- > 0;) {
    out.push_back(static_cast<std::uint8_t>(k >= 8 ? 0 : (value >> (8 * k)) & 0xff));
  }
}

std::uint64_t get_be(ByteView in, std::size_t width) {
  if (in.size() < width || width > 8) throw std::out_of_range("big-endian read past end");
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < width; ++k) value = (value << 8) | in[k];
  return value;
}

}  // namespace aasl
