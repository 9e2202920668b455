#include "aasl/proof.hpp"

#include <limits>
#include <string>

namespace aasl {

Bytes encode_components(const std::vector<ProofComponent>& components) {
  if (components.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ProofFormatError("too many proof components to encode");
  }
  Bytes out;
  put_be(out, components.size(), 2);
  for (const ProofComponent& c : components) {
    if (c.predecessors.size() > std::numeric_limits<std::uint8_t>::max()) {
      throw ProofFormatError("too many predecessors in proof component");
    }
    out.insert(out.end(), c.datum.bytes().begin(), c.datum.bytes().end());
    out.push_back(static_cast<std::uint8_t>(c.predecessors.size()));
    for (const Digest& d : c.predecessors) out.insert(out.end(), d.bytes().begin(), d.bytes().end());
  }
  return out;
}

std::vector<ProofComponent> decode_components(ByteView wire, std::size_t datum_length,
                                              std::size_t digest_width) {
  if (wire.size() < 2) throw ProofFormatError("proof shorter than its count field");
  const std::size_t count = get_be(wire, 2);
  std::size_t pos = 2;
  auto take = [&](std::size_t n) {
    if (wire.size() - pos < n) {
      throw ProofFormatError("proof truncated at byte " + std::to_string(pos));
    }
    ByteView view = wire.subspan(pos, n);
    pos += n;
    return view;
  };

  std::vector<ProofComponent> components;
  components.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ProofComponent c;
    c.datum = Datum(take(datum_length));
    const std::size_t preds = take(1)[0];
    c.predecessors.reserve(preds);
    for (std::size_t p = 0; p < preds; ++p) c.predecessors.emplace_back(take(digest_width));
    components.push_back(std::move(c));
  }
  if (pos != wire.size()) {
    throw ProofFormatError(std::to_string(wire.size() - pos) + " trailing bytes after proof");
  }
  return components;
}

}  // namespace aasl
