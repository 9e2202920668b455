#include "aasl/outcome.hpp"

namespace aasl {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kCountMismatch: return "count-mismatch";
    case RejectReason::kContinuityBreak: return "continuity-break";
    case RejectReason::kAnchorMismatch: return "anchor-mismatch";
    case RejectReason::kComponentMalformed: return "component-malformed";
    case RejectReason::kBasisConflict: return "basis-conflict";
    case RejectReason::kOutOfRange: return "out-of-range";
  }
  return "unknown";
}

std::string Rejection::describe() const {
  std::string out(to_string(reason));
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

}  // namespace aasl
