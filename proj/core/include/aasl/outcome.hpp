#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace aasl {

enum class RejectReason : std::uint8_t {
  kCountMismatch,
  kContinuityBreak,
  kAnchorMismatch,
  kComponentMalformed,
  kBasisConflict,
  kOutOfRange,
};

/// Stable lowercase names, e.g. "basis-conflict"; these appear in CLI output.
std::string_view to_string(RejectReason reason);

struct Rejection {
  RejectReason reason;
  std::string detail;

  std::string describe() const;
};

class BadOutcomeAccess : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Either a value or the reason verification refused to produce one.
template <typename T>
class Checked {
 public:
  Checked(T value) : state_(std::move(value)) {}
  Checked(Rejection rejection) : state_(std::move(rejection)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw BadOutcomeAccess("rejected: " + error().describe());
    return std::get<T>(state_);
  }
  T&& value() && {
    if (!ok()) throw BadOutcomeAccess("rejected: " + error().describe());
    return std::get<T>(std::move(state_));
  }
  const Rejection& error() const {
    if (ok()) throw BadOutcomeAccess("outcome holds a value");
    return std::get<Rejection>(state_);
  }

 private:
  std::variant<T, Rejection> state_;
};

inline Rejection reject(RejectReason reason, std::string detail = {}) { return {reason, std::move(detail)}; }

}  // namespace aasl
