#pragma once

#include <cassert>
#include <cmath>
#include <string>

namespace thetagw {

/// A value on [-inf, +inf] where infinity is an explicit tag rather than an
/// IEEE sentinel. Used for moments that may diverge (f'(1), f''(1), E[T]).
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) {
    assert(std::isfinite(v));
    return ExtendedReal(v, false);
  }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  [[nodiscard]] bool is_finite() const noexcept { return !infinite_; }
  [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }

  // Only meaningful when is_finite().
  [[nodiscard]] double value() const {
    assert(!infinite_);
    return value_;
  }

  // Finite value or +HUGE_VAL, for arithmetic that wants a plain double.
  [[nodiscard]] double as_double() const noexcept {
    return infinite_ ? HUGE_VAL : value_;
  }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ExtendedReal& x, const ExtendedReal& y) {
    return x.infinite_ == y.infinite_ && (x.infinite_ || x.value_ == y.value_);
  }

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace thetagw
