#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace thetagw {

/// Truncated Taylor coefficients at 0 plus an optional bound on the mass
/// that did not fit (only meaningful for probability generating functions).
struct SeriesTruncation {
  std::vector<double> coeffs;
  double tail_mass_bound = 0.0;
};

/// Power series truncated after degree K, with the arithmetic needed to
/// expand the family's closed forms: sums, products, real powers, log, exp.
/// Products and power recurrences use compensated summation.
class Series {
 public:
  Series(std::size_t order, double constant);
  explicit Series(std::vector<double> coeffs);

  static Series variable(std::size_t order);

  [[nodiscard]] std::size_t order() const noexcept { return c_.size() - 1; }
  [[nodiscard]] double operator[](std::size_t k) const { return c_[k]; }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return c_; }
  [[nodiscard]] std::vector<double> take() && { return std::move(c_); }

  friend Series operator+(const Series& x, const Series& y);
  friend Series operator-(const Series& x, const Series& y);
  friend Series operator*(const Series& x, const Series& y);
  friend Series operator*(double k, const Series& x);
  friend Series operator+(double k, const Series& x);
  Series operator-() const;

  /// x^alpha. Needs x[0] > 0 unless alpha is a nonnegative integer.
  [[nodiscard]] Series pow(double alpha) const;
  /// Needs x[0] > 0.
  [[nodiscard]] Series log() const;
  [[nodiscard]] Series exp() const;

 private:
  std::vector<double> c_;
};

/// Closed-form descriptor of a real function of one variable s, built from
/// constants, s, +, *, real powers, log and exp. Descriptors can be evaluated
/// pointwise or expanded into Taylor coefficients at 0 without numerical
/// differentiation.
///
/// Expansion throws UnsupportedForm when the function is not analytic at 0
/// in the way the recurrences need (a non-integer power or a log of a
/// subexpression that vanishes or is negative at s = 0).
class Expr {
 public:
  struct Node;

  static Expr var();
  static Expr constant(double v);

  [[nodiscard]] double eval(double s) const;
  [[nodiscard]] Series series(std::size_t order) const;

  friend Expr operator+(const Expr& x, const Expr& y);
  friend Expr operator-(const Expr& x, const Expr& y);
  friend Expr operator*(const Expr& x, const Expr& y);
  friend Expr operator/(const Expr& x, const Expr& y);
  friend Expr operator+(double k, const Expr& x);
  friend Expr operator+(const Expr& x, double k) { return k + x; }
  friend Expr operator-(double k, const Expr& x);
  friend Expr operator-(const Expr& x, double k) { return (-k) + x; }
  friend Expr operator*(double k, const Expr& x);
  friend Expr operator*(const Expr& x, double k) { return k * x; }
  Expr operator-() const { return -1.0 * *this; }

  friend Expr pow(const Expr& x, double alpha);
  friend Expr log(const Expr& x);
  friend Expr exp(const Expr& x);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& x, double alpha);
Expr log(const Expr& x);
Expr exp(const Expr& x);

/// First K + 1 Taylor coefficients of g at 0.
[[nodiscard]] SeriesTruncation series_coeffs(const Expr& g, std::size_t K);

/// Neumaier-compensated sum.
[[nodiscard]] double compensated_sum(std::span<const double> xs);

}  // namespace thetagw
