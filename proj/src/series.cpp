#include "thetagw/series.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "thetagw/errors.hpp"

namespace thetagw {

namespace {

// Running Neumaier sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool is_nonneg_integer(double alpha) {
  return alpha >= 0.0 && alpha <= 1e6 && std::floor(alpha) == alpha;
}

}  // namespace

double compensated_sum(std::span<const double> xs) {
  Accumulator acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

// ---------------------------------------------------------------------------
// Series

Series::Series(std::size_t order, double constant) : c_(order + 1, 0.0) { c_[0] = constant; }

Series::Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
}

Series Series::variable(std::size_t order) {
  Series s(order, 0.0);
  if (order >= 1) s.c_[1] = 1.0;
  return s;
}

Series operator+(const Series& x, const Series& y) {
  Series r = x;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += y.c_[k];
  return r;
}

Series operator-(const Series& x, const Series& y) {
  Series r = x;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] -= y.c_[k];
  return r;
}

Series operator*(double k, const Series& x) {
  Series r = x;
  for (double& v : r.c_) v *= k;
  return r;
}

Series operator+(double k, const Series& x) {
  Series r = x;
  r.c_[0] += k;
  return r;
}

Series Series::operator-() const { return -1.0 * *this; }

Series operator*(const Series& x, const Series& y) {
  const std::size_t n = x.c_.size();
  Series r(n - 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    Accumulator acc;
    for (std::size_t j = 0; j <= k; ++j) acc.add(x.c_[j] * y.c_[k - j]);
    r.c_[k] = acc.value();
  }
  return r;
}

Series Series::pow(double alpha) const {
  const std::size_t n = c_.size();
  if (c_[0] <= 0.0) {
    if (!is_nonneg_integer(alpha)) {
      throw UnsupportedForm("non-integer power of a series with nonpositive constant term");
    }
    // Binary powering keeps this exact in structure for integer exponents.
    Series result(n - 1, 1.0);
    Series base = *this;
    auto e = static_cast<unsigned long>(alpha);
    while (e > 0) {
      if (e & 1UL) result = result * base;
      e >>= 1U;
      if (e > 0) base = base * base;
    }
    return result;
  }
  // J.C.P. Miller recurrence: g_k = sum_j ((alpha + 1) j - k) x_j g_{k-j} / (k x_0).
  Series g(n - 1, std::pow(c_[0], alpha));
  for (std::size_t k = 1; k < n; ++k) {
    Accumulator acc;
    for (std::size_t j = 1; j <= k; ++j) {
      acc.add(((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * c_[j] *
              g.c_[k - j]);
    }
    g.c_[k] = acc.value() / (static_cast<double>(k) * c_[0]);
  }
  return g;
}

Series Series::log() const {
  const std::size_t n = c_.size();
  if (c_[0] <= 0.0) {
    throw UnsupportedForm("log of a series with nonpositive constant term");
  }
  Series l(n - 1, std::log(c_[0]));
  for (std::size_t k = 1; k < n; ++k) {
    Accumulator acc;
    acc.add(c_[k]);
    for (std::size_t j = 1; j < k; ++j) {
      acc.add(-static_cast<double>(j) * l.c_[j] * c_[k - j] / static_cast<double>(k));
    }
    l.c_[k] = acc.value() / c_[0];
  }
  return l;
}

Series Series::exp() const {
  const std::size_t n = c_.size();
  Series e(n - 1, std::exp(c_[0]));
  for (std::size_t k = 1; k < n; ++k) {
    Accumulator acc;
    for (std::size_t j = 1; j <= k; ++j) {
      acc.add(static_cast<double>(j) * c_[j] * e.c_[k - j]);
    }
    e.c_[k] = acc.value() / static_cast<double>(k);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
  struct Var {};
  struct Const { double v; };
  struct Sum { Expr x, y; };
  struct Product { Expr x, y; };
  struct Power { Expr x; double alpha; };
  struct Log { Expr x; };
  struct Exp { Expr x; };
  std::variant<Var, Const, Sum, Product, Power, Log, Exp> op;
};

Expr Expr::var() { return Expr(std::make_shared<const Node>(Node{Node::Var{}})); }

Expr Expr::constant(double v) { return Expr(std::make_shared<const Node>(Node{Node::Const{v}})); }

Expr operator+(const Expr& x, const Expr& y) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Sum{x, y}}));
}

Expr operator*(const Expr& x, const Expr& y) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Product{x, y}}));
}

Expr operator-(const Expr& x, const Expr& y) { return x + (-1.0) * y; }
Expr operator/(const Expr& x, const Expr& y) { return x * pow(y, -1.0); }
Expr operator+(double k, const Expr& x) { return Expr::constant(k) + x; }
Expr operator-(double k, const Expr& x) { return Expr::constant(k) + (-1.0) * x; }
Expr operator*(double k, const Expr& x) { return Expr::constant(k) * x; }

Expr pow(const Expr& x, double alpha) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Power{x, alpha}}));
}

Expr log(const Expr& x) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Log{x}}));
}

Expr exp(const Expr& x) {
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Exp{x}}));
}

double Expr::eval(double s) const {
  return std::visit(
      [s](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Node::Var>) {
          return s;
        } else if constexpr (std::is_same_v<T, Node::Const>) {
          return op.v;
        } else if constexpr (std::is_same_v<T, Node::Sum>) {
          return op.x.eval(s) + op.y.eval(s);
        } else if constexpr (std::is_same_v<T, Node::Product>) {
          return op.x.eval(s) * op.y.eval(s);
        } else if constexpr (std::is_same_v<T, Node::Power>) {
          return std::pow(op.x.eval(s), op.alpha);
        } else if constexpr (std::is_same_v<T, Node::Log>) {
          return std::log(op.x.eval(s));
        } else {
          return std::exp(op.x.eval(s));
        }
      },
      node_->op);
}

Series Expr::series(std::size_t order) const {
  return std::visit(
      [order](const auto& op) -> Series {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Node::Var>) {
          return Series::variable(order);
        } else if constexpr (std::is_same_v<T, Node::Const>) {
          return Series(order, op.v);
        } else if constexpr (std::is_same_v<T, Node::Sum>) {
          return op.x.series(order) + op.y.series(order);
        } else if constexpr (std::is_same_v<T, Node::Product>) {
          return op.x.series(order) * op.y.series(order);
        } else if constexpr (std::is_same_v<T, Node::Power>) {
          return op.x.series(order).pow(op.alpha);
        } else if constexpr (std::is_same_v<T, Node::Log>) {
          return op.x.series(order).log();
        } else {
          return op.x.series(order).exp();
        }
      },
      node_->op);
}

SeriesTruncation series_coeffs(const Expr& g, std::size_t K) {
  SeriesTruncation out;
  out.coeffs = g.series(K).take();
  return out;
}

}  // namespace thetagw
