#pragma once

/**
 * @file jet.hpp
 * @brief Truncated Taylor jets in the three chart variables (u1, u2, u3).
 *
 * A Jet<Order> stores the Taylor coefficients of a scalar function around a
 * base point, one per multi-index (a, b, c) with a + b + c <= Order:
 *
 *     coefficient(a, b, c) = d^{a+b+c} f / (du1^a du2^b du3^c) / (a! b! c!)
 *
 * Arithmetic is exact truncated power-series arithmetic, so partial
 * derivatives come out exact up to rounding. Every jet also carries a
 * runtime "valid order": differentiating drops it by one, and combining jets
 * takes the minimum. Asking for a coefficient above the valid order raises
 * OrderExceeded instead of returning a silently truncated number.
 */

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "relgeo4/errors.hpp"

namespace relgeo4 {

inline constexpr int kChartDim = 3;
inline constexpr int kDefaultJetOrder = 4;

using ChartPoint = std::array<double, kChartDim>;

struct MultiIndex {
  int a = 0;
  int b = 0;
  int c = 0;

  constexpr int total() const { return a + b + c; }
  constexpr int operator[](int i) const { return i == 0 ? a : (i == 1 ? b : c); }
  friend constexpr bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

namespace detail {

constexpr int count_up_to(int order) {
  // Number of multi-indices in three variables with total degree <= order.
  return order < 0 ? 0 : (order + 1) * (order + 2) * (order + 3) / 6;
}

constexpr double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

template <int Order>
struct JetLayout {
  static constexpr int size = count_up_to(Order);
  static constexpr int side = Order + 1;

  // Graded ordering: all degree-k indices occupy [count_up_to(k-1), count_up_to(k)).
  static constexpr std::array<MultiIndex, size> make_indices() {
    std::array<MultiIndex, size> out{};
    int k = 0;
    for (int deg = 0; deg <= Order; ++deg)
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) out[k++] = MultiIndex{a, b, deg - a - b};
    return out;
  }
  static constexpr std::array<MultiIndex, size> indices = make_indices();

  static constexpr std::array<int, side * side * side> make_lookup() {
    std::array<int, side * side * side> out{};
    for (auto& v : out) v = -1;
    for (int k = 0; k < size; ++k) {
      const auto& m = indices[k];
      out[(m.a * side + m.b) * side + m.c] = k;
    }
    return out;
  }
  static constexpr std::array<int, side * side * side> lookup = make_lookup();

  static constexpr int index_of(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0 || a + b + c > Order) return -1;
    return lookup[(a * side + b) * side + c];
  }

  struct Term {
    std::uint16_t lhs, rhs, out;
  };

  static constexpr int count_terms() {
    int n = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (indices[i].total() + indices[j].total() <= Order) ++n;
    return n;
  }
  static constexpr int term_count = count_terms();

  static constexpr std::array<Term, term_count> make_terms() {
    std::array<Term, term_count> out{};
    int n = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        const auto& l = indices[i];
        const auto& r = indices[j];
        if (l.total() + r.total() > Order) continue;
        out[n++] = Term{static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                        static_cast<std::uint16_t>(index_of(l.a + r.a, l.b + r.b, l.c + r.c))};
      }
    return out;
  }
  static constexpr std::array<Term, term_count> product_terms = make_terms();
};

}  // namespace detail

template <int Order = kDefaultJetOrder>
class Jet {
  static_assert(Order >= 1 && Order <= 8, "jet order out of supported range");
  using Layout = detail::JetLayout<Order>;

 public:
  static constexpr int max_order = Order;
  static constexpr int size = Layout::size;
  using Coefficients = std::array<double, size>;

  Jet() { coeffs_.fill(0.0); }

  static Jet constant(double value, const ChartPoint& base) {
    Jet j;
    j.base_ = base;
    j.coeffs_[0] = value;
    return j;
  }

  /// The coordinate function u_{i+1} expanded at `base`.
  static Jet variable(int i, const ChartPoint& base) {
    assert(i >= 0 && i < kChartDim);
    Jet j = constant(base[static_cast<std::size_t>(i)], base);
    j.coeffs_[static_cast<std::size_t>(
        Layout::index_of(i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0))] = 1.0;
    return j;
  }

  static constexpr MultiIndex index(int k) { return Layout::indices[static_cast<std::size_t>(k)]; }

  double value() const { return coeffs_[0]; }
  int order() const { return order_; }
  const ChartPoint& base_point() const { return base_; }
  std::span<const double, size> coefficients() const { return coeffs_; }

  double coefficient(const MultiIndex& m) const {
    check_order(m.total());
    return coeffs_[static_cast<std::size_t>(Layout::index_of(m.a, m.b, m.c))];
  }

  /// Mixed partial derivative d^{a+b+c} f / du1^a du2^b du3^c at the base point.
  double derivative(const MultiIndex& m) const {
    return coefficient(m) * detail::factorial(m.a) * detail::factorial(m.b) *
           detail::factorial(m.c);
  }

  /// Partial derivative along a sequence of 0-based variable indices;
  /// {0, 0, 1} is d^3 f / du1 du1 du2. An empty sequence yields the value.
  double partial(std::span<const int> sequence) const {
    MultiIndex m;
    for (int v : sequence) {
      if (v == 0) ++m.a;
      else if (v == 1) ++m.b;
      else if (v == 2) ++m.c;
      else throw OrderExceeded("partial: variable index " + std::to_string(v) + " out of range");
    }
    return derivative(m);
  }
  double partial(std::initializer_list<int> sequence) const {
    return partial(std::span<const int>(sequence.begin(), sequence.size()));
  }

  /// d/du_{i+1}; the result is valid to one order less.
  Jet d(int i) const {
    if (order_ == 0) throw OrderExceeded("cannot differentiate an order-0 jet");
    Jet out;
    out.base_ = base_;
    out.order_ = order_ - 1;
    const int n = detail::count_up_to(out.order_);
    for (int k = 0; k < n; ++k) {
      MultiIndex m = Layout::indices[static_cast<std::size_t>(k)];
      int src;
      double factor;
      if (i == 0) { src = Layout::index_of(m.a + 1, m.b, m.c); factor = m.a + 1; }
      else if (i == 1) { src = Layout::index_of(m.a, m.b + 1, m.c); factor = m.b + 1; }
      else { src = Layout::index_of(m.a, m.b, m.c + 1); factor = m.c + 1; }
      out.coeffs_[static_cast<std::size_t>(k)] = factor * coeffs_[static_cast<std::size_t>(src)];
    }
    return out;
  }

  /// Copy restricted to a lower valid order.
  Jet truncated(int order) const {
    Jet out = *this;
    out.order_ = std::min(order_, std::max(order, 0));
    out.clear_above_order();
    return out;
  }

  /// f(g) for g = *this, given the Taylor coefficients t_k = f^{(k)}(g0)/k!
  /// of f at g0 = value(), k = 0..Order. Evaluated by Horner in (g - g0).
  Jet compose(const std::array<double, Order + 1>& taylor) const {
    Jet delta = *this;
    delta.coeffs_[0] = 0.0;
    Jet r = constant(taylor[Order], base_);
    r.order_ = order_;
    for (int k = Order - 1; k >= 0; --k) {
      r = r * delta;
      r.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
    }
    return r;
  }

  Jet operator-() const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < size; ++k) coeffs_[static_cast<std::size_t>(k)] += o.coeffs_[static_cast<std::size_t>(k)];
    order_ = std::min(order_, o.order_);
    clear_above_order();
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < size; ++k) coeffs_[static_cast<std::size_t>(k)] -= o.coeffs_[static_cast<std::size_t>(k)];
    order_ = std::min(order_, o.order_);
    clear_above_order();
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  Jet& operator+=(double s) { coeffs_[0] += s; return *this; }
  Jet& operator-=(double s) { coeffs_[0] -= s; return *this; }
  Jet& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    if (s == 0.0) throw DomainError("division by zero");
    for (auto& c : coeffs_) c /= s;
    return *this;
  }

  friend Jet operator*(const Jet& l, const Jet& r) {
    Jet out;
    out.base_ = l.base_;
    out.order_ = std::min(l.order_, r.order_);
    for (const auto& t : Layout::product_terms) out.coeffs_[t.out] += l.coeffs_[t.lhs] * r.coeffs_[t.rhs];
    out.clear_above_order();
    return out;
  }

  friend Jet operator/(const Jet& l, const Jet& r) { return l * reciprocal(r); }

  friend Jet reciprocal(const Jet& g) {
    const double g0 = g.value();
    if (g0 == 0.0) throw DomainError("division by zero");
    std::array<double, Order + 1> t{};
    double inv = 1.0 / g0;
    double p = inv;
    for (int k = 0; k <= Order; ++k) {
      t[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
      p *= inv;
    }
    return g.compose(t);
  }

  friend Jet operator+(Jet l, const Jet& r) { return l += r; }
  friend Jet operator-(Jet l, const Jet& r) { return l -= r; }
  friend Jet operator+(Jet l, double s) { return l += s; }
  friend Jet operator+(double s, Jet r) { return r += s; }
  friend Jet operator-(Jet l, double s) { return l -= s; }
  friend Jet operator-(double s, const Jet& r) { return (-r) += s; }
  friend Jet operator*(Jet l, double s) { return l *= s; }
  friend Jet operator*(double s, Jet r) { return r *= s; }
  friend Jet operator/(Jet l, double s) { return l /= s; }
  friend Jet operator/(double s, const Jet& r) { return reciprocal(r) * s; }

 private:
  void check_order(int total) const {
    if (total > order_)
      throw OrderExceeded("derivative of order " + std::to_string(total) +
                          " requested from a jet valid to order " + std::to_string(order_));
  }

  void clear_above_order() {
    for (int k = detail::count_up_to(order_); k < size; ++k) coeffs_[static_cast<std::size_t>(k)] = 0.0;
  }

  Coefficients coeffs_;
  ChartPoint base_{};
  int order_ = Order;
};

// Elementary functions. Each raises DomainError where the function or one of
// its derivatives is undefined at the base value.

template <int O>
Jet<O> exp(const Jet<O>& g) {
  std::array<double, O + 1> t{};
  const double e = std::exp(g.value());
  for (int k = 0; k <= O; ++k) t[static_cast<std::size_t>(k)] = e / detail::factorial(k);
  return g.compose(t);
}

template <int O>
Jet<O> sin(const Jet<O>& g) {
  std::array<double, O + 1> t{};
  const double s = std::sin(g.value()), c = std::cos(g.value());
  const double cycle[4] = {s, c, -s, -c};
  for (int k = 0; k <= O; ++k) t[static_cast<std::size_t>(k)] = cycle[k % 4] / detail::factorial(k);
  return g.compose(t);
}

template <int O>
Jet<O> cos(const Jet<O>& g) {
  std::array<double, O + 1> t{};
  const double s = std::sin(g.value()), c = std::cos(g.value());
  const double cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= O; ++k) t[static_cast<std::size_t>(k)] = cycle[k % 4] / detail::factorial(k);
  return g.compose(t);
}

template <int O>
Jet<O> tan(const Jet<O>& g) {
  if (std::abs(std::cos(g.value())) < 1e-300) throw DomainError("tan: pole");
  return sin(g) / cos(g);
}

template <int O>
Jet<O> sinh(const Jet<O>& g) {
  std::array<double, O + 1> t{};
  const double s = std::sinh(g.value()), c = std::cosh(g.value());
  for (int k = 0; k <= O; ++k) t[static_cast<std::size_t>(k)] = (k % 2 == 0 ? s : c) / detail::factorial(k);
  return g.compose(t);
}

template <int O>
Jet<O> cosh(const Jet<O>& g) {
  std::array<double, O + 1> t{};
  const double s = std::sinh(g.value()), c = std::cosh(g.value());
  for (int k = 0; k <= O; ++k) t[static_cast<std::size_t>(k)] = (k % 2 == 0 ? c : s) / detail::factorial(k);
  return g.compose(t);
}

template <int O>
Jet<O> log(const Jet<O>& g) {
  const double g0 = g.value();
  if (!(g0 > 0.0)) throw DomainError("log of non-positive value " + error_number(g0));
  std::array<double, O + 1> t{};
  t[0] = std::log(g0);
  double p = 1.0;
  for (int k = 1; k <= O; ++k) {
    p /= g0;
    t[static_cast<std::size_t>(k)] = (k % 2 == 1 ? p : -p) / k;
  }
  return g.compose(t);
}

/// Generalized binomial series of g^e around g0 != 0, where `root` = g0^e.
template <int O>
Jet<O> power_series(const Jet<O>& g, double e, double root) {
  const double g0 = g.value();
  std::array<double, O + 1> t{};
  double binom = 1.0, p = 1.0;
  for (int k = 0; k <= O; ++k) {
    t[static_cast<std::size_t>(k)] = binom * root / p;
    binom *= (e - k) / (k + 1);
    p *= g0;
  }
  return g.compose(t);
}

/// g^e for a constant exponent. Integer exponents go through exact repeated
/// multiplication and accept negative bases; others need g0 > 0.
template <int O>
Jet<O> pow(const Jet<O>& g, double e) {
  const double g0 = g.value();
  if (e == std::round(e) && std::abs(e) <= 64.0) {
    long n = static_cast<long>(std::abs(e));
    Jet<O> result = Jet<O>::constant(1.0, g.base_point());
    Jet<O> base = g;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    if (e < 0) {
      if (g0 == 0.0) throw DomainError("negative power of zero");
      return reciprocal(result);
    }
    return result.truncated(g.order());
  }
  if (!(g0 > 0.0)) throw DomainError("non-integer power of non-positive value " + error_number(g0));
  return power_series(g, e, std::pow(g0, e));
}

template <int O>
Jet<O> sqrt(const Jet<O>& g) {
  const double g0 = g.value();
  if (!(g0 > 0.0)) throw DomainError("sqrt of non-positive value " + error_number(g0));
  return power_series(g, 0.5, std::sqrt(g0));
}

/// Real cube root; defined for negative arguments, not at zero.
template <int O>
Jet<O> cbrt(const Jet<O>& g) {
  const double g0 = g.value();
  if (g0 == 0.0) throw DomainError("cbrt is not differentiable at 0");
  // For g0 < 0, g0^(1/3 - k) = cbrt(g0) / g0^k keeps the real branch.
  return power_series(g, 1.0 / 3.0, std::cbrt(g0));
}

template <int O>
Jet<O> abs(const Jet<O>& g) {
  const double g0 = g.value();
  if (g0 == 0.0) throw DomainError("abs is not differentiable at 0");
  return g0 > 0.0 ? g : -g;
}

}  // namespace relgeo4
