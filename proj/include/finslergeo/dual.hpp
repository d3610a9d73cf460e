#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<...>> gives exact mixed
// directional derivatives: with k levels seeded along directions
// u_1..u_k, the innermost-of-outermost coefficient v.d.d...d equals
// D^k f(y)[u_1, ..., u_k].

#include <cmath>
#include <type_traits>

namespace finslergeo {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
  // Embeds a constant.
  explicit constexpr Dual(double c) : v(T(c)), d(T(0.0)) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator*=(double s) { v *= s; d *= s; return *this; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T> struct dual_depth : std::integral_constant<int, 0> {};
template <class T> struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double s) { return {a.v + s, a.d}; }
template <class T> Dual<T> operator+(double s, const Dual<T>& a) { return {a.v + s, a.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double s) { return {a.v - s, a.d}; }
template <class T> Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double s) { return {a.v * s, a.d * s}; }
template <class T> Dual<T> operator*(double s, const Dual<T>& a) { return {a.v * s, a.d * s}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double s) { return {a.v / s, a.d / s}; }
template <class T> Dual<T> operator/(double s, const Dual<T>& a) {
  T q = s / a.v;
  return {q, -(q * a.d) / a.v};
}

template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T> Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::sin;
  using std::cos;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::sin;
  using std::cos;
  return {cos(a.v), -(a.d * sin(a.v))};
}
// x^p for real p; requires x > 0 unless p is a positive integer value.
template <class T> Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  T pm1 = pow(a.v, p - 1.0);
  return {pm1 * a.v, a.d * (p * pm1)};
}

/// Underlying double of any nesting depth.
inline double value_of(double x) { return x; }
template <class T> double value_of(const Dual<T>& x) { return value_of(x.v); }

/// Lifts a scalar of lower nesting depth into Target by padding zero derivatives.
template <class Target, class S>
Target lift(const S& s) {
  if constexpr (std::is_same_v<Target, S>) {
    return s;
  } else {
    static_assert(dual_depth<Target>::value > dual_depth<S>::value, "cannot lift to a shallower type");
    using Inner = decltype(Target{}.v);
    return Target(lift<Inner>(s), Inner(0.0));
  }
}

/// Inverse of lift: drops the outer derivative slots.
template <class Target, class S>
Target lower(const S& s) {
  if constexpr (std::is_same_v<Target, S>) {
    return s;
  } else {
    return lower<Target>(s.v);
  }
}

}  // namespace finslergeo
