#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>

namespace genaudit {

using Rational = mpq_class;

enum class NumericKind { exact, float64 };

struct NumericMode {
  NumericKind kind = NumericKind::float64;
  // Ignored in exact mode.
  double tolerance = 1e-12;

  static NumericMode exact() { return {NumericKind::exact, 0.0}; }
  static NumericMode float64(double tol = 1e-12) {
    return {NumericKind::float64, tol};
  }
};

// Exact conversion of the shortest round-trip decimal of `x`, so that 0.3
// becomes 3/10 rather than the nearest dyadic rational.
Rational rational_from_decimal(double x);

// Exact dyadic value of `x`.
inline Rational rational_from_double(double x) { return Rational(x); }

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_decimal(double x) { return x; }
  static double from_double(double x) { return x; }
  static double ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static std::string str(double x);
};

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_decimal(double x) { return rational_from_decimal(x); }
  static Rational from_double(double x) { return rational_from_double(x); }
  static Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational abs(const Rational& x) { return Rational(::abs(x)); }
  static std::string str(const Rational& x) { return x.get_str(); }
};

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
double to_double(const T& x) {
  return ScalarOps<T>::to_double(x);
}

// a <= b, exactly for rationals, within `tol` for floats.
template <Scalar T>
bool le_tol(const T& a, const T& b, double tol) {
  if constexpr (ScalarOps<T>::exact) {
    return a <= b;
  } else {
    return a <= b + tol;
  }
}

template <Scalar T>
bool eq_tol(const T& a, const T& b, double tol) {
  if constexpr (ScalarOps<T>::exact) {
    return a == b;
  } else {
    return std::fabs(a - b) <= tol;
  }
}

}  // namespace genaudit
