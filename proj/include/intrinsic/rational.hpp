#pragma once

// Exact scalar types shared by every module: arbitrary-precision integers and
// rationals (GMP through boost::multiprecision, expression templates off so
// the types compose cleanly with Eigen), closed rational intervals, and
// reduced rational points carrying their height.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intrinsic {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RationalVector = Vector<Rational>;
using RationalMatrix = Matrix<Rational>;
using IntegerVector = Vector<Integer>;
using IntegerMatrix = Matrix<Integer>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Integer helpers

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// floor(n^(1/k)) for n >= 0, k >= 1.
Integer integer_root(const Integer& n, unsigned k);

Integer ipow(const Integer& base, unsigned exponent);
Rational ipow(const Rational& base, unsigned exponent);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);

/// [n, m] := C(n + m, m).
Integer binom(unsigned n, unsigned m);

/// Smallest j >= 0 with 2^j >= x, for positive x.
int ceil_log2(const Rational& x);

// ---------------------------------------------------------------------------
// Text forms. Rationals always serialize as "num/den" (den >= 1).

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

/// Accepts "p/q", "p", decimal "0.125", scientific "1e6" and powers "2^-20".
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

double to_double(const Rational& x);

// ---------------------------------------------------------------------------

/// Closed interval [lo, hi] with exact endpoints.
template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};

  Interval() = default;
  Interval(Scalar point) : lo(point), hi(point) {}  // NOLINT(google-explicit-constructor)
  Interval(Scalar a, Scalar b) : lo(std::move(a)), hi(std::move(b)) {
    if (hi < lo) throw InvalidArgument("interval with hi < lo");
  }

  Scalar width() const { return hi - lo; }
  Scalar midpoint() const { return (lo + hi) / 2; }
  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
  bool is_point() const { return lo == hi; }
};

template <typename Scalar>
Interval<Scalar> operator+(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

template <typename Scalar>
Interval<Scalar> operator-(const Interval<Scalar>& a) {
  return {-a.hi, -a.lo};
}

template <typename Scalar>
Interval<Scalar> operator-(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

template <typename Scalar>
Interval<Scalar> operator*(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  if (a.is_point() && b.is_point()) return Interval<Scalar>(a.lo * b.lo);
  Scalar p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Scalar lo = p[0], hi = p[0];
  for (int i = 1; i < 4; ++i) {
    if (p[i] < lo) lo = p[i];
    if (hi < p[i]) hi = p[i];
  }
  return {lo, hi};
}

template <typename Scalar>
Interval<Scalar> operator/(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  if (b.contains_zero()) throw InvalidArgument("interval division by an interval containing 0");
  return a * Interval<Scalar>(Scalar(1) / b.hi, Scalar(1) / b.lo);
}

template <typename Scalar>
Interval<Scalar>& operator+=(Interval<Scalar>& a, const Interval<Scalar>& b) { return a = a + b; }
template <typename Scalar>
Interval<Scalar>& operator*=(Interval<Scalar>& a, const Interval<Scalar>& b) { return a = a * b; }

template <typename Scalar>
Interval<Scalar> abs(const Interval<Scalar>& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return {Scalar(0), a.hi > -a.lo ? a.hi : -a.lo};
}

/// Tight power: even exponents of intervals straddling zero start at zero.
template <typename Scalar>
Interval<Scalar> ipow(const Interval<Scalar>& a, unsigned e) {
  if (e == 0) return Interval<Scalar>(Scalar(1));
  Interval<Scalar> base = (e % 2 == 0) ? abs(a) : a;
  Scalar lo = 1, hi = 1;
  for (unsigned i = 0; i < e; ++i) {
    lo *= base.lo;
    hi *= base.hi;
  }
  return {lo, hi};
}

using RationalInterval = Interval<Rational>;

/// Max-norm distance from x to the closed interval iv.
Rational distance(const RationalInterval& iv, const Rational& x);

// ---------------------------------------------------------------------------

/// A point of Q^d written as p/q with gcd(p_1, ..., p_d, q) = 1; its height
/// is q.
class RationalPoint {
 public:
  RationalPoint() = default;
  RationalPoint(IntegerVector numerators, Integer denominator);

  Eigen::Index dim() const { return numerators_.size(); }
  const IntegerVector& numerators() const { return numerators_; }
  const Integer& denominator() const { return denominator_; }
  const Integer& height() const { return denominator_; }

  Rational coordinate(Eigen::Index i) const { return Rational(numerators_(i), denominator_); }
  RationalVector to_rationals() const;

  friend bool operator==(const RationalPoint& a, const RationalPoint& b);
  /// Canonical order: by height, then lexicographically by numerators.
  friend bool operator<(const RationalPoint& a, const RationalPoint& b);

 private:
  IntegerVector numerators_;
  Integer denominator_{1};
};

/// Writes a rational vector in jointly primitive form.
RationalPoint reduce(const RationalVector& components);
RationalPoint reduce(std::span<const Rational> components);

std::string to_string(const RationalPoint& p);

/// Max-norm distance between a rational point and a rational vector.
Rational max_distance(const RationalPoint& p, const RationalVector& x);

}  // namespace intrinsic
