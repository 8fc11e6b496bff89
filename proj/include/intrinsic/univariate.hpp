#pragma once

// Dense univariate polynomials over Q with Sturm-sequence real root
// isolation. Isolating intervals have rational endpoints and are refined by
// bisection, so nothing here ever leaves exact arithmetic.

#include "intrinsic/polynomial.hpp"
#include "intrinsic/rational.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace intrinsic {

class IdenticallyZero : public Error {
 public:
  using Error::Error;
};

class UPoly {
 public:
  UPoly() = default;
  /// Coefficients lowest degree first; trailing zeros are trimmed.
  explicit UPoly(std::vector<Rational> coefficients);
  explicit UPoly(const Polynomial& p) : UPoly(p.univariate_coefficients()) {}

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  RationalInterval operator()(const RationalInterval& x) const;
  double operator()(double x) const;
  int sign_at(const Rational& x) const;

  UPoly derivative() const;
  /// Polynomial in u with q(u) = p(x0 + u).
  UPoly taylor_shift(const Rational& x0) const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; `divisor` must be nonzero.
  static void divide(const UPoly& dividend, const UPoly& divisor, UPoly& quotient, UPoly& remainder);
  UPoly monic() const;

  Polynomial to_polynomial() const;

 private:
  std::vector<Rational> c_;
};

UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);

/// p, p', -rem(p, p'), ... for squarefree p.
std::vector<UPoly> sturm_sequence(const UPoly& p);
int sign_variations(const std::vector<UPoly>& sequence, const Rational& x);

/// Isolating interval. Either a point [r, r] at an exact rational root, or an
/// open interval (lo, hi) with p(lo) p(hi) < 0 holding exactly one root.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};

/// Isolates every real root of p in the closed interval [a, b], ascending.
/// Throws IdenticallyZero for the zero polynomial.
std::vector<RootInterval> isolate_roots(const UPoly& p, const Rational& a, const Rational& b);

/// Number of distinct real roots of p in the closed interval [a, b].
int count_roots(const UPoly& p, const Rational& a, const Rational& b);

/// Bisects an isolating interval of the squarefree polynomial p until its
/// width is at most `width`.
RootInterval refine(const UPoly& p, RootInterval root, const Rational& width);

/// Bound B with every real root in [-B, B] (Cauchy).
Rational root_bound(const UPoly& p);

/// Enclosure [lo, hi] of sup_{x in [a, b]} |p(x)|, with hi - lo <= tolerance
/// unless `max_rounds` refinements are exhausted.
RationalInterval sup_norm(const UPoly& p, const Rational& a, const Rational& b, const Rational& tolerance,
                          int max_rounds = 60);

/// Parses expressions such as "x^2 - x - 1", "3/2*x^3 + x" or "2x - 1".
UPoly parse_upoly(std::string_view text);

std::string to_string(const UPoly& p);

}  // namespace intrinsic
