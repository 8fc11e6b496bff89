#pragma once

// Sparse multivariate polynomials with rational coefficients, quotients of
// them, and evaluation at any scalar type that supports ring operations
// (Rational, RationalInterval, double).

#include "intrinsic/multi_index.hpp"
#include "intrinsic/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace intrinsic {

template <typename T>
T scalar_from(const Rational& r) {
  if constexpr (std::is_same_v<T, double>) {
    return to_double(r);
  } else {
    return T(r);
  }
}

inline double ipow(double x, unsigned e) {
  double r = 1;
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Rational, GradedLess>;

  Polynomial() = default;
  explicit Polynomial(unsigned variables) : variables_(variables) {}

  static Polynomial constant(unsigned variables, const Rational& c);
  static Polynomial variable(unsigned variables, unsigned i);
  static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1);

  unsigned variables() const { return variables_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of the zero polynomial is reported as 0.
  unsigned degree() const;
  Rational coefficient(const MultiIndex& alpha) const;

  void add_term(const MultiIndex& alpha, const Rational& c);

  Polynomial derivative(unsigned variable) const;
  Polynomial derivative(const MultiIndex& alpha) const;

  template <typename T>
  T operator()(std::span<const T> x) const;

  template <typename T>
  T operator()(const Vector<T>& x) const {
    return (*this)(std::span<const T>(x.data(), static_cast<std::size_t>(x.size())));
  }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.variables_ == b.variables_ && a.terms_ == b.terms_;
  }

  /// Univariate coefficient list (lowest degree first); requires one variable.
  std::vector<Rational> univariate_coefficients() const;
  static Polynomial from_univariate(std::span<const Rational> coefficients);

 private:
  unsigned variables_ = 0;
  Terms terms_;
};

Polynomial pow(const Polynomial& p, unsigned e);

/// Human-readable form in variables named by `names` (defaults t1, t2, ...).
std::string to_string(const Polynomial& p, const std::vector<std::string>& names = {});

template <typename T>
T Polynomial::operator()(std::span<const T> x) const {
  if (x.size() != variables_) throw InvalidArgument("polynomial evaluated with wrong arity");
  T sum = scalar_from<T>(Rational(0));
  for (const auto& [alpha, c] : terms_) {
    T term = scalar_from<T>(c);
    for (unsigned i = 0; i < variables_; ++i) {
      if (alpha[i] != 0) term = term * ipow(x[i], alpha[i]);
    }
    sum = sum + term;
  }
  return sum;
}

/// numerator / denominator; the denominator is never the zero polynomial.
struct RationalFunction {
  Polynomial numerator;
  Polynomial denominator;

  RationalFunction() = default;
  explicit RationalFunction(Polynomial num);
  RationalFunction(Polynomial num, Polynomial den);

  unsigned variables() const { return numerator.variables(); }
  bool is_polynomial() const;

  RationalFunction derivative(unsigned variable) const;
  RationalFunction derivative(const MultiIndex& alpha) const;
};

}  // namespace intrinsic
