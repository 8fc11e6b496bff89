#include "intrinsic/polynomial.hpp"

namespace intrinsic {

Polynomial Polynomial::constant(unsigned variables, const Rational& c) {
  Polynomial p(variables);
  p.add_term(MultiIndex::zero(variables), c);
  return p;
}

Polynomial Polynomial::variable(unsigned variables, unsigned i) {
  Polynomial p(variables);
  p.add_term(MultiIndex::unit(variables, i), 1);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
  Polynomial p(alpha.size());
  p.add_term(alpha, c);
  return p;
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.degree());
  return d;
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
  if (alpha.size() != variables_) throw InvalidArgument("term arity does not match polynomial");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(unsigned variable) const {
  Polynomial d(variables_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha[variable] == 0) continue;
    MultiIndex beta = alpha;
    beta.exponents[variable] -= 1;
    d.add_term(beta, c * alpha[variable]);
  }
  return d;
}

Polynomial Polynomial::derivative(const MultiIndex& alpha) const {
  Polynomial d = *this;
  for (unsigned i = 0; i < alpha.size(); ++i)
    for (unsigned j = 0; j < alpha[i]; ++j) d = d.derivative(i);
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (variables_ != other.variables_) throw InvalidArgument("polynomial arity mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (variables_ != other.variables_) throw InvalidArgument("polynomial arity mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, coef] : terms_) coef *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.variables_ != b.variables_) throw InvalidArgument("polynomial arity mismatch");
  Polynomial r(a.variables_);
  for (const auto& [x, cx] : a.terms_)
    for (const auto& [y, cy] : b.terms_) r.add_term(x + y, cx * cy);
  return r;
}

Polynomial pow(const Polynomial& p, unsigned e) {
  Polynomial r = Polynomial::constant(p.variables(), 1);
  for (unsigned i = 0; i < e; ++i) r = r * p;
  return r;
}

std::vector<Rational> Polynomial::univariate_coefficients() const {
  if (variables_ != 1) throw InvalidArgument("univariate_coefficients needs one variable");
  std::vector<Rational> c(degree() + 1, Rational(0));
  for (const auto& [alpha, coef] : terms_) c[alpha[0]] = coef;
  return c;
}

Polynomial Polynomial::from_univariate(std::span<const Rational> coefficients) {
  Polynomial p(1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    p.add_term(MultiIndex(std::vector<unsigned>{static_cast<unsigned>(i)}), coefficients[i]);
  }
  return p;
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [alpha, c] : p.terms()) {
    std::string coef = to_string(c);
    if (!s.empty()) s += " + ";
    s += coef;
    for (unsigned i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      s += "*" + (i < names.size() ? names[i] : "t" + std::to_string(i + 1));
      if (alpha[i] > 1) s += "^" + std::to_string(alpha[i]);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(Polynomial num)
    : numerator(std::move(num)), denominator(Polynomial::constant(numerator.variables(), 1)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : numerator(std::move(num)), denominator(std::move(den)) {
  if (denominator.is_zero()) throw InvalidArgument("rational function with zero denominator");
  if (numerator.variables() != denominator.variables()) {
    throw InvalidArgument("rational function arity mismatch");
  }
}

bool RationalFunction::is_polynomial() const {
  return denominator.degree() == 0;
}

RationalFunction RationalFunction::derivative(unsigned variable) const {
  if (is_polynomial()) {
    const Rational c = denominator.coefficient(MultiIndex::zero(variables()));
    return RationalFunction(numerator.derivative(variable) * (Rational(1) / c));
  }
  Polynomial num = numerator.derivative(variable) * denominator - numerator * denominator.derivative(variable);
  return RationalFunction(std::move(num), denominator * denominator);
}

RationalFunction RationalFunction::derivative(const MultiIndex& alpha) const {
  RationalFunction d = *this;
  for (unsigned i = 0; i < alpha.size(); ++i)
    for (unsigned j = 0; j < alpha[i]; ++j) d = d.derivative(i);
  return d;
}

}  // namespace intrinsic
