#include "intrinsic/univariate.hpp"

#include <algorithm>
#include <cctype>

namespace intrinsic {

UPoly::UPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::operator()(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

RationalInterval UPoly::operator()(const RationalInterval& x) const {
  // Centered form around the midpoint: tighter than plain Horner on wide
  // intervals and exact for point intervals.
  if (x.is_point()) return RationalInterval((*this)(x.lo));
  const Rational m = x.midpoint();
  const UPoly shifted = taylor_shift(m);
  const RationalInterval u(x.lo - m, x.hi - m);
  RationalInterval r(Rational(0));
  const auto& c = shifted.c_;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + RationalInterval(*it);
  return r;
}

double UPoly::operator()(double x) const {
  double r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + to_double(*it);
  return r;
}

int UPoly::sign_at(const Rational& x) const {
  const Rational v = (*this)(x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return UPoly(std::move(d));
}

UPoly UPoly::taylor_shift(const Rational& x0) const {
  // Horner-style synthetic division repeated n times.
  std::vector<Rational> a = c_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) a[j - 1] += x0 * a[j];
  return UPoly(std::move(a));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

void UPoly::divide(const UPoly& dividend, const UPoly& divisor, UPoly& quotient, UPoly& remainder) {
  if (divisor.is_zero()) throw InvalidArgument("polynomial division by zero");
  std::vector<Rational> r = dividend.c_;
  const int dd = divisor.degree();
  std::vector<Rational> q(r.size() >= divisor.c_.size() ? r.size() - divisor.c_.size() + 1 : 0, Rational(0));
  for (int i = static_cast<int>(r.size()) - 1; i >= dd; --i) {
    if (r[static_cast<std::size_t>(i)] == 0) continue;
    const Rational f = r[static_cast<std::size_t>(i)] / divisor.leading();
    q[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
  }
  quotient = UPoly(std::move(q));
  remainder = UPoly(std::move(r));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> c = c_;
  const Rational lead = c.back();
  for (auto& x : c) x /= lead;
  return UPoly(std::move(c));
}

Polynomial UPoly::to_polynomial() const { return Polynomial::from_univariate(c_); }

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly q, r;
    UPoly::divide(x, y, q, r);
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  UPoly g = gcd(p, p.derivative());
  UPoly q, r;
  UPoly::divide(p, g, q, r);
  return q.monic();
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UPoly q, r;
    UPoly::divide(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(UPoly() - r);
  }
  if (seq.back().is_zero()) seq.pop_back();
  return seq;
}

int sign_variations(const std::vector<UPoly>& sequence, const Rational& x) {
  int variations = 0, last = 0;
  for (const auto& p : sequence) {
    const int s = p.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

namespace {

// Divides out the linear factor (x - r) of p, where p(r) = 0.
UPoly deflate(const UPoly& p, const Rational& r) {
  UPoly q, rem;
  UPoly::divide(p, UPoly({-r, Rational(1)}), q, rem);
  return q;
}

// Roots of squarefree p in the open interval (lo, hi); p(lo), p(hi) != 0.
void isolate_open(const UPoly& p, const Rational& lo, const Rational& hi, std::vector<RootInterval>& out) {
  if (p.degree() <= 0) return;
  const auto seq = sturm_sequence(p);
  const int n = sign_variations(seq, lo) - sign_variations(seq, hi);
  if (n <= 0) return;
  if (n == 1) {
    out.push_back({lo, hi});
    return;
  }
  const Rational m = (lo + hi) / 2;
  if (p.sign_at(m) == 0) {
    const UPoly rest = deflate(p, m);
    isolate_open(rest, lo, m, out);
    out.push_back({m, m});
    isolate_open(rest, m, hi, out);
    return;
  }
  isolate_open(p, lo, m, out);
  isolate_open(p, m, hi, out);
}

}  // namespace

std::vector<RootInterval> isolate_roots(const UPoly& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw IdenticallyZero("isolate_roots: polynomial is identically zero");
  std::vector<RootInterval> out;
  if (b < a) return out;
  UPoly q = squarefree_part(p);
  if (q.degree() <= 0) return out;
  if (q.sign_at(a) == 0) {
    out.push_back({a, a});
    q = deflate(q, a);
  }
  if (a == b) return out;
  bool root_at_b = false;
  if (q.degree() > 0 && q.sign_at(b) == 0) {
    root_at_b = true;
    q = deflate(q, b);
  }
  isolate_open(q, a, b, out);
  if (root_at_b) out.push_back({b, b});
  return out;
}

int count_roots(const UPoly& p, const Rational& a, const Rational& b) {
  return static_cast<int>(isolate_roots(p, a, b).size());
}

RootInterval refine(const UPoly& p, RootInterval root, const Rational& width) {
  if (root.exact()) return root;
  const UPoly q = squarefree_part(p);
  int s_lo = q.sign_at(root.lo);
  while (root.hi - root.lo > width) {
    const Rational m = (root.lo + root.hi) / 2;
    const int s = q.sign_at(m);
    if (s == 0) return {m, m};
    if (s == s_lo) {
      root.lo = m;
    } else {
      root.hi = m;
    }
  }
  return root;
}

Rational root_bound(const UPoly& p) {
  if (p.degree() <= 0) return 1;
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    const Rational r = abs(p.coefficients()[static_cast<std::size_t>(i)] / p.leading());
    if (r > m) m = r;
  }
  return 1 + m;
}

RationalInterval sup_norm(const UPoly& p, const Rational& a, const Rational& b, const Rational& tolerance,
                          int max_rounds) {
  Rational lower = std::max<Rational>(abs(p(a)), abs(p(b)));
  const UPoly dp = p.derivative();
  if (dp.is_zero() || a == b) return {lower, lower};

  std::vector<RootInterval> critical;
  for (const auto& r : isolate_roots(dp, a, b)) {
    if (r.exact()) {
      const Rational v = abs(p(r.lo));
      if (v > lower) lower = v;
    } else {
      critical.push_back(r);
    }
  }
  for (int round = 0;; ++round) {
    Rational upper = lower;
    for (const auto& r : critical) {
      const Rational lo_val = std::max<Rational>(abs(p(r.lo)), abs(p(r.hi)));
      if (lo_val > lower) lower = lo_val;
      const RationalInterval v = abs(p(RationalInterval(r.lo, r.hi)));
      if (v.hi > upper) upper = v.hi;
    }
    if (upper < lower) upper = lower;
    if (upper - lower <= tolerance || round >= max_rounds) return {lower, upper};
    for (auto& r : critical) {
      r = refine(dp, r, (r.hi - r.lo) / 2);
      if (r.exact()) {
        const Rational v = abs(p(r.lo));
        if (v > lower) lower = v;
      }
    }
    std::erase_if(critical, [](const RootInterval& r) { return r.exact(); });
  }
}

namespace {

bool is_variable(char c) { return c == 'x' || c == 't'; }

}  // namespace

UPoly parse_upoly(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InvalidArgument("empty polynomial");

  std::vector<std::string> terms;
  std::string current;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool split = (c == '+' || c == '-') && i > 0 && s[i - 1] != '^' && s[i - 1] != '*' && s[i - 1] != '/' &&
                       s[i - 1] != 'e' && s[i - 1] != 'E';
    if (split) {
      terms.push_back(current);
      current.clear();
    }
    current += c;
  }
  terms.push_back(current);

  std::vector<Rational> coefficients;
  for (std::string term : terms) {
    if (!term.empty() && term.front() == '+') term.erase(0, 1);
    if (term.empty()) throw InvalidArgument("malformed polynomial '" + std::string(text) + "'");
    auto pos = std::find_if(term.begin(), term.end(), is_variable);
    Rational coef;
    unsigned exponent = 0;
    if (pos == term.end()) {
      coef = parse_rational(term);
    } else {
      std::string head(term.begin(), pos);
      std::string tail(pos + 1, term.end());
      if (!head.empty() && head.back() == '*') head.pop_back();
      if (head.empty() || head == "+") {
        coef = 1;
      } else if (head == "-") {
        coef = -1;
      } else {
        coef = parse_rational(head);
      }
      if (tail.empty()) {
        exponent = 1;
      } else if (tail.front() == '^') {
        exponent = parse_integer(tail.substr(1)).convert_to<unsigned>();
      } else {
        throw InvalidArgument("malformed polynomial term '" + term + "'");
      }
    }
    if (coefficients.size() <= exponent) coefficients.resize(exponent + 1, Rational(0));
    coefficients[exponent] += coef;
  }
  return UPoly(std::move(coefficients));
}

std::string to_string(const UPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int i = p.degree(); i >= 0; --i) {
    const Rational& c = p.coefficients()[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    const Rational a = abs(c);
    if (i == 0 || a != 1) {
      s += denominator(a) == 1 ? numerator(a).str() : to_string(a);
      if (i > 0) s += "*";
    }
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace intrinsic
