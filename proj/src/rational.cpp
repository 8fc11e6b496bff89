#include "intrinsic/rational.hpp"

#include <algorithm>
#include <cctype>

namespace intrinsic {

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.backend().data(), a.backend().data(), b.backend().data());
  return r;
}

Integer integer_root(const Integer& n, unsigned k) {
  if (n < 0) throw InvalidArgument("integer_root of a negative number");
  if (k == 0) throw InvalidArgument("integer_root with k = 0");
  Integer r;
  mpz_root(r.backend().data(), n.backend().data(), k);
  return r;
}

Integer ipow(const Integer& base, unsigned exponent) {
  Integer r;
  mpz_pow_ui(r.backend().data(), base.backend().data(), exponent);
  return r;
}

Rational ipow(const Rational& base, unsigned exponent) {
  return Rational(ipow(numerator(base), exponent), ipow(denominator(base), exponent));
}

Integer floor(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.backend().data(), numerator(x).backend().data(), denominator(x).backend().data());
  return r;
}

Integer ceil(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.backend().data(), numerator(x).backend().data(), denominator(x).backend().data());
  return r;
}

Integer binom(unsigned n, unsigned m) {
  Integer r;
  mpz_bin_uiui(r.backend().data(), n + m, m);
  return r;
}

int ceil_log2(const Rational& x) {
  if (x <= 0) throw InvalidArgument("ceil_log2 of a nonpositive number");
  int j = 0;
  Rational p = 1;
  if (x <= 1) {
    while (x <= p / 2) {
      p /= 2;
      --j;
    }
    return j;
  }
  while (p < x) {
    p *= 2;
    ++j;
  }
  return j;
}

std::string to_string(const Integer& x) { return x.str(); }

std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_plain_integer(std::string_view s) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    throw InvalidArgument("not an integer: '" + std::string(s) + "'");
  }
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return Integer(text);
}

Rational parse_decimal(std::string_view s) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    Rational r(parse_plain_integer(s));
    return negative ? -r : r;
  }
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = s.substr(dot + 1);
  Integer w = whole.empty() ? Integer(0) : parse_plain_integer(whole);
  Integer f = frac.empty() ? Integer(0) : parse_plain_integer(frac);
  if (!frac.empty() && (frac.front() == '-' || frac.front() == '+')) {
    throw InvalidArgument("malformed decimal");
  }
  Integer scale = ipow(Integer(10), static_cast<unsigned>(frac.size()));
  Rational r = Rational(w) + Rational(f, scale);
  return negative ? -r : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw InvalidArgument("empty rational");
  if (auto caret = s.find('^'); caret != std::string_view::npos) {
    Rational base = parse_rational(s.substr(0, caret));
    Integer e = parse_plain_integer(s.substr(caret + 1));
    if (e >= 0) return ipow(base, e.convert_to<unsigned>());
    if (base == 0) throw InvalidArgument("zero to a negative power");
    return ipow(Rational(1) / base, static_cast<unsigned>((-e).convert_to<unsigned long>()));
  }
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_plain_integer(s.substr(0, slash));
    Integer den = parse_plain_integer(s.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    Rational mantissa = parse_decimal(s.substr(0, e));
    Integer exponent = parse_plain_integer(s.substr(e + 1));
    Rational ten = exponent >= 0 ? Rational(10) : Rational(1, 10);
    Integer mag = exponent >= 0 ? exponent : Integer(-exponent);
    return mantissa * ipow(ten, mag.convert_to<unsigned>());
  }
  return parse_decimal(s);
}

Integer parse_integer(std::string_view text) {
  Rational r = parse_rational(text);
  if (denominator(r) != 1) throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  return numerator(r);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational distance(const RationalInterval& iv, const Rational& x) {
  if (x < iv.lo) return iv.lo - x;
  if (x > iv.hi) return x - iv.hi;
  return 0;
}

// ---------------------------------------------------------------------------

RationalPoint::RationalPoint(IntegerVector numerators, Integer denominator)
    : numerators_(std::move(numerators)), denominator_(std::move(denominator)) {
  if (denominator_ <= 0) throw InvalidArgument("RationalPoint denominator must be positive");
  Integer g = denominator_;
  for (Eigen::Index i = 0; i < numerators_.size(); ++i) g = gcd(g, numerators_(i));
  if (g != 1) throw InvalidArgument("RationalPoint is not jointly primitive");
}

RationalVector RationalPoint::to_rationals() const {
  RationalVector v(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) v(i) = coordinate(i);
  return v;
}

bool operator==(const RationalPoint& a, const RationalPoint& b) {
  if (a.denominator_ != b.denominator_ || a.dim() != b.dim()) return false;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (a.numerators_(i) != b.numerators_(i)) return false;
  }
  return true;
}

bool operator<(const RationalPoint& a, const RationalPoint& b) {
  if (a.denominator_ != b.denominator_) return a.denominator_ < b.denominator_;
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    if (a.numerators_(i) != b.numerators_(i)) return a.numerators_(i) < b.numerators_(i);
  }
  return false;
}

RationalPoint reduce(std::span<const Rational> components) {
  if (components.empty()) throw InvalidArgument("reduce needs at least one component");
  // Each component is already in lowest terms, so the least common
  // denominator is automatically jointly primitive with the numerators.
  Integer q = 1;
  for (const auto& c : components) q = lcm(q, denominator(c));
  IntegerVector p(static_cast<Eigen::Index>(components.size()));
  for (std::size_t i = 0; i < components.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = numerator(components[i]) * (q / denominator(components[i]));
  }
  return RationalPoint(std::move(p), std::move(q));
}

RationalPoint reduce(const RationalVector& components) {
  return reduce(std::span<const Rational>(components.data(), static_cast<std::size_t>(components.size())));
}

std::string to_string(const RationalPoint& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (i) s += ", ";
    s += to_string(p.coordinate(i));
  }
  return s + ")";
}

Rational max_distance(const RationalPoint& p, const RationalVector& x) {
  Rational best = 0;
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    Rational diff = abs(p.coordinate(i) - x(i));
    if (diff > best) best = diff;
  }
  return best;
}

}  // namespace intrinsic
