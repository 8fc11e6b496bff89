#include "intrinsic/farey.hpp"

namespace intrinsic {

Rational farey_ceil(const Rational& x, const Integer& max_den) {
  if (max_den < 1) throw InvalidArgument("farey_ceil needs max_den >= 1");
  if (denominator(x) <= max_den) return x;
  const Integer n = floor(x);
  const Rational y = x - n;  // in (0, 1), denominator > max_den

  Integer lp = 0, lq = 1, rp = 1, rq = 1;
  while (lq + rq <= max_den) {
    const Rational mediant(lp + rp, lq + rq);
    if (mediant < y) {
      // Largest j with (lp + j rp) / (lq + j rq) < y and lq + j rq <= max_den.
      const Rational bound = (y * lq - lp) / (rp - y * rq);
      Integer j = ceil(bound) - 1;
      const Integer j_den = (max_den - lq) / rq;
      if (j_den < j) j = j_den;
      lp += j * rp;
      lq += j * rq;
    } else {
      const Rational bound = (rp - y * rq) / (y * lq - lp);
      Integer j = ceil(bound) - 1;
      const Integer j_den = (max_den - rq) / lq;
      if (j_den < j) j = j_den;
      rp += j * lp;
      rq += j * lq;
    }
  }
  return Rational(n) + Rational(rp, rq);
}

Rational farey_successor(const Rational& x, const Integer& max_den) {
  const Integer a = numerator(x), b = denominator(x);
  if (b > max_den) throw InvalidArgument("farey_successor: denominator exceeds the bound");
  Integer d;
  if (b == 1) {
    d = max_den;
  } else {
    Integer a_mod, inv;
    mpz_fdiv_r(a_mod.backend().data(), a.backend().data(), b.backend().data());
    mpz_invert(inv.backend().data(), a_mod.backend().data(), b.backend().data());
    const Integer d0 = b - inv;  // a * d0 = -1 mod b
    d = d0 + b * ((max_den - d0) / b);
  }
  const Integer c = (1 + a * d) / b;
  return Rational(c, d);
}

void for_each_fraction(const Rational& lo, const Rational& hi, const Integer& max_den,
                       const std::function<bool(const Rational&)>& visit) {
  if (hi < lo) return;
  for (Rational cur = farey_ceil(lo, max_den); cur <= hi; cur = farey_successor(cur, max_den)) {
    if (!visit(cur)) return;
  }
}

std::vector<Rational> fractions_in(const Rational& lo, const Rational& hi, const Integer& max_den) {
  std::vector<Rational> out;
  for_each_fraction(lo, hi, max_den, [&](const Rational& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

double estimated_fraction_count(const Rational& lo, const Rational& hi, const Integer& max_den) {
  if (hi < lo) return 0;
  const double q = max_den.convert_to<double>();
  return 0.31 * to_double(hi - lo) * q * q + 2;
}

std::vector<Integer> continued_fraction(const Rational& x) {
  std::vector<Integer> out;
  Integer p = numerator(x), q = denominator(x);
  while (q != 0) {
    Integer a, r;
    mpz_fdiv_qr(a.backend().data(), r.backend().data(), p.backend().data(), q.backend().data());
    out.push_back(a);
    p = q;
    q = r;
  }
  return out;
}

}  // namespace intrinsic
