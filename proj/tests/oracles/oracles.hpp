#pragma once

// Independent reference computations used only by the tests. Each one takes
// a different route from the library code it checks.

#include "intrinsic/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using intrinsic::Integer;
using intrinsic::Rational;
using intrinsic::RationalMatrix;

/// Laplace expansion along the first row.
inline Rational cofactor_det(const RationalMatrix& m) {
  const auto n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Rational sum = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    RationalMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    const Rational term = m(0, j) * cofactor_det(minor);
    sum += (j % 2 == 0) ? term : Rational(-term);
  }
  return sum;
}

/// Rank by Gaussian elimination over Q with full pivot search.
inline Eigen::Index gauss_rank(RationalMatrix m) {
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < m.cols() && rank < m.rows(); ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = rank; r < m.rows(); ++r)
      if (m(r, c) != 0) piv = r;
    if (piv < 0) continue;
    m.row(piv).swap(m.row(rank));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == rank || m(r, c) == 0) continue;
      const Rational f = m(r, c) / m(rank, c);
      m.row(r) -= f * m.row(rank);
    }
    ++rank;
  }
  return rank;
}

/// Pascal's triangle: C(n + m, m).
inline Integer pascal(unsigned n, unsigned m) {
  std::vector<std::vector<Integer>> t(n + m + 1);
  for (unsigned r = 0; r <= n + m; ++r) {
    t[r].assign(r + 1, 1);
    for (unsigned c = 1; c < r; ++c) t[r][c] = t[r - 1][c - 1] + t[r - 1][c];
  }
  return t[n + m][m];
}

/// Sorted list of all reduced p/q in [lo, hi] with q <= Q by a double loop.
inline std::vector<Rational> farey_by_loops(const Rational& lo, const Rational& hi, long long Q) {
  std::vector<Rational> out;
  for (long long q = 1; q <= Q; ++q) {
    const long long p_lo = intrinsic::ceil(lo * q).convert_to<long long>();
    const long long p_hi = intrinsic::floor(hi * q).convert_to<long long>();
    for (long long p = p_lo; p <= p_hi; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(Integer(p), Integer(q));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Minimal total degree of d + 1 distinct monomials in k variables: count
/// the monomials of each degree by stars and bars and take the cheapest.
inline long long N_by_monomials(unsigned k, unsigned d) {
  long long need = d + 1, total = 0;
  for (unsigned deg = 0; need > 0; ++deg) {
    // Number of exponent vectors in N^k of degree deg, counted recursively.
    std::vector<std::vector<long long>> count(k + 1, std::vector<long long>(deg + 1, 0));
    count[0][0] = 1;
    for (unsigned v = 1; v <= k; ++v)
      for (unsigned s = 0; s <= deg; ++s)
        for (unsigned e = 0; e <= s; ++e) count[v][s] += count[v - 1][s - e];
    const long long take = std::min(need, count[k][deg]);
    total += take * deg;
    need -= take;
  }
  return total;
}

/// Continued fraction expansion of the positive root of a x^2 + b x + c
/// (a > 0, discriminant a positive non-square), computed with the classical
/// (P + sqrt(D)) / Q recurrence. Returns the convergents p/q with q <= q_max.
inline std::vector<std::pair<Integer, Integer>> quadratic_convergents(long long a, long long b, long long c,
                                                                      const Integer& q_max) {
  // x = (-b + sqrt(D)) / (2a) = (P + sqrt(D)) / Q with P = -b, Q = 2a.
  const Integer D = Integer(b) * b - Integer(4) * a * c;
  Integer P = -b, Q = 2 * a;
  Integer Dm = D;
  // Keep Q | D - P^2 by scaling when needed.
  if ((D - P * P) % Q != 0) {
    P *= abs(Q);
    Dm = D * Q * Q;
    Q *= abs(Q);
  }
  const Integer s = intrinsic::integer_root(Dm, 2);
  std::vector<std::pair<Integer, Integer>> out;
  Integer p_prev = 0, q_prev = 1, p_cur = 1, q_cur = 0;
  for (int it = 0; it < 10000; ++it) {
    // a_n = floor((P + sqrt(Dm)) / Q)
    Integer num = P + s;
    if (Q < 0) num = P + s + 1;
    Integer an;
    mpz_fdiv_q(an.backend().data(), num.backend().data(), Q.backend().data());
    const Integer p_next = an * p_cur + p_prev, q_next = an * q_cur + q_prev;
    if (q_next > q_max) break;
    out.emplace_back(p_next, q_next);
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    P = an * Q - P;
    Q = (Dm - P * P) / Q;
  }
  return out;
}

}  // namespace oracle
