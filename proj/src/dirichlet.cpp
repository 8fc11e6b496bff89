#include "intrinsic/dirichlet.hpp"

#include <string>

namespace intrinsic {

namespace {

void check_pair(unsigned k, unsigned d) {
  if (k < 1 || d < k) {
    throw InvalidPair("invalid dimension pair (k, d) = (" + std::to_string(k) + ", " + std::to_string(d) +
                      "): need 1 <= k <= d");
  }
}

}  // namespace

DirichletConstants dirichlet_constants(unsigned k, unsigned d) {
  check_pair(k, d);
  DirichletConstants c;
  c.k = k;
  c.d = d;
  // n is maximal with sum_{j=1}^n [k-1, j] <= d.
  Integer used = 0;
  Integer weighted = 0;
  unsigned n = 0;
  for (;;) {
    const Integer next = binom(k - 1, n + 1);
    if (used + next > d) break;
    used += next;
    weighted += next * (n + 1);
    ++n;
  }
  c.n_kd = n;
  c.m_kd = (Integer(d) - used).convert_to<unsigned>();
  c.N_kd = weighted + Integer(n + 1) * c.m_kd;
  c.c_kd = Rational(Integer(d + 1), c.N_kd);
  return c;
}

Integer N_bruteforce(unsigned k, unsigned d) {
  check_pair(k, d);
  if (d > 30) throw InvalidPair("N_bruteforce is limited to d <= 30");
  const unsigned total = d + 1;
  // best[s] = minimal weighted degree using s distinct multi-indices drawn
  // from the degrees processed so far; -1 marks unreachable.
  std::vector<long long> best(total + 1, -1);
  best[0] = 0;
  // Degree j offers [k-1, j] distinct multi-indices. Degrees beyond d are
  // never needed because every degree offers at least one.
  for (unsigned j = 0; j <= d; ++j) {
    const Integer cap_big = binom(k - 1, j);
    const unsigned cap = cap_big > total ? total : cap_big.convert_to<unsigned>();
    std::vector<long long> next(total + 1, -1);
    for (unsigned s = 0; s <= total; ++s) {
      if (best[s] < 0) continue;
      for (unsigned take = 0; take <= cap && s + take <= total; ++take) {
        const long long cost = best[s] + static_cast<long long>(j) * take;
        long long& slot = next[s + take];
        if (slot < 0 || cost < slot) slot = cost;
      }
    }
    best = std::move(next);
  }
  return Integer(best[total]);
}

VeroneseCondition veronese_condition(unsigned k, unsigned d, unsigned n) {
  check_pair(k, d);
  if (n < 1) throw InvalidPair("veronese_condition needs n >= 1");
  VeroneseCondition v;
  const auto base = dirichlet_constants(k, d);
  v.lhs = base.c_kd / n;
  const Integer dn = binom(d, n);
  const auto lifted = dirichlet_constants(k, (dn - 1).convert_to<unsigned>());
  v.rhs = Rational(dn, lifted.N_kd);
  v.holds = v.lhs == v.rhs;
  return v;
}

std::vector<std::vector<Rational>> c_table(unsigned d_max) {
  if (d_max < 1) throw InvalidPair("c_table needs d_max >= 1");
  std::vector<std::vector<Rational>> t(d_max, std::vector<Rational>(d_max, Rational(0)));
  for (unsigned k = 1; k <= d_max; ++k)
    for (unsigned d = k; d <= d_max; ++d) t[k - 1][d - 1] = dirichlet_constants(k, d).c_kd;
  return t;
}

}  // namespace intrinsic
