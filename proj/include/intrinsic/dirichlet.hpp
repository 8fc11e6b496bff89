#pragma once

// The combinatorial constants n_{k,d}, m_{k,d}, N_{k,d} and the intrinsic
// Dirichlet exponent c(k,d) = (d + 1) / N_{k,d} of a nondegenerate
// k-dimensional submanifold of R^d.

#include "intrinsic/rational.hpp"

#include <vector>

namespace intrinsic {

class InvalidPair : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct DirichletConstants {
  unsigned k = 0;
  unsigned d = 0;
  unsigned n_kd = 0;
  unsigned m_kd = 0;
  Integer N_kd;
  Rational c_kd;

  /// 1 / c(k,d) = N / (d + 1): the exponent in q <= kappa rho^(-N/(d+1)).
  Rational inverse_exponent() const { return Rational(N_kd, d + 1); }
};

/// Closed form. Throws InvalidPair unless 1 <= k <= d.
DirichletConstants dirichlet_constants(unsigned k, unsigned d);

/// Independent minimiser of sum_j j n_j subject to 0 <= n_j <= [k-1, j] and
/// sum_{j >= 0} n_j = d + 1, by dynamic programming over degrees. Requires
/// d <= 30.
Integer N_bruteforce(unsigned k, unsigned d);

struct VeroneseCondition {
  bool holds = false;
  Rational lhs;  // (1/n) (d+1) / N_{k,d}
  Rational rhs;  // [d,n] / N_{k,[d,n]-1}
};

/// Exact evaluation of the maximal-approximability transfer condition for
/// the image of a k-manifold in R^d under the degree-n Veronese map.
VeroneseCondition veronese_condition(unsigned k, unsigned d, unsigned n);

/// table[k-1][d-1] = c(k, d) for 1 <= k <= d <= d_max; entries with d < k
/// are left as 0.
std::vector<std::vector<Rational>> c_table(unsigned d_max);

}  // namespace intrinsic
