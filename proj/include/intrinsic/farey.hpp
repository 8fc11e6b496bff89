#pragma once

// Reduced fractions with bounded denominator inside an interval, visited in
// increasing order by walking the Farey sequence F_Q. The cost is
// proportional to the number of fractions produced, independent of Q.

#include "intrinsic/rational.hpp"

#include <functional>
#include <vector>

namespace intrinsic {

/// Smallest fraction >= x whose denominator is at most max_den.
Rational farey_ceil(const Rational& x, const Integer& max_den);

/// Successor of the reduced fraction a/b (b <= max_den) in F_{max_den}.
Rational farey_successor(const Rational& x, const Integer& max_den);

/// Calls visit(p/q) for every reduced p/q in [lo, hi] with q <= max_den, in
/// increasing order; stops early when visit returns false.
void for_each_fraction(const Rational& lo, const Rational& hi, const Integer& max_den,
                       const std::function<bool(const Rational&)>& visit);

std::vector<Rational> fractions_in(const Rational& lo, const Rational& hi, const Integer& max_den);

/// Heuristic count of such fractions, used for budget checks before a walk.
double estimated_fraction_count(const Rational& lo, const Rational& hi, const Integer& max_den);

/// Continued fraction [a0; a1, ..., an] of a rational number.
std::vector<Integer> continued_fraction(const Rational& x);

}  // namespace intrinsic
