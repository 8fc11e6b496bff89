#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "intrinsic/bareiss.hpp"
#include "intrinsic/farey.hpp"
#include "intrinsic/multi_index.hpp"
#include "intrinsic/polynomial.hpp"
#include "intrinsic/rational.hpp"
#include "intrinsic/univariate.hpp"
#include "oracles/oracles.hpp"

#include <random>

using namespace intrinsic;

namespace {

RationalMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int range) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 4);
  RationalMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Rational(Integer(num(rng)), Integer(den(rng)));
  return m;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational("1e6") == Rational(1000000));
  CHECK(parse_rational("2^-20") == Rational(Integer(1), ipow(Integer(2), 20)));
  CHECK(to_string(Rational(4, 6)) == "2/3");
  CHECK(to_string(Rational(5)) == "5/1");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
}

TEST_CASE("integer helpers") {
  CHECK(integer_root(Integer(1000000), 2) == 1000);
  CHECK(integer_root(Integer(999999), 2) == 999);
  CHECK(integer_root(Integer(26), 3) == 2);
  CHECK(integer_root(Integer(27), 3) == 3);
  CHECK(ceil_log2(Rational(1)) == 0);
  CHECK(ceil_log2(Rational(5)) == 3);
  CHECK(ceil_log2(Rational(1, 4)) == -2);
  CHECK(ceil_log2(Rational(1, 3)) == -1);
  for (unsigned n = 0; n <= 8; ++n)
    for (unsigned m = 0; m <= 8; ++m) CHECK(binom(n, m) == oracle::pascal(n, m));
  // Pascal identity [n, m] = [n - 1, m] + [n, m - 1].
  for (unsigned n = 1; n <= 10; ++n)
    for (unsigned m = 1; m <= 10; ++m) CHECK(binom(n, m) == binom(n - 1, m) + binom(n, m - 1));
}

TEST_CASE("rational points are jointly primitive") {
  RationalVector v(2);
  v << Rational(1, 2), Rational(1, 4);
  const auto p = reduce(v);
  CHECK(p.height() == 4);
  CHECK(p.numerators()(0) == 2);
  CHECK(p.numerators()(1) == 1);
  v << Rational(6, 10), Rational(8, 10);
  CHECK(reduce(v).height() == 5);
  v << Rational(0), Rational(0);
  CHECK(reduce(v).height() == 1);
  IntegerVector bad(2);
  bad << 2, 4;
  CHECK_THROWS_AS(RationalPoint(bad, Integer(2)), InvalidArgument);
}

TEST_CASE("interval arithmetic encloses point evaluations") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(-20, 20);
  const Polynomial x = Polynomial::variable(1, 0);
  const Polynomial p = pow(x, 3) - x * Rational(2) + Polynomial::constant(1, Rational(1, 3));
  for (int trial = 0; trial < 200; ++trial) {
    Rational a(u(rng), 7), b(u(rng), 7);
    if (b < a) std::swap(a, b);
    const RationalInterval iv(a, b);
    const std::vector<RationalInterval> arg{iv};
    const RationalInterval img = p(std::span<const RationalInterval>(arg));
    for (int s = 0; s <= 4; ++s) {
      const Rational t = a + (b - a) * Rational(s, 4);
      const std::vector<Rational> pt{t};
      CHECK(img.contains(p(std::span<const Rational>(pt))));
    }
  }
}

TEST_CASE("exact determinant agrees with cofactor expansion") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const RationalMatrix m = random_matrix(rng, n, n, 6);
      CHECK(exact_det(m) == oracle::cofactor_det(m));
    }
  }
  RationalMatrix singular(3, 3);
  singular << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(exact_det(singular) == 0);
  CHECK(exact_rank(singular) == 2);
}

TEST_CASE("exact rank agrees with Gaussian elimination and kernels are kernels") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index rows = 1 + trial % 5, cols = 1 + (trial / 5) % 6;
    RationalMatrix m = random_matrix(rng, rows, cols, 3);
    if (trial % 3 == 0 && rows > 1) m.row(rows - 1) = m.row(0) * Rational(3, 2);
    const auto r = exact_rank(m);
    CHECK(r == oracle::gauss_rank(m));
    const auto ker = kernel_basis(m);
    CHECK(static_cast<Eigen::Index>(ker.size()) == cols - r);
    for (const auto& w : ker) {
      const RationalVector wr = w.cast<Rational>();
      CHECK((m * wr).isZero());
    }
  }
}

TEST_CASE("kernel of the parabola example") {
  // Columns (1, Psi(r)) for S = {(0, 0)}: left kernel spanned by e2 and e3.
  RationalMatrix m(3, 1);
  m << 1, 0, 0;
  const auto ker = kernel_basis(RationalMatrix(m.transpose()));
  REQUIRE(ker.size() == 2);
  IntegerVector e2(3);
  e2 << 0, 1, 0;
  CHECK(ker[0] == e2);
}

TEST_CASE("multi-index graded order") {
  const auto a = multi_indices_up_to(2, 2, 1);
  REQUIRE(a.size() == 5);
  CHECK(to_string(a[0]) == "(1,0)");
  CHECK(to_string(a[1]) == "(0,1)");
  CHECK(to_string(a[2]) == "(2,0)");
  CHECK(to_string(a[3]) == "(1,1)");
  CHECK(to_string(a[4]) == "(0,2)");
  for (unsigned k = 1; k <= 4; ++k)
    for (unsigned n = 0; n <= 5; ++n) CHECK(multi_indices_up_to(k, n).size() == binom(k, n));
}

TEST_CASE("polynomial derivatives") {
  const Polynomial t = Polynomial::variable(1, 0);
  const Polynomial p = pow(t, 3);
  CHECK(p.derivative(0u) == pow(t, 2) * Rational(3));
  CHECK(p.derivative(MultiIndex({2})) == t * Rational(6));
  const RationalFunction f(t, Polynomial::constant(1, 1) + pow(t, 2));
  const auto df = f.derivative(0u);
  // d/dt t/(1+t^2) = (1 - t^2)/(1 + t^2)^2; at t = 1/2 this is 12/25.
  const std::vector<Rational> x{Rational(1, 2)};
  const std::span<const Rational> s(x);
  CHECK(df.numerator(s) / df.denominator(s) == Rational(12, 25));
}

TEST_CASE("Farey walk matches the double loop") {
  for (long long Q = 1; Q <= 25; ++Q) {
    for (const auto& [lo, hi] : std::vector<std::pair<Rational, Rational>>{
             {Rational(-1), Rational(1)}, {Rational(1, 3), Rational(2, 5)}, {Rational(-7, 3), Rational(-2, 9)}}) {
      CHECK(fractions_in(lo, hi, Integer(Q)) == oracle::farey_by_loops(lo, hi, Q));
    }
  }
  CHECK(farey_ceil(Rational(1, 1000), Integer(5)) == Rational(1, 5));
  CHECK(continued_fraction(Rational(13, 8)) == std::vector<Integer>{1, 1, 1, 1, 2});
}

TEST_CASE("Sturm root isolation") {
  const UPoly p = parse_upoly("x^2-x-1");
  const auto roots = isolate_roots(p, Rational(-2), Rational(2));
  REQUIRE(roots.size() == 2);
  const auto phi = refine(p, roots[1], Rational(1, 1000000));
  CHECK(to_double(phi.lo) == doctest::Approx(1.6180339887).epsilon(1e-6));
  CHECK(count_roots(parse_upoly("x^3-x"), Rational(-1), Rational(1)) == 3);
  CHECK(count_roots(parse_upoly("x^2+1"), Rational(-5), Rational(5)) == 0);
  CHECK_THROWS_AS(isolate_roots(UPoly(), Rational(0), Rational(1)), IdenticallyZero);
  // Repeated root counted once.
  CHECK(count_roots(parse_upoly("x^2-2x+1"), Rational(0), Rational(2)) == 1);
}

TEST_CASE("sup norm enclosure") {
  const UPoly p = parse_upoly("x^2-x");
  const auto s = sup_norm(p, Rational(0), Rational(1), Rational(1, 1000), 60);
  CHECK(s.contains(Rational(1, 4)));
  const auto t = sup_norm(parse_upoly("x^3-2x"), Rational(-1), Rational(1), Rational(1, 1000000), 80);
  // max of |x^3 - 2x| on [-1,1] is (4/3) sqrt(2/3), at the critical points.
  CHECK(t.lo <= Rational(10886622, 10000000));
  CHECK(t.hi >= Rational(10886620, 10000000));
  CHECK(t.hi - t.lo <= Rational(1, 1000000));
}

TEST_CASE("continued fraction oracle reproduces Fibonacci ratios") {
  const auto cv = oracle::quadratic_convergents(1, -1, -1, Integer(100));
  REQUIRE(cv.size() >= 5);
  CHECK(cv[0].first == 1);
  CHECK(cv[0].second == 1);
  CHECK(cv[1].first == 2);
  CHECK(cv[1].second == 1);
  CHECK(cv[4].first == 8);
  CHECK(cv[4].second == 5);
}
