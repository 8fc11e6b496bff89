#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "intrinsic/chart.hpp"
#include "intrinsic/enumerate.hpp"

#include <chrono>
#include <random>

using namespace intrinsic;

namespace {

RationalVector vec(std::initializer_list<Rational> xs) {
  RationalVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

std::vector<RationalPoint> points_of(const std::vector<IntrinsicRational>& rs) {
  std::vector<RationalPoint> out;
  for (const auto& r : rs) out.push_back(r.point);
  return out;
}

}  // namespace

TEST_CASE("Veronese chart shapes") {
  const Chart v12 = veronese_chart(1, 2);
  CHECK(v12.d() == 2);
  const Chart v22 = veronese_chart(2, 2);
  CHECK(v22.d() == 5);
  const auto x = v22.image(vec({Rational(1, 2), Rational(1, 3)}));
  CHECK(x == vec({Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 6), Rational(1, 9)}));
  CHECK(veronese_chart(1, 3).image(vec({Rational(2, 3)})) == vec({Rational(2, 3), Rational(4, 9), Rational(8, 27)}));
  for (unsigned k = 1; k <= 3; ++k)
    for (unsigned n = 1; n <= 4; ++n) CHECK(veronese_chart(k, n).d() == binom(k, n) - 1);
}

TEST_CASE("evaluate examples") {
  CHECK(veronese_chart(1, 2).evaluate(vec({Rational(1, 2)})).height() == 4);
  CHECK(curve_cn(2).evaluate(vec({Rational(0)})).height() == 1);
  const auto p = curve_cn(3).evaluate(vec({Rational(1, 2)}));
  CHECK(p.height() == 8);
  const Chart s = sphere_chart(2);
  CHECK(s.image(vec({Rational(1, 2)})) == vec({Rational(4, 5), Rational(3, 5)}));
  CHECK(s.image(vec({Rational(1, 3)})) == vec({Rational(3, 5), Rational(4, 5)}));
  CHECK(s.evaluate(vec({Rational(1, 3)})).height() == 5);
  CHECK(s.image(vec({Rational(0)})) == vec({Rational(0), Rational(1)}));
  CHECK(s.image(vec({Rational(1)})) == vec({Rational(1), Rational(0)}));
  CHECK_THROWS_AS(curve_cn(2).image(vec({Rational(2)})), OutsideDomain);
  const Chart pole("pole", 1, {Polynomial::constant(1, 1)}, Polynomial::variable(1, 0), Box::cube(1, -1, 1));
  CHECK_THROWS_AS(pole.image(vec({Rational(0)})), PoleHit);
}

TEST_CASE("implicit equations vanish on the image") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 12);
  for (const auto& spec : builtin_chart_specs()) {
    const Atlas atlas = atlas_from_spec(spec);
    for (const auto& chart : atlas.charts) {
      for (int trial = 0; trial < 40; ++trial) {
        RationalVector t(chart.k());
        for (unsigned i = 0; i < chart.k(); ++i) {
          const int q = den(rng);
          t(i) = Rational(std::clamp(num(rng), -q, q), q);
        }
        CHECK_MESSAGE(chart.satisfies_equations(chart.image(t)), spec);
      }
      // Equations must not vanish identically: perturb a coordinate.
      RationalVector x = chart.image(RationalVector::Zero(chart.k()));
      x(chart.d() - 1) += Rational(1, 7);
      CHECK_FALSE(chart.satisfies_equations(x));
    }
  }
}

TEST_CASE("partial derivative examples") {
  const auto d1 = partial(curve_cn(2), MultiIndex({1}));
  CHECK(d1.at(vec({Rational(3)})) == vec({Rational(1), Rational(6)}));
  const auto d2 = partial(veronese_chart(1, 3), MultiIndex({2}));
  CHECK(d2.at(vec({Rational(1, 2)})) == vec({Rational(0), Rational(2), Rational(3)}));
  const auto d10 = partial(veronese_chart(2, 2), MultiIndex({1, 0}));
  CHECK(d10.at(vec({Rational(5), Rational(7)})) == vec({Rational(1), Rational(0), Rational(10), Rational(7), Rational(0)}));
}

TEST_CASE("first derivatives agree with difference quotients") {
  // (f(t + h) - f(t)) / h - f'(t) = O(h): check the error shrinks linearly.
  for (const auto& spec : builtin_chart_specs()) {
    const Chart chart = atlas_from_spec(spec).primary();
    RationalVector t = RationalVector::Constant(chart.k(), Rational(1, 3));
    for (unsigned v = 0; v < chart.k(); ++v) {
      const auto dv = partial(chart, MultiIndex::unit(chart.k(), v)).at(t);
      Rational prev_err = -1;
      for (int e = 4; e <= 16; e += 4) {
        const Rational h(Integer(1), ipow(Integer(2), static_cast<unsigned>(e)));
        RationalVector th = t;
        th(v) += h;
        const RationalVector q = (chart.image_unchecked(th) - chart.image_unchecked(t)) / h;
        Rational err = 0;
        for (Eigen::Index i = 0; i < q.size(); ++i) err = std::max<Rational>(err, abs(q(i) - dv(i)));
        if (prev_err >= 0) CHECK(err * 8 <= prev_err);
        prev_err = err;
      }
    }
  }
}

TEST_CASE("nondegeneracy order examples") {
  for (unsigned n = 1; n <= 5; ++n) {
    for (const Rational t : {Rational(0), Rational(1, 2), Rational(-1)}) {
      const auto r = nondegeneracy_order(veronese_chart(1, n), vec({t}), 8);
      REQUIRE(r.order.has_value());
      CHECK(*r.order == n);
    }
  }
  const Chart line("line", 1, {Polynomial::variable(1, 0), Polynomial::variable(1, 0)}, Polynomial::constant(1, 1),
                   Box::cube(1, -1, 1));
  const auto l = nondegeneracy_order(line, vec({Rational(1, 2)}), 6);
  CHECK_FALSE(l.order.has_value());
  CHECK(l.terminal_rank == 1);
  const auto c3 = nondegeneracy_order(veronese_chart(1, 3), vec({Rational(1)}), 3);
  CHECK(c3.ranks == std::vector<Eigen::Index>{1, 2, 3});
  const auto c3_short = nondegeneracy_order(veronese_chart(1, 3), vec({Rational(1)}), 2);
  CHECK_FALSE(c3_short.order.has_value());
  CHECK(c3_short.terminal_rank == 2);
  CHECK(*nondegeneracy_order(curve_cn(3), vec({Rational(1)}), 3).order == 2);
  CHECK(nondegeneracy_order(curve_cn(3), vec({Rational(0)}), 2).order == std::nullopt);
  CHECK(*nondegeneracy_order(curve_cn(3), vec({Rational(0)}), 3).order == 3);
  CHECK_THROWS_AS(nondegeneracy_order(curve_cn(3), vec({Rational(3)}), 3), OutsideDomain);
}

TEST_CASE("degenerate charts never reach full rank") {
  const Polynomial t = Polynomial::variable(1, 0);
  const Chart c("t,t,t^2", 1, {t, t, pow(t, 2)}, Polynomial::constant(1, 1), Box::cube(1, -1, 1));
  const Polynomial u = Polynomial::variable(2, 0), v = Polynomial::variable(2, 1);
  const Chart s("plane", 2, {u, v, u + v, u * v}, Polynomial::constant(2, 1), Box::cube(2, -1, 1));
  for (const Rational x : {Rational(-1), Rational(-1, 3), Rational(0), Rational(2, 5), Rational(1)}) {
    for (unsigned j = 1; j <= 10; ++j) {
      CHECK_FALSE(nondegeneracy_order(c, vec({x}), j).order.has_value());
      CHECK_FALSE(nondegeneracy_order(s, vec({x, Rational(1, 2)}), std::min(j, 5u)).order.has_value());
    }
  }
}

TEST_CASE("tangent rank is monotone and bounded") {
  for (const auto& spec : builtin_chart_specs()) {
    const Chart chart = atlas_from_spec(spec).primary();
    const RationalVector t = RationalVector::Constant(chart.k(), Rational(-2, 7));
    const auto r = nondegeneracy_order(chart, t, 3);
    Eigen::Index prev = 0;
    for (std::size_t j = 0; j < r.ranks.size(); ++j) {
      CHECK(r.ranks[j] >= prev);
      CHECK(r.ranks[j] <= std::min<Eigen::Index>(chart.d(), multi_indices_up_to(chart.k(), j + 1, 1).size()));
      CHECK(tangent_space(chart, t, static_cast<unsigned>(j + 1)).rank == r.ranks[j]);
      prev = r.ranks[j];
    }
  }
}

TEST_CASE("Veronese height transfer") {
  for (unsigned k = 1; k <= 2; ++k) {
    for (unsigned n = 2; n <= 3; ++n) {
      const Chart chart = veronese_chart(k, n).with_domain(Box::cube(k, -8, 8));
      for (long long q = 1; q <= 8; ++q) {
        for (long long a = -8; a <= 8; ++a) {
          for (long long b = (k == 2 ? -8 : 0); b <= (k == 2 ? 8 : 0); ++b) {
            RationalVector t(k);
            t(0) = Rational(a, q);
            if (k == 2) t(1) = Rational(b, q);
            const auto r = reduce(t);
            if (r.height() != q) continue;
            CHECK(chart.evaluate(t).height() == ipow(r.height(), n));
          }
        }
      }
    }
  }
}

TEST_CASE("enumeration examples") {
  const Box sq = Box::cube(2, -1, 1);
  const auto c2 = enumerate_rationals(curve_cn(2), Integer(4), sq);
  REQUIRE(c2.size() == 5);
  CHECK(to_string(c2[0].point) == "(-1/1, 1/1)");
  CHECK(c2[4].point.height() == 4);
  const auto v = enumerate_rationals(veronese_chart(1, 2), Integer(3));
  for (const auto& r : v) CHECK(r.point.height() == 1);
  CHECK(v.size() == 3);
  const auto s = enumerate_rationals(sphere_atlas(2), Integer(5), sq);
  CHECK(s.size() == 12);
  CHECK(points_of(s) == bruteforce_intrinsic(sphere_atlas(2).implicit_equations(), Integer(5), sq));
  const auto heights = bruteforce_intrinsic(curve_cn(2).implicit_equations(), Integer(9), sq);
  for (const auto& p : heights) CHECK((p.height() == 1 || p.height() == 4 || p.height() == 9));
  Box empty = sq;
  empty.lo(0) = 1;
  empty.hi(0) = Rational(1, 2);
  CHECK(bruteforce_intrinsic(curve_cn(2).implicit_equations(), Integer(9), empty).empty());
  CHECK_THROWS_AS(enumerate_rationals(curve_cn(2), Integer(1000000), sq, 100), BudgetExceeded);
  CHECK_THROWS_AS(bruteforce_intrinsic(sphere_atlas(3).implicit_equations(), Integer(30), Box::cube(3, -1, 1), 1000),
                  BudgetExceeded);
}

TEST_CASE("enumeration is complete against brute force for T <= 30") {
  for (const auto& spec : builtin_chart_specs()) {
    const Atlas atlas = atlas_from_spec(spec);
    const Box box = Box::cube(atlas.d(), -1, 1);
    const auto start = std::chrono::steady_clock::now();
    const auto brute = bruteforce_intrinsic(atlas.implicit_equations(), Integer(30), box);
    const auto listed = points_of(enumerate_rationals(atlas, Integer(30), box));
    CHECK_MESSAGE(listed == brute, spec);
    for (long long T = 1; T < 30; ++T) {
      std::vector<RationalPoint> expect;
      for (const auto& p : brute)
        if (p.height() <= T) expect.push_back(p);
      CHECK_MESSAGE(points_of(enumerate_rationals(atlas, Integer(T), box)) == expect, spec << " T=" << T);
    }
    MESSAGE(spec << ": " << brute.size() << " points, "
                 << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s");
  }
}

TEST_CASE("enumerated parameters round-trip") {
  for (const auto& spec : builtin_chart_specs()) {
    const Atlas atlas = atlas_from_spec(spec);
    for (const auto& r : enumerate_rationals(atlas, Integer(25))) {
      CHECK(atlas.charts[r.chart].evaluate(r.parameter) == r.point);
    }
  }
}

TEST_CASE("registry and box parsing") {
  CHECK(atlas_from_spec("veronese:2,3").d() == 9);
  CHECK(atlas_from_spec("cn:5").primary().name() == "cn:5");
  CHECK(atlas_from_spec("sphere:3").charts.size() == 2);
  CHECK_THROWS_AS(atlas_from_spec("torus:2"), InvalidArgument);
  CHECK_THROWS_AS(atlas_from_spec("cn:x"), InvalidArgument);
  const Box b = parse_box("-1..1/2", 2);
  CHECK(b.lo(1) == -1);
  CHECK(b.hi(1) == Rational(1, 2));
  const Box c = parse_box("-1..-1/2,0..3", 2);
  CHECK(c.hi(0) == Rational(-1, 2));
  CHECK(c.hi(1) == 3);
  CHECK(to_string(c) == "-1/1..-1/2,0/1..3/1");
}
