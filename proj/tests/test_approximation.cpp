#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "intrinsic/approximation.hpp"
#include "intrinsic/dirichlet.hpp"
#include "oracles/oracles.hpp"

#include <cmath>

using namespace intrinsic;

namespace {

const TargetPoint& phi() {
  static const TargetPoint t = parse_target("x^2-x-1,[1,2]");
  return t;
}

// t = (-B + s sqrt(D)) / (2A) with A > 0. Decides |t - a| < |t - b| exactly.
struct Quadratic {
  long long A, B, C;
  int s;
  Integer D() const { return Integer(B) * B - Integer(4) * A * C; }
  // t < x ?
  bool below(const Rational& x) const {
    const Rational R = 2 * Rational(A) * x + Rational(B);
    if (s > 0) return R > 0 && Rational(D()) < R * R;
    return R >= 0 || Rational(D()) > R * R;
  }
  bool closer(const Rational& a, const Rational& b) const {
    if (a == b) return false;
    const Rational m = (a + b) / 2;
    return a < b ? below(m) : !below(m);
  }
  double value() const {
    return (-static_cast<double>(B) + s * std::sqrt(static_cast<double>(B * B - 4 * A * C))) / (2.0 * A);
  }
};

// Best approximations of the first kind with denominator at most Q.
std::vector<Rational> parameter_records(const Quadratic& t, long long Q) {
  std::vector<Rational> out;
  for (long long q = 1; q <= Q; ++q) {
    const auto base = static_cast<long long>(std::floor(t.value() * static_cast<double>(q)));
    std::optional<Rational> best_q;
    for (long long p = base - 1; p <= base + 2; ++p) {
      const Rational r(p, q);
      if (!best_q || t.closer(r, *best_q)) best_q = r;
    }
    if (out.empty() || t.closer(*best_q, out.back())) out.push_back(*best_q);
  }
  return out;
}

RationalInterval oracle_distance(const std::vector<RationalInterval>& img, const RationalPoint& r) {
  RationalInterval d(Rational(0));
  for (Eigen::Index i = 0; i < r.dim(); ++i) {
    const auto e = abs(img[static_cast<std::size_t>(i)] - RationalInterval(r.coordinate(i)));
    d = {std::max<Rational>(d.lo, e.lo), std::max<Rational>(d.hi, e.hi)};
  }
  return d;
}

RecordSet synthetic(const std::vector<std::pair<Integer, Rational>>& hd, const Integer& T) {
  RecordSet s;
  s.T = T;
  for (const auto& [h, d] : hd) {
    ApproximationRecord r;
    r.height = h;
    r.distance = RationalInterval(d);
    s.records.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("target parsing") {
  const auto& t = phi();
  REQUIRE(t.k() == 1);
  CHECK_FALSE(t.is_rational());
  CHECK(t.approx()[0] == doctest::Approx(1.6180339887498949));
  const auto e = t.enclosure(Rational(1, 1000000));
  CHECK(e[0].width() <= Rational(1, 1000000));
  CHECK(e[0].lo * e[0].lo - e[0].lo - 1 < 0);
  CHECK(e[0].hi * e[0].hi - e[0].hi - 1 > 0);

  const auto r = parse_target("1/3");
  CHECK(r.is_rational());
  CHECK(std::get<Rational>(r.parameter[0]) == Rational(1, 3));
  // A rational root inside the interval collapses to a rational coordinate.
  CHECK(parse_target("x^2-1/4,[0,1]").is_rational());
  const auto two = parse_target("1/2;x^2-2,[1,2]");
  CHECK(two.k() == 2);
  CHECK_THROWS_AS(parse_target("x^2-2,[-2,2]"), InvalidArgument);
  CHECK_THROWS_AS(parse_target("x^2-2,[2,3]"), InvalidArgument);
}

TEST_CASE("power enclosure") {
  CHECK(power_enclosure(Integer(4), Rational(1, 2)).is_point());
  CHECK(power_enclosure(Integer(4), Rational(1, 2)).lo == 2);
  const auto r2 = power_enclosure(Integer(2), Rational(1, 2));
  CHECK(r2.lo * r2.lo < 2);
  CHECK(r2.hi * r2.hi > 2);
  CHECK(r2.width() <= Rational(Integer(1), ipow(Integer(2), 64)));
  CHECK(power_enclosure(Integer(27), Rational(2, 3)).lo == 9);
  CHECK(power_enclosure(Integer(5), Rational(0)).lo == 1);
}

TEST_CASE("records of the golden ratio are its convergents") {
  // At height 1 the candidates are the integers: on C2, 2 is closer to
  // (phi, phi^2) than 1; on C3, 1 is closer to (phi, phi^3) than 2. After
  // that the records are the convergents 3/2, 5/3, 8/5, ...
  for (const unsigned n : {2u, 3u}) {
    const Atlas atlas = atlas_from_spec("cn:" + std::to_string(n));
    const Integer T = 10000;
    const auto set = best_approximations(atlas, phi(), T);
    CHECK(set.pruned);
    CHECK(set.unresolved.empty());
    const auto conv = oracle::quadratic_convergents(1, -1, -1, integer_root(T, n));
    REQUIRE(conv.size() >= 4);
    REQUIRE(set.records.size() + 1 == conv.size());
    CHECK(set.records[0].parameter(0) == (n == 2 ? 2 : 1));
    for (std::size_t i = 1; i < set.records.size(); ++i) {
      const auto& [p, q] = conv[i + 1];
      CHECK(set.records[i].parameter(0) == Rational(p, q));
      CHECK(set.records[i].height == ipow(q, n));
    }
  }
}

TEST_CASE("staircase against an independent scan") {
  const Atlas atlas = sphere_atlas(2);
  const Integer T = 300;
  const auto all = enumerate_rationals(atlas, T);
  for (const auto& target : sample_quadratic_targets(4, 5, Box::cube(1, -1, 1))) {
    const auto set = best_approximations(atlas, target, T);
    const auto img = atlas.primary().image_enclosure(target.enclosure(Rational(Integer(1), ipow(Integer(2), 200))));
    CHECK_FALSE(set.pruned);
    REQUIRE_FALSE(set.records.empty());
    CHECK(set.records.front().height == 1);
    for (std::size_t i = 1; i < set.records.size(); ++i) {
      CHECK(set.records[i].height > set.records[i - 1].height);
      CHECK(set.records[i].distance.hi < set.records[i - 1].distance.lo);
    }
    // Record i is at least as close as every point of height <= its own,
    // strictly closer than every point of smaller height, and nothing of
    // height <= T beats the last record.
    for (std::size_t i = 0; i < set.records.size(); ++i) {
      const auto& rec = set.records[i];
      const Integer next = i + 1 < set.records.size() ? set.records[i + 1].height : T + 1;
      for (const auto& r : all) {
        if (r.point.height() >= next) continue;
        const auto d = oracle_distance(img, r.point);
        CHECK_FALSE(d.hi < rec.distance.lo);
        if (r.point.height() < rec.height) CHECK(d.lo > rec.distance.hi);
      }
    }
  }
}

TEST_CASE("veronese transfer: ambient records are parameter records") {
  const std::vector<Quadratic> targets = {{1, 2, -1, 1}, {3, 1, -1, 1}, {2, -2, -1, -1}};
  for (const unsigned n : {2u, 3u}) {
    const Atlas atlas = atlas_from_spec("veronese:1," + std::to_string(n));
    const Integer T = ipow(Integer(400), n);
    for (const auto& t : targets) {
      auto signed_term = [](long long c, const char* x) { return (c < 0 ? "-" : "+") + std::to_string(std::llabs(c)) + x; };
      const auto target_text = std::to_string(t.A) + "x^2" + signed_term(t.B, "x") + signed_term(t.C, "");
      const double v = t.value();
      const auto target = parse_target(target_text + ",[" + (v < 0 ? "-1,0" : "0,1") + "]");
      const auto set = best_approximations(atlas, target, T);
      const auto expected = parameter_records(t, 400);
      REQUIRE(set.records.size() == expected.size());
      const auto encl = target.enclosure(Rational(Integer(1), ipow(Integer(2), 100)));
      for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& rec = set.records[i];
        CHECK(rec.parameter(0) == expected[i]);
        CHECK(rec.height == ipow(denominator(expected[i]), n));
        // Ambient distance within the Lipschitz factor of the parameter distance.
        const auto pd = abs(encl[0] - RationalInterval(expected[i]));
        CHECK(rec.distance.hi >= pd.lo);
        CHECK(rec.distance.lo <= Rational(n) * pd.hi);
      }
    }
  }
}

TEST_CASE("exponent estimate recovers exact power laws") {
  for (const Rational c : {Rational(1, 2), Rational(1), Rational(5, 6)}) {
    std::vector<std::pair<Integer, Rational>> hd;
    for (unsigned j = 1; j <= 8; ++j) {
      const Integer h = ipow(Integer(2), 6 * j);
      const auto p = power_enclosure(h, c);
      REQUIRE(p.is_point());
      hd.emplace_back(h, 1 / p.lo);
    }
    const auto e = exponent_estimate(synthetic(hd, ipow(Integer(2), 48)).records, c);
    CHECK(std::abs(e.slope - to_double(c)) < 1e-9);
    CHECK(std::abs(e.tail_slope - to_double(c)) < 1e-9);
    CHECK(std::abs(e.tail_inf - to_double(c)) < 1e-9);
    CHECK(e.used == 8);
    CHECK(e.tail_used == 4);
  }
  CHECK_THROWS_AS(exponent_estimate(synthetic({{Integer(4), Rational(1, 3)}}, 4).records, 1), InsufficientData);
}

TEST_CASE("golden ratio exponents on C2 and C3") {
  const Integer T = 1000000;
  const auto c2 = best_approximations(atlas_from_spec("cn:2"), phi(), T);
  const auto e2 = exponent_estimate(c2.records, dirichlet_constants(1, 2).c_kd);
  CHECK(std::abs(e2.tail_slope - 1.0) <= 0.05);
  const auto c3 = best_approximations(atlas_from_spec("cn:3"), phi(), T);
  const auto e3 = exponent_estimate(c3.records, dirichlet_constants(1, 3).c_kd);
  CHECK(std::abs(e3.tail_slope - 2.0 / 3.0) <= 0.05);
}

TEST_CASE("badly approximable and very well approximable verdicts") {
  const Integer T = 1000000;
  const auto set = best_approximations(atlas_from_spec("cn:2"), phi(), T);
  const auto ba = ba_test(set, 1);
  CHECK(ba.verdict);
  CHECK(ba.label == "BA-at-scale-1000000");
  CHECK(ba.infimum.lo > 0);
  const auto vwa = vwa_test(set, 1);
  CHECK_FALSE(vwa.verdict);
  CHECK(classify(ba, vwa) == Classification::BadlyApproximable);

  // A rational target is hit exactly at its own height.
  const auto third = best_approximations(atlas_from_spec("cn:2"), parse_target("1/3"), Integer(100));
  REQUIRE_FALSE(third.records.empty());
  CHECK(third.records.back().height == 9);
  CHECK(third.records.back().distance.hi == 0);
  CHECK_FALSE(ba_test(third, 1).verdict);
  CHECK(vwa_test(third, 1).degenerate);
  CHECK(classify(ba_test(third, 1), vwa_test(third, 1)) == Classification::Degenerate);

  // Distances h^-3 at scale: every epsilon up to 2 is supported for c = 1.
  std::vector<std::pair<Integer, Rational>> hd;
  for (unsigned j = 1; j <= 40; ++j) hd.emplace_back(ipow(Integer(2), j), Rational(Integer(1), ipow(Integer(2), 3 * j)));
  const auto steep = synthetic(hd, ipow(Integer(2), 40));
  const auto v = vwa_test(steep, 1);
  CHECK(v.verdict);
  REQUIRE(v.supported_epsilon);
  CHECK(*v.supported_epsilon == 2);
  const auto b = ba_test(steep, 1);
  CHECK_FALSE(b.verdict);
  CHECK(classify(b, v) == Classification::VeryWellApproximable);
}

TEST_CASE("Liouville-type truncation is very well approximated at its spike") {
  // t = 3^-1 + 3^-2 + 3^-6 + 3^-24: p/729 lies within about 3^-24 of t.
  const Rational t = Rational(1, 3) + Rational(1, 9) + Rational(1, 729) +
                     Rational(Integer(1), ipow(Integer(3), 24));
  const auto set = best_approximations(atlas_from_spec("cn:2"), rational_target((RationalVector(1) << t).finished()),
                                       Integer(1000000));
  REQUIRE_FALSE(set.records.empty());
  CHECK(set.records.back().height == 729 * 729);
  const auto v = vwa_test(set, 1, 1);
  CHECK_FALSE(v.degenerate);
  REQUIRE(v.supported_epsilon);
  CHECK(*v.supported_epsilon >= Rational(1, 2));
  CHECK_FALSE(ba_test(set, 1).verdict);
}

TEST_CASE("BA and VWA never both claim on real records") {
  for (const char* spec : {"cn:2", "cn:3", "veronese:1,2"}) {
    for (const auto& target : sample_quadratic_targets(5, 17, Box::cube(1, -1, 1))) {
      const Atlas atlas = atlas_from_spec(spec);
      const auto set = best_approximations(atlas, target, Integer(1) << 20);
      const auto c = dirichlet_constants(1, atlas.d()).c_kd;
      const auto ba = ba_test(set, c);
      const auto vwa = vwa_test(set, c);
      CHECK_FALSE((ba.verdict && vwa.verdict));
      CHECK(classify(ba, vwa) != Classification::Inconclusive);
    }
  }
}

TEST_CASE("dyadic profile and Dirichlet constants") {
  const auto set = best_approximations(atlas_from_spec("cn:2"), phi(), Integer(1000));
  const auto prof = dyadic_profile(set.records, Integer(1000));
  CHECK(prof.size() == 10);
  for (const auto& [h, m] : prof) {
    REQUIRE(m);
    const ApproximationRecord* last = nullptr;
    for (const auto& r : set.records)
      if (r.height <= h) last = &r;
    REQUIRE(last);
    CHECK(m->lo == last->distance.lo);
  }

  const auto targets = sample_quadratic_targets(12, 2, Box::cube(1, -1, 1));
  const auto res = dirichlet_test(sphere_atlas(2), targets, 1, Integer(1) << 10);
  REQUIRE(res.levels.size() == 11);
  for (std::size_t i = 1; i < res.levels.size(); ++i) CHECK(res.levels[i].constant.lo >= res.levels[i - 1].constant.lo);
  for (double r : doubling_ratios(res, 3)) CHECK(r >= 1.0);
  // The witness reproduces the constant.
  const auto& top = res.levels.back();
  const auto w = best_approximations(sphere_atlas(2), targets[top.witness_target], Integer(1) << 10);
  for (const auto& [h, m] : dyadic_profile(w.records, Integer(1) << 10))
    if (h == top.witness_height) CHECK((*m * power_enclosure(h, 1)).lo == top.constant.lo);
  // Worker count does not change the result.
  const auto par = dirichlet_test(sphere_atlas(2), targets, 1, Integer(1) << 10, {}, 3);
  for (std::size_t i = 0; i < res.levels.size(); ++i) CHECK(par.levels[i].constant.lo == res.levels[i].constant.lo);
}

TEST_CASE("seeded target samples") {
  const auto a = sample_quadratic_targets(20, 9, Box::cube(1, -1, 1));
  const auto b = sample_quadratic_targets(20, 9, Box::cube(1, -1, 1));
  REQUIRE(a.size() == 20);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].spec == b[i].spec);
    CHECK_FALSE(a[i].is_rational());
    const double v = a[i].approx()[0];
    CHECK(v > -1);
    CHECK(v < 1);
    CHECK(parse_target(a[i].spec).approx()[0] == v);
  }
  const auto r = sample_rational_targets(10, 4, Box::cube(2, 0, 1), 50);
  for (const auto& t : r) CHECK(t.is_rational());
}
