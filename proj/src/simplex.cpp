#include "intrinsic/simplex.hpp"

#include "intrinsic/bareiss.hpp"
#include "intrinsic/parallel.hpp"

#include <cmath>
#include <random>

namespace intrinsic {

Rational AffineFunctional::value(const RationalVector& x) const {
  Rational s = -Rational(b);
  for (Eigen::Index i = 0; i < w.size(); ++i) s += Rational(w(i)) * x(i);
  return s;
}

bool AffineFunctional::vanishes_at(const RationalPoint& p) const {
  // w . p / q = b  <=>  w . p = b q
  Integer s = -b * p.height();
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w(i) * p.numerators()(i);
  return s == 0;
}

Polynomial AffineFunctional::to_polynomial() const {
  const auto d = static_cast<unsigned>(w.size());
  Polynomial f = Polynomial::constant(d, Rational(-b));
  for (unsigned i = 0; i < d; ++i)
    if (w(i) != 0) f += Polynomial::variable(d, i) * Rational(w(i));
  return f;
}

std::string to_string(const AffineFunctional& f) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < f.w.size(); ++i) {
    if (i) s += ",";
    s += to_string(f.w(i));
  }
  return s + "]." + "x=" + to_string(f.b);
}

Integer simplex_height_bound(const DirichletConstants& constants, const Rational& rho, const Rational& kappa) {
  if (rho <= 0) throw InvalidArgument("simplex radius must be positive");
  if (kappa < 0) throw InvalidArgument("kappa must be nonnegative");
  if (kappa == 0) return 0;
  const unsigned e = constants.d + 1;
  const unsigned N = constants.N_kd.convert_to<unsigned>();
  // h^(d+1) <= kappa^(d+1) / rho^N for integer h.
  const Rational x = ipow(kappa, e) / ipow(rho, N);
  return integer_root(floor(x), e);
}

std::vector<IntrinsicRational> collect_S(const Chart& chart, const SimplexQuery& query, std::uint64_t budget) {
  if (query.center.size() != static_cast<Eigen::Index>(chart.k()))
    throw InvalidArgument("simplex center has the wrong dimension");
  if (query.radius <= 0 || query.radius > 1) throw InvalidArgument("simplex radius must lie in (0, 1]");
  const auto constants = dirichlet_constants(chart.k(), chart.d());
  const Integer T = simplex_height_bound(constants, query.radius, query.kappa);
  if (T < 1) return {};
  const Box window = Box::ball(query.center, query.radius).intersect(chart.domain());
  if (window.empty()) return {};
  return enumerate_rationals(chart.with_domain(window), T, std::nullopt, budget);
}

SimplexReport hyperplane_containment(const std::vector<RationalPoint>& points, unsigned d) {
  SimplexReport report;
  report.points = points;
  if (points.empty()) return report;
  const auto n = static_cast<Eigen::Index>(points.size());
  // Row i is q_i (1, r_i) = (q_i, p_i): same row space as the columns (1, r_i).
  IntegerMatrix rows(n, d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    if (p.dim() != static_cast<Eigen::Index>(d)) throw InvalidArgument("point has the wrong dimension");
    rows(i, 0) = p.height();
    rows.block(i, 1, 1, d) = p.numerators().transpose();
  }
  const Echelon e = bareiss_echelon(rows);
  report.rank = e.rank();
  if (report.rank <= static_cast<Eigen::Index>(d)) {
    const auto kernel = kernel_basis(rows);
    const IntegerVector& v = kernel.front();
    AffineFunctional f;
    f.w = v.tail(d);
    f.b = -v(0);
    for (Eigen::Index i = 0; i < f.w.size(); ++i) {
      if (f.w(i) == 0) continue;
      if (f.w(i) < 0) {
        f.w = -f.w;
        f.b = -f.b;
      }
      break;
    }
    report.hyperplane = std::move(f);
    return report;
  }

  report.passed = false;
  SimplexFailure fail;
  RationalMatrix m(d + 1, d + 1);
  Integer prod_q = 1;
  for (Eigen::Index c = 0; c <= static_cast<Eigen::Index>(d); ++c) {
    const auto& p = points[static_cast<std::size_t>(e.pivot_rows[static_cast<std::size_t>(c)])];
    fail.simplex.push_back(p);
    m(0, c) = 1;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) m(i + 1, c) = p.coordinate(i);
    prod_q *= p.height();
  }
  fail.determinant = exact_det(m);
  const Rational scaled = fail.determinant * prod_q;
  fail.integral = denominator(scaled) == 1;
  fail.scaled_determinant = fail.integral ? numerator(scaled) : floor(scaled);
  fail.lower_bound_holds = abs(fail.determinant) * prod_q >= 1;
  report.failure = std::move(fail);
  return report;
}

namespace {

double radical_inverse(std::uint64_t i, unsigned base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<SimplexQuery> sweep_plan(const Chart& chart, const SweepOptions& options) {
  if (options.rho_min <= 0 || options.rho_max < options.rho_min || options.rho_max > 1)
    throw InvalidArgument("radius range must satisfy 0 < rho_min <= rho_max <= 1");
  if (chart.k() > std::size(kPrimes)) throw InvalidArgument("sweep supports k <= 12");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(chart.k());
  for (auto& s : shift) s = unit(rng);
  // Dyadic radii 2^-j with 2^-j in [rho_min, rho_max].
  auto dyadic = [](int j) { return Rational(Integer(1), ipow(Integer(2), static_cast<unsigned>(j))); };
  const int j_min = -ceil_log2(options.rho_max) + (dyadic(-ceil_log2(options.rho_max)) > options.rho_max ? 1 : 0);
  int j_hi = -ceil_log2(options.rho_min) + 1;
  while (j_hi >= j_min && dyadic(j_hi) < options.rho_min) --j_hi;
  if (j_hi < j_min) throw InvalidArgument("radius range contains no dyadic radius");
  std::uniform_int_distribution<int> pick_j(j_min, j_hi);

  const Integer grid = ipow(Integer(2), 32);
  const Box& dom = chart.domain();
  std::vector<SimplexQuery> plan;
  plan.reserve(options.samples);
  for (std::size_t i = 0; i < options.samples; ++i) {
    SimplexQuery q;
    q.center.resize(chart.k());
    for (unsigned a = 0; a < chart.k(); ++a) {
      double u = radical_inverse(i + 1, kPrimes[a]) + shift[a];
      if (u >= 1) u -= 1;
      const Rational snapped(Integer(static_cast<unsigned long long>(u * 4294967296.0)), grid);
      q.center(a) = dom.lo(a) + snapped * (dom.hi(a) - dom.lo(a));
    }
    q.radius = dyadic(pick_j(rng));
    q.kappa = options.kappa;
    plan.push_back(std::move(q));
  }
  return plan;
}

SweepReport simplex_sweep(const Chart& chart, const SweepOptions& options) {
  const auto plan = sweep_plan(chart, options);
  const auto constants = dirichlet_constants(chart.k(), chart.d());
  SweepReport report;
  report.records.resize(plan.size());
  parallel_for(plan.size(), options.workers, [&](std::size_t i) {
    const auto& q = plan[i];
    SweepRecord& r = report.records[i];
    r.index = i;
    r.center = q.center;
    r.radius = q.radius;
    r.kappa = q.kappa;
    r.height_bound = simplex_height_bound(constants, q.radius, q.kappa);
    std::vector<RationalPoint> pts;
    for (const auto& s : collect_S(chart, q, options.budget)) pts.push_back(s.point);
    auto rep = hyperplane_containment(pts, chart.d());
    r.size = pts.size();
    r.rank = rep.rank;
    r.passed = rep.passed;
    r.functional = std::move(rep.hyperplane);
    r.failure = std::move(rep.failure);
  });
  for (const auto& r : report.records) {
    if (r.passed) {
      ++report.passed;
    } else {
      report.failures.push_back(r.index);
    }
    const auto& w = report.records[report.worst];
    if (r.rank > w.rank || (r.rank == w.rank && r.size > w.size)) report.worst = r.index;
  }
  report.pass_rate = plan.empty() ? 1.0 : static_cast<double>(report.passed) / static_cast<double>(plan.size());
  return report;
}

KappaCalibration kappa_calibrate(const Chart& chart, const SweepOptions& options, unsigned precision,
                                 const Rational& kappa_max) {
  if (options.samples < 1) throw InvalidArgument("kappa_calibrate needs at least one sample");
  KappaCalibration out;
  out.precision = precision;
  const Rational step(Integer(1), ipow(Integer(2), precision));
  auto passes = [&](const Integer& m) {
    SweepOptions o = options;
    o.kappa = step * m;
    ++out.evaluations;
    return simplex_sweep(chart, o).failures.empty();
  };
  Integer good = 0, bad = 0;
  Integer m = 1;
  for (;;) {
    if (step * m > kappa_max) {
      out.capped = true;
      break;
    }
    if (passes(m)) {
      good = m;
      m *= 2;
    } else {
      bad = m;
      break;
    }
  }
  if (out.capped) {
    // Refine between the last passing value and the cap.
    bad = floor(kappa_max / step) + 1;
    if (passes(bad - 1)) {
      out.kappa = step * (bad - 1);
      out.double_fails = !passes(2 * (bad - 1));
      return out;
    }
  }
  while (bad - good > 1) {
    const Integer mid = (good + bad) / 2;
    if (passes(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  out.kappa = step * good;
  out.double_fails = good == 0 ? true : !passes(2 * good);
  return out;
}

}  // namespace intrinsic
