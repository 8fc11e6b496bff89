#include "intrinsic/approximation.hpp"

#include "intrinsic/parallel.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace intrinsic {

// ---------------------------------------------------------------------------
// Targets

AlgebraicNumber::AlgebraicNumber(UPoly p, RationalInterval iv)
    : polynomial(squarefree_part(p)), isolating(std::move(iv)) {}

RationalInterval AlgebraicNumber::enclosure(const Rational& width) const {
  const RootInterval r = refine(polynomial, {isolating.lo, isolating.hi}, width);
  return {r.lo, r.hi};
}

double AlgebraicNumber::approx() const {
  return to_double(enclosure(Rational(Integer(1), ipow(Integer(2), 60))).midpoint());
}

bool TargetPoint::is_rational() const {
  return std::all_of(parameter.begin(), parameter.end(),
                     [](const TargetCoordinate& c) { return std::holds_alternative<Rational>(c); });
}

std::vector<RationalInterval> TargetPoint::enclosure(const Rational& width) const {
  std::vector<RationalInterval> out;
  out.reserve(parameter.size());
  for (const auto& c : parameter) {
    if (const auto* r = std::get_if<Rational>(&c)) {
      out.emplace_back(*r);
    } else {
      out.push_back(std::get<AlgebraicNumber>(c).enclosure(width));
    }
  }
  return out;
}

std::vector<double> TargetPoint::approx() const {
  std::vector<double> out;
  for (const auto& c : parameter) {
    if (const auto* r = std::get_if<Rational>(&c)) {
      out.push_back(to_double(*r));
    } else {
      out.push_back(std::get<AlgebraicNumber>(c).approx());
    }
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// A rational root a/b of p (integer coefficients, leading coefficient L)
// has b | L, and two such roots differ by at least 1/L^2, so after refining
// below that width the only candidate per b is round(mid b).
std::optional<Rational> rational_root_in(const UPoly& p, RootInterval r) {
  Integer den = 1;
  for (const auto& c : p.coefficients()) den = lcm(den, denominator(c));
  const Integer L = abs(numerator(p.leading() * den));
  if (L > 100000) return std::nullopt;
  r = refine(p, r, Rational(Integer(1), 2 * L * L));
  const Rational mid = (r.lo + r.hi) / 2;
  for (Integer b = 1; b <= L; ++b) {
    if (L % b != 0) continue;
    const Rational x(floor(mid * b + Rational(1, 2)), b);
    if (r.lo <= x && x <= r.hi && p(x) == 0) return x;
  }
  return std::nullopt;
}

TargetCoordinate parse_coordinate(std::string_view text) {
  const auto open = text.find('[');
  if (open == std::string_view::npos) return parse_rational(trim(text));
  const auto close = text.find(']', open);
  if (close == std::string_view::npos) throw InvalidArgument("target interval is missing ']'");
  std::string_view poly = text.substr(0, open);
  const auto comma = poly.find_last_of(',');
  if (comma == std::string_view::npos) throw InvalidArgument("target must look like 'polynomial,[a,b]'");
  poly = poly.substr(0, comma);
  const std::string_view body = text.substr(open + 1, close - open - 1);
  const auto sep = body.find(',');
  if (sep == std::string_view::npos) throw InvalidArgument("target interval must be '[a,b]'");
  const Rational a = parse_rational(trim(body.substr(0, sep)));
  const Rational b = parse_rational(trim(body.substr(sep + 1)));
  if (b < a) throw InvalidArgument("target interval has b < a");
  const UPoly p = squarefree_part(parse_upoly(poly));
  const auto roots = isolate_roots(p, a, b);
  if (roots.size() != 1)
    throw InvalidArgument("target interval holds " + std::to_string(roots.size()) + " roots, expected 1");
  if (roots[0].exact()) return roots[0].lo;
  if (auto r = rational_root_in(p, roots[0])) return *r;
  return AlgebraicNumber(p, {roots[0].lo, roots[0].hi});
}

std::string spec_of(const UPoly& p, const RationalInterval& iv) {
  return to_string(p) + ",[" + to_string(iv.lo) + "," + to_string(iv.hi) + "]";
}

}  // namespace

TargetPoint parse_target(std::string_view text) {
  TargetPoint t;
  t.spec = trim(text);
  std::size_t start = 0;
  for (;;) {
    const auto semi = text.find(';', start);
    t.parameter.push_back(parse_coordinate(text.substr(start, semi - start)));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return t;
}

TargetPoint rational_target(const RationalVector& t) {
  TargetPoint out;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (i) out.spec += ";";
    out.spec += to_string(t(i));
    out.parameter.emplace_back(t(i));
  }
  return out;
}

std::vector<TargetPoint> sample_quadratic_targets(std::size_t count, std::uint64_t seed, const Box& window) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lead(1, 6), coef(-8, 8);
  std::vector<TargetPoint> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1)) throw InvalidArgument("window too small for quadratic targets");
    TargetPoint t;
    for (Eigen::Index i = 0; i < window.dim(); ++i) {
      for (;;) {
        const int a = lead(rng), b = coef(rng), c = coef(rng);
        const long disc = static_cast<long>(b) * b - 4L * a * c;
        if (disc <= 0) continue;
        const long s = static_cast<long>(std::llround(std::sqrt(static_cast<double>(disc))));
        if (s * s == disc) continue;
        const UPoly p({Rational(c), Rational(b), Rational(a)});
        std::vector<RootInterval> inside;
        for (auto r : isolate_roots(p, window.lo(i), window.hi(i))) {
          r = refine(p, r, Rational(1, 1 << 20));
          if (r.lo > window.lo(i) && r.hi < window.hi(i)) inside.push_back(r);
        }
        if (inside.empty()) continue;
        const auto& r = inside[std::uniform_int_distribution<std::size_t>(0, inside.size() - 1)(rng)];
        if (i) t.spec += ";";
        t.spec += spec_of(p, {r.lo, r.hi});
        t.parameter.emplace_back(AlgebraicNumber(p, {r.lo, r.hi}));
        break;
      }
    }
    if (seen.insert(t.spec).second) out.push_back(std::move(t));
  }
  return out;
}

std::vector<TargetPoint> sample_rational_targets(std::size_t count, std::uint64_t seed, const Box& window,
                                                 long long max_den) {
  if (max_den < 1) throw InvalidArgument("max_den must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> den(1, max_den);
  std::vector<TargetPoint> out;
  for (std::size_t n = 0; n < count; ++n) {
    RationalVector t(window.dim());
    for (Eigen::Index i = 0; i < window.dim(); ++i) {
      const Integer q = den(rng);
      const Integer lo = ceil(window.lo(i) * q), hi = floor(window.hi(i) * q);
      if (hi < lo) throw InvalidArgument("window too small for rational targets");
      const auto span = (hi - lo).convert_to<long long>();
      t(i) = Rational(lo + std::uniform_int_distribution<long long>(0, span)(rng), q);
    }
    out.push_back(rational_target(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Record search

namespace {

// Max-norm distance enclosures from intrinsic rationals to the image of the
// target, with on-demand refinement of the target enclosure.
class Distancer {
 public:
  Distancer(const Chart& chart, const TargetPoint& target, Rational width, Rational min_width)
      : chart_(chart), target_(target), width_(std::move(width)), min_width_(std::move(min_width)) {
    exact_ = target.is_rational();
    update();
  }

  RationalInterval operator()(const RationalPoint& r) const {
    RationalInterval best(Rational(0));
    for (Eigen::Index i = 0; i < r.dim(); ++i) {
      const RationalInterval e = abs(img_[static_cast<std::size_t>(i)] - RationalInterval(r.coordinate(i)));
      if (e.lo > best.lo) best.lo = e.lo;
      if (e.hi > best.hi) best.hi = e.hi;
    }
    return best;
  }

  bool refine() {
    if (exact_ || width_ <= min_width_) return false;
    width_ /= ipow(Integer(2), 64);
    if (width_ < min_width_) width_ = min_width_;
    update();
    return true;
  }

  const Rational& width() const { return width_; }
  const std::vector<RationalInterval>& parameter() const { return param_; }

 private:
  void update() {
    if (param_.empty()) {
      param_ = target_.enclosure(width_);
    } else {
      // Continue bisecting from the current enclosure.
      for (std::size_t i = 0; i < param_.size(); ++i) {
        const auto* a = std::get_if<AlgebraicNumber>(&target_.parameter[i]);
        if (!a || param_[i].is_point()) continue;
        const RootInterval r = intrinsic::refine(a->polynomial, {param_[i].lo, param_[i].hi}, width_);
        param_[i] = {r.lo, r.hi};
      }
    }
    img_ = chart_.image_enclosure(param_);
  }

  const Chart& chart_;
  const TargetPoint& target_;
  Rational width_, min_width_;
  bool exact_ = false;
  std::vector<RationalInterval> param_;
  std::vector<RationalInterval> img_;
};

struct Candidate {
  RationalPoint point;
  RationalVector parameter;
  unsigned chart = 0;
  RationalInterval distance;
};

enum class Order { Less, NotLess, Tie };

// Builds the staircase one height group at a time with certified comparisons.
// Pairs that stay tied at the finest precision are reported when they decide
// a record.
class Staircase {
 public:
  Staircase(Distancer& dist, RecordSet& out, bool strict) : dist_(dist), out_(out), strict_(strict) {}

  void add_group(std::vector<Candidate>& group) {
    if (group.empty()) return;
    std::vector<std::size_t> mins{0};
    for (std::size_t i = 1; i < group.size(); ++i) {
      const Order o = compare(group[i], group[mins.front()]);
      if (o == Order::Less) {
        mins = {i};
      } else if (o == Order::Tie) {
        mins.push_back(i);
      }
    }
    Candidate& m = group[mins.front()];
    if (best_) {
      const Order o = compare(m, *best_);
      if (o == Order::Tie) unresolved(m.point, best_->point);
      if (o != Order::Less) return;
    }
    for (std::size_t i = 1; i < mins.size(); ++i) unresolved(m.point, group[mins[i]].point);
    best_ = m;
    ApproximationRecord r;
    r.height = m.point.height();
    r.distance = m.distance;
    r.witness = m.point;
    r.parameter = m.parameter;
    r.chart = m.chart;
    out_.records.push_back(std::move(r));
  }

  const std::optional<Candidate>& best() const { return best_; }

  void finish() {
    for (auto& r : out_.records) r.distance = dist_(r.witness);
    out_.enclosure_width = dist_.width();
  }

 private:
  Order compare(Candidate& a, Candidate& b) {
    for (;;) {
      if (a.distance.hi < b.distance.lo) return Order::Less;
      if (a.distance.lo >= b.distance.hi) return Order::NotLess;
      if (!dist_.refine()) return Order::Tie;
      a.distance = dist_(a.point);
      b.distance = dist_(b.point);
      if (best_) best_->distance = dist_(best_->point);
    }
  }

  void unresolved(const RationalPoint& a, const RationalPoint& b) {
    if (strict_) throw PrecisionExhausted("cannot order distances of " + to_string(a) + " and " + to_string(b));
    out_.unresolved.push_back({a, b});
  }

  Distancer& dist_;
  RecordSet& out_;
  bool strict_;
  std::optional<Candidate> best_;
};

Box search_domain(const Chart& chart, const std::vector<RationalInterval>& t) {
  Box box = chart.domain();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    if (t[i].lo < box.lo(j)) box.lo(j) = Rational(floor(t[i].lo) - 1);
    if (t[i].hi > box.hi(j)) box.hi(j) = Rational(ceil(t[i].hi) + 1);
  }
  return box;
}

}  // namespace

struct RecordSearch::Cache {
  std::vector<IntrinsicRational> points;  // canonical order, so heights ascend
  std::vector<double> coords;             // d doubles per point
};

RecordSearch::RecordSearch(Atlas atlas, Integer T, RecordOptions options)
    : atlas_(std::move(atlas)), T_(std::move(T)), options_(std::move(options)) {
  if (T_ < 1) throw InvalidArgument("height bound must be at least 1");
  if (options_.precision <= 0 || options_.min_precision <= 0)
    throw InvalidArgument("precision must be positive");
}

RecordSearch::~RecordSearch() = default;
RecordSearch::RecordSearch(RecordSearch&&) noexcept = default;

bool RecordSearch::uses_parameter_window() const {
  const Chart& c = atlas_.primary();
  return atlas_.charts.size() == 1 && c.height_power() > 0 && c.dominates_parameter();
}

void RecordSearch::prepare() {
  if (uses_parameter_window() || cache_) return;
  auto cache = std::make_unique<Cache>();
  cache->points = enumerate_rationals(atlas_, T_, std::nullopt, options_.budget);
  std::sort(cache->points.begin(), cache->points.end());
  const auto d = static_cast<std::size_t>(atlas_.d());
  cache->coords.resize(cache->points.size() * d);
  for (std::size_t i = 0; i < cache->points.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      cache->coords[i * d + j] = to_double(cache->points[i].point.coordinate(static_cast<Eigen::Index>(j)));
  cache_ = std::move(cache);
}

RecordSet RecordSearch::run(const TargetPoint& target) const {
  const Chart& primary = atlas_.primary();
  if (target.k() != primary.k()) throw InvalidArgument("target has the wrong number of parameters");
  RecordSet out;
  out.target = target;
  out.T = T_;
  const auto initial = target.enclosure(options_.precision);
  out.search_domain = search_domain(primary, initial);
  const Chart chart = primary.with_domain(out.search_domain);
  Distancer dist(chart, target, options_.precision, options_.min_precision);
  Staircase stairs(dist, out, options_.strict);
  const unsigned k = chart.k();

  if (uses_parameter_window()) {
    out.pruned = true;
    // The first k ambient coordinates are the parameters, so a candidate can
    // only beat the current record if each |t_i - p_i/q| is below its distance.
    const Integer Q = chart.param_height_bound(T_);
    std::uint64_t visited = 0;
    for (Integer q = 1; q <= Q; ++q) {
      std::vector<Integer> lo(k), hi(k);
      bool empty = false;
      for (unsigned i = 0; i < k && !empty; ++i) {
        Rational a = out.search_domain.lo(i), b = out.search_domain.hi(i);
        if (stairs.best()) {
          const Rational& delta = stairs.best()->distance.hi;
          a = std::max<Rational>(a, initial[i].lo - delta);
          b = std::min<Rational>(b, initial[i].hi + delta);
        }
        lo[i] = ceil(a * q);
        hi[i] = floor(b * q);
        empty = hi[i] < lo[i];
      }
      if (empty) continue;
      std::vector<Candidate> group;
      std::vector<Integer> p = lo;
      for (;;) {
        if (++visited > options_.budget) throw BudgetExceeded("record search exceeded its budget");
        Integer g = q;
        for (const auto& x : p) g = gcd(g, x);
        if (g == 1) {
          RationalVector t(k);
          for (unsigned i = 0; i < k; ++i) t(i) = Rational(p[i], q);
          Candidate c;
          c.point = chart.evaluate(t);
          if (c.point.height() <= T_) {
            c.parameter = std::move(t);
            c.distance = dist(c.point);
            group.push_back(std::move(c));
          }
        }
        unsigned i = 0;
        while (i < k && p[i] == hi[i]) {
          p[i] = lo[i];
          ++i;
        }
        if (i == k) break;
        ++p[i];
      }
      stairs.add_group(group);
      if (stairs.best() && stairs.best()->distance.hi == 0) break;
    }
    stairs.finish();
    return out;
  }

  if (!cache_) throw InvalidArgument("RecordSearch::prepare() must run before run() on this atlas");
  const auto& pts = cache_->points;
  const auto d = static_cast<std::size_t>(atlas_.d());
  std::vector<double> img(d);
  const auto t_approx = target.approx();
  chart.image(std::span<const double>(t_approx), std::span<double>(img));

  // Float prefilter: a point can be a record only if its approximate distance
  // is below the best approximate distance at lower heights (plus a margin
  // covering rounding). Any true record survives, and a non-record that
  // survives is rejected by the exact pass since whatever beats it is either
  // kept or beaten by something kept.
  std::vector<std::size_t> keep;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    double group_min = std::numeric_limits<double>::infinity();
    for (; j < pts.size() && pts[j].point.height() == pts[i].point.height(); ++j) {
      double m = 0;
      for (std::size_t a = 0; a < d; ++a) m = std::max(m, std::abs(cache_->coords[j * d + a] - img[a]));
      if (m <= prev * (1 + 1e-9) + 1e-12) keep.push_back(j);
      group_min = std::min(group_min, m);
    }
    prev = std::min(prev, group_min);
    i = j;
  }
  for (std::size_t i = 0; i < keep.size();) {
    std::size_t j = i;
    std::vector<Candidate> group;
    for (; j < keep.size() && pts[keep[j]].point.height() == pts[keep[i]].point.height(); ++j) {
      const auto& r = pts[keep[j]];
      group.push_back({r.point, r.parameter, r.chart, dist(r.point)});
    }
    stairs.add_group(group);
    i = j;
  }
  stairs.finish();
  return out;
}

RecordSet best_approximations(const Atlas& atlas, const TargetPoint& target, const Integer& T,
                              const RecordOptions& options) {
  RecordSearch search(atlas, T, options);
  search.prepare();
  return search.run(target);
}

std::vector<std::pair<Integer, std::optional<RationalInterval>>> dyadic_profile(
    const std::vector<ApproximationRecord>& records, const Integer& T) {
  std::vector<std::pair<Integer, std::optional<RationalInterval>>> out;
  std::size_t next = 0;
  std::optional<RationalInterval> current;
  for (Integer h = 1; h <= T; h *= 2) {
    while (next < records.size() && records[next].height <= h) current = records[next++].distance;
    out.emplace_back(h, current);
  }
  return out;
}

RationalInterval power_enclosure(const Integer& h, const Rational& c, unsigned bits) {
  if (h < 1) throw InvalidArgument("power_enclosure needs h >= 1");
  if (c < 0) throw InvalidArgument("power_enclosure needs c >= 0");
  const unsigned a = numerator(c).convert_to<unsigned>();
  const unsigned b = denominator(c).convert_to<unsigned>();
  // h^(a/b) = (h^a 2^(b bits))^(1/b) / 2^bits.
  const Integer scale = ipow(Integer(2), bits);
  const Integer x = ipow(h, a) * ipow(scale, b);
  const Integer r = integer_root(x, b);
  if (ipow(r, b) == x) return RationalInterval(Rational(r, scale));
  return {Rational(r, scale), Rational(r + 1, scale)};
}

// ---------------------------------------------------------------------------
// Exponents and finite-scale tests

namespace {

double log_of(const Integer& x) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.backend().data());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

double log_of(const Rational& x) { return log_of(numerator(x)) - log_of(denominator(x)); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw InsufficientData("records share a single height");
  return sxy / sxx;
}

std::string scale_label(const Integer& T) { return to_string(T); }

}  // namespace

ExponentEstimate exponent_estimate(const std::vector<ApproximationRecord>& records, const Rational& c_reference,
                                   double tail_fraction) {
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw InvalidArgument("tail fraction must lie in (0, 1]");
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.height <= 1 || r.distance.hi <= 0) continue;
    const Rational mid = r.distance.lo > 0 ? r.distance.midpoint() : r.distance.hi;
    x.push_back(-log_of(r.height));
    y.push_back(log_of(mid));
  }
  if (x.size() < 2) throw InsufficientData("exponent estimate needs at least two records of positive distance");
  ExponentEstimate e;
  e.c_reference = c_reference;
  e.tail_fraction = tail_fraction;
  e.used = x.size();
  e.slope = fit_slope(x, y);
  std::size_t tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(x.size())));
  tail = std::clamp<std::size_t>(tail, 2, x.size());
  const std::vector<double> tx(x.end() - static_cast<long>(tail), x.end());
  const std::vector<double> ty(y.end() - static_cast<long>(tail), y.end());
  e.tail_used = tail;
  e.tail_slope = fit_slope(tx, ty);
  e.tail_inf = std::numeric_limits<double>::infinity();
  e.tail_sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tail; ++i) {
    const double v = ty[i] / tx[i];  // log(1/d) / log(h)
    e.tail_inf = std::min(e.tail_inf, v);
    e.tail_sup = std::max(e.tail_sup, v);
  }
  return e;
}

BaResult ba_test(const RecordSet& set, const Rational& c, const Rational& threshold) {
  BaResult out;
  out.c = c;
  out.threshold = threshold;
  const auto& records = set.records;
  if (records.empty()) throw InsufficientData("ba_test needs at least one record");
  std::map<int, RationalInterval> windows;
  bool first = true;
  for (const auto& r : records) {
    const RationalInterval v = r.distance * power_enclosure(r.height, c);
    if (first) {
      out.infimum = v;
      first = false;
    } else {
      out.infimum = {std::min<Rational>(out.infimum.lo, v.lo), std::min<Rational>(out.infimum.hi, v.hi)};
    }
    const int j = r.height == 1 ? 0 : ceil_log2(Rational(r.height));
    auto [it, fresh] = windows.try_emplace(j, v);
    if (!fresh) it->second = {std::min<Rational>(it->second.lo, v.lo), std::min<Rational>(it->second.hi, v.hi)};
  }
  for (const auto& [j, v] : windows) out.windows.push_back({j, v});
  out.last_window = out.windows.back().infimum;
  for (std::size_t i = 0; i + 1 < out.windows.size(); ++i) {
    const auto& v = out.windows[i].infimum;
    if (!out.earlier_windows) {
      out.earlier_windows = v;
    } else {
      out.earlier_windows = RationalInterval(std::min<Rational>(out.earlier_windows->lo, v.lo),
                                             std::min<Rational>(out.earlier_windows->hi, v.hi));
    }
  }
  out.verdict = out.infimum.lo > 0 && out.earlier_windows &&
                out.last_window->lo >= threshold * out.earlier_windows->hi;
  out.label = (out.verdict ? "BA-at-scale-" : "not-BA-at-scale-") + scale_label(set.T);
  return out;
}

VwaResult vwa_test(const RecordSet& set, const Rational& c, std::size_t min_count, double tail_fraction,
                   const Rational& max_epsilon) {
  VwaResult out;
  out.c = c;
  out.min_count = min_count;
  out.tail_fraction = tail_fraction;
  const auto& records = set.records;
  if (records.empty()) throw InsufficientData("vwa_test needs at least one record");
  for (const auto& r : records)
    if (r.distance.hi == 0) out.degenerate = true;
  if (out.degenerate) {
    out.label = "Degenerate";
    return out;
  }
  const double lmax = log_of(records.back().height);
  const double lmin = log_of(records.front().height);
  const double cut = lmax - tail_fraction * (lmax - lmin);
  std::vector<const ApproximationRecord*> tail;
  for (const auto& r : records)
    if (log_of(r.height) >= cut) tail.push_back(&r);
  for (Rational eps(1, 16); eps <= max_epsilon; eps += Rational(1, 16)) {
    std::size_t n = 0;
    for (const auto* r : tail)
      if (r->distance.hi * power_enclosure(r->height, c + eps).hi <= 1) ++n;
    out.counts.emplace_back(eps, n);
    if (n >= min_count) out.supported_epsilon = eps;
  }
  out.verdict = out.supported_epsilon.has_value();
  out.label = (out.verdict ? "VWA-at-scale-" : "not-VWA-at-scale-") + scale_label(set.T);
  return out;
}

Classification classify(const BaResult& ba, const VwaResult& vwa) {
  if (vwa.degenerate) return Classification::Degenerate;
  if (ba.verdict && vwa.verdict) return Classification::Inconclusive;
  if (ba.verdict) return Classification::BadlyApproximable;
  if (vwa.verdict) return Classification::VeryWellApproximable;
  return Classification::Neither;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::BadlyApproximable: return "badly-approximable";
    case Classification::VeryWellApproximable: return "very-well-approximable";
    case Classification::Neither: return "neither";
    case Classification::Inconclusive: return "inconclusive";
    case Classification::Degenerate: return "degenerate";
  }
  return "unknown";
}

DirichletTestResult dirichlet_test(const Atlas& atlas, const std::vector<TargetPoint>& targets, const Rational& c,
                                   const Integer& T, const RecordOptions& options, unsigned workers) {
  if (targets.empty()) throw InvalidArgument("dirichlet_test needs at least one target");
  RecordSearch search(atlas, T, options);
  search.prepare();
  // values[t][j]: (min distance at height <= 2^j) 2^(j c), if any record exists.
  std::vector<std::vector<std::optional<RationalInterval>>> values(targets.size());
  parallel_for(targets.size(), workers, [&](std::size_t i) {
    const RecordSet set = search.run(targets[i]);
    for (const auto& [h, m] : dyadic_profile(set.records, T))
      values[i].push_back(m ? std::optional<RationalInterval>(*m * power_enclosure(h, c)) : std::nullopt);
  });
  DirichletTestResult out;
  out.c = c;
  out.T = T;
  out.targets = targets.size();
  std::optional<RationalInterval> sup;
  Integer h = 1;
  for (std::size_t j = 0; j < values.front().size(); ++j, h *= 2) {
    DirichletLevel level;
    if (!out.levels.empty()) level = out.levels.back();
    level.height = h;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& v = values[t][j];
      if (!v) continue;
      if (!sup) {
        sup = *v;
        level.witness_target = t;
        level.witness_height = h;
        continue;
      }
      if (v->lo > sup->lo) {
        level.witness_target = t;
        level.witness_height = h;
      }
      sup = RationalInterval(std::max<Rational>(sup->lo, v->lo), std::max<Rational>(sup->hi, v->hi));
    }
    level.constant = sup ? *sup : RationalInterval(Rational(0));
    out.levels.push_back(std::move(level));
  }
  return out;
}

std::vector<double> doubling_ratios(const DirichletTestResult& result, std::size_t count) {
  std::vector<double> out;
  const auto& L = result.levels;
  for (std::size_t i = L.size() > count ? L.size() - count : 1; i < L.size(); ++i) {
    const double prev = to_double(L[i - 1].constant.midpoint());
    out.push_back(prev > 0 ? to_double(L[i].constant.midpoint()) / prev : std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace intrinsic
