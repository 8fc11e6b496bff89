#include "intrinsic/chart.hpp"

#include "intrinsic/bareiss.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace intrinsic {

// ---------------------------------------------------------------------------
// Box

Box Box::cube(Eigen::Index dim, const Rational& a, const Rational& b) {
  Box box;
  box.lo = RationalVector::Constant(dim, a);
  box.hi = RationalVector::Constant(dim, b);
  return box;
}

Box Box::ball(const RationalVector& center, const Rational& radius) {
  Box box;
  box.lo = center;
  box.hi = center;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    box.lo(i) -= radius;
    box.hi(i) += radius;
  }
  return box;
}

bool Box::empty() const {
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (hi(i) < lo(i)) return true;
  return false;
}

bool Box::contains(const RationalVector& x) const {
  if (x.size() != dim()) throw InvalidArgument("box membership with wrong dimension");
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (x(i) < lo(i) || hi(i) < x(i)) return false;
  return true;
}

bool Box::contains(const RationalPoint& x) const {
  if (x.dim() != dim()) throw InvalidArgument("box membership with wrong dimension");
  for (Eigen::Index i = 0; i < dim(); ++i) {
    // lo <= p/q <= hi  <=>  lo q <= p <= hi q
    const Rational c = x.coordinate(i);
    if (c < lo(i) || hi(i) < c) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (other.lo(i) < lo(i) || hi(i) < other.hi(i)) return false;
  return true;
}

Box Box::intersect(const Box& other) const {
  Box out = *this;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (out.lo(i) < other.lo(i)) out.lo(i) = other.lo(i);
    if (other.hi(i) < out.hi(i)) out.hi(i) = other.hi(i);
  }
  return out;
}

Box Box::expanded(const Rational& r) const {
  Box out = *this;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    out.lo(i) -= r;
    out.hi(i) += r;
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Box parse_box(std::string_view text, Eigen::Index dim) {
  const auto parts = split(text, ',');
  if (parts.size() != 1 && static_cast<Eigen::Index>(parts.size()) != dim)
    throw InvalidArgument("box '" + std::string(text) + "' has the wrong number of axes");
  Box box;
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto axis = trim(parts.size() == 1 ? parts[0] : parts[static_cast<std::size_t>(i)]);
    // The separator is the first ".." that follows a character, so a leading
    // minus sign on either endpoint is allowed.
    const auto sep = axis.find("..", 1);
    if (sep == std::string_view::npos) throw InvalidArgument("box axis '" + std::string(axis) + "' needs a..b");
    box.lo(i) = parse_rational(trim(axis.substr(0, sep)));
    box.hi(i) = parse_rational(trim(axis.substr(sep + 2)));
    if (box.hi(i) < box.lo(i)) throw InvalidArgument("box axis '" + std::string(axis) + "' is empty");
  }
  return box;
}

std::string to_string(const Box& b) {
  std::string out;
  for (Eigen::Index i = 0; i < b.dim(); ++i) {
    if (i) out += ',';
    out += to_string(b.lo(i)) + ".." + to_string(b.hi(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::string name, unsigned k, std::vector<Polynomial> numerators, Polynomial denominator, Box domain)
    : name_(std::move(name)),
      k_(k),
      numerators_(std::move(numerators)),
      denominator_(std::move(denominator)),
      domain_(std::move(domain)) {
  if (k_ < 1) throw InvalidArgument("chart needs k >= 1");
  if (numerators_.size() < k_) throw InvalidArgument("chart needs d >= k");
  if (denominator_.is_zero()) throw InvalidArgument("chart denominator is the zero polynomial");
  for (const auto& p : numerators_)
    if (p.variables() != k_) throw InvalidArgument("chart coordinate has the wrong number of variables");
  if (denominator_.variables() != k_) throw InvalidArgument("chart denominator has the wrong number of variables");
  if (domain_.dim() != static_cast<Eigen::Index>(k_)) throw InvalidArgument("chart domain has the wrong dimension");
}

unsigned Chart::degree() const {
  unsigned deg = 0;
  for (const auto& p : numerators_) deg = std::max(deg, p.degree());
  return deg;
}

Chart& Chart::with_implicit_equations(std::vector<Polynomial> eqs) {
  for (const auto& e : eqs)
    if (e.variables() != d()) throw InvalidArgument("implicit equation has the wrong number of variables");
  implicit_eqs_ = std::move(eqs);
  return *this;
}

Chart& Chart::with_height_bound(HeightBound bound, unsigned height_power) {
  height_bound_ = std::move(bound);
  height_power_ = height_power;
  return *this;
}

Chart& Chart::with_dominates_parameter(bool value) {
  dominates_parameter_ = value;
  return *this;
}

Chart Chart::with_domain(Box domain) const {
  if (domain.dim() != static_cast<Eigen::Index>(k_)) throw InvalidArgument("chart domain has the wrong dimension");
  Chart c = *this;
  c.domain_ = std::move(domain);
  return c;
}

RationalVector Chart::image_unchecked(const RationalVector& t) const {
  if (t.size() != static_cast<Eigen::Index>(k_)) throw InvalidArgument("chart evaluated with wrong arity");
  const Rational den = denominator_(t);
  if (den == 0) throw PoleHit("chart " + name_ + ": denominator vanishes");
  RationalVector x(d());
  for (unsigned i = 0; i < d(); ++i) x(i) = numerators_[i](t);
  if (den != 1) x /= den;
  return x;
}

RationalVector Chart::image(const RationalVector& t) const {
  if (t.size() != static_cast<Eigen::Index>(k_)) throw InvalidArgument("chart evaluated with wrong arity");
  if (!domain_.contains(t)) throw OutsideDomain("chart " + name_ + ": parameter outside the domain");
  return image_unchecked(t);
}

std::vector<RationalInterval> Chart::image_enclosure(const std::vector<RationalInterval>& t) const {
  if (t.size() != k_) throw InvalidArgument("chart enclosure with wrong arity");
  const std::span<const RationalInterval> s(t);
  const RationalInterval den = denominator_(s);
  if (den.contains_zero()) throw PoleHit("chart " + name_ + ": denominator enclosure contains 0");
  std::vector<RationalInterval> out;
  out.reserve(d());
  for (const auto& p : numerators_) out.push_back(p(s) / den);
  return out;
}

void Chart::image(std::span<const double> t, std::span<double> out) const {
  const double den = denominator_(t);
  for (unsigned i = 0; i < d(); ++i) out[i] = numerators_[i](t) / den;
}

bool Chart::satisfies_equations(const RationalVector& x) const {
  for (const auto& e : implicit_eqs_)
    if (e(x) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Built-in charts

namespace {

HeightBound root_bound(unsigned n) {
  return [n](const Integer& T) { return T < 1 ? Integer(0) : integer_root(T, n); };
}

Polynomial ambient_var(unsigned d, unsigned i) { return Polynomial::variable(d, i); }

}  // namespace

Chart veronese_chart(unsigned k, unsigned n) {
  if (k < 1 || n < 1) throw InvalidArgument("veronese chart needs k >= 1 and n >= 1");
  const auto alphas = multi_indices_up_to(k, n, 1);
  const auto d = static_cast<unsigned>(alphas.size());
  std::vector<Polynomial> coords;
  coords.reserve(d);
  std::map<MultiIndex, unsigned, GradedLess> slot;
  for (unsigned i = 0; i < d; ++i) {
    coords.push_back(Polynomial::monomial(alphas[i]));
    slot.emplace(alphas[i], i);
  }

  std::vector<Polynomial> eqs;
  // Graph relations x_alpha = prod_i x_{e_i}^{alpha_i}.
  for (unsigned i = k; i < d; ++i) {
    Polynomial rhs = Polynomial::constant(d, 1);
    for (unsigned v = 0; v < k; ++v)
      if (alphas[i][v]) rhs = rhs * pow(ambient_var(d, v), alphas[i][v]);
    eqs.push_back(ambient_var(d, i) - rhs);
  }
  // Quadratic binomials x_a x_b - x_c x_e for a + b = c + e, and
  // x_a x_b - x_{a+b} when |a + b| <= n.
  std::map<MultiIndex, std::vector<std::pair<unsigned, unsigned>>, GradedLess> by_sum;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = i; j < d; ++j) by_sum[alphas[i] + alphas[j]].emplace_back(i, j);
  for (const auto& [sum, pairs] : by_sum) {
    const Polynomial first = ambient_var(d, pairs[0].first) * ambient_var(d, pairs[0].second);
    for (std::size_t p = 1; p < pairs.size(); ++p)
      eqs.push_back(first - ambient_var(d, pairs[p].first) * ambient_var(d, pairs[p].second));
    if (const auto it = slot.find(sum); it != slot.end()) eqs.push_back(first - ambient_var(d, it->second));
  }

  Chart c("veronese:" + std::to_string(k) + "," + std::to_string(n), k, std::move(coords), Polynomial::constant(k, 1),
          Box::cube(k, -1, 1));
  c.with_implicit_equations(std::move(eqs)).with_height_bound(root_bound(n), n).with_dominates_parameter(true);
  return c;
}

Chart curve_cn(unsigned n) {
  if (n < 2) throw InvalidArgument("cn:n needs n >= 2");
  std::vector<Polynomial> coords{Polynomial::variable(1, 0), pow(Polynomial::variable(1, 0), n)};
  Chart c("cn:" + std::to_string(n), 1, std::move(coords), Polynomial::constant(1, 1), Box::cube(1, -1, 1));
  c.with_implicit_equations({ambient_var(2, 1) - pow(ambient_var(2, 0), n)})
      .with_height_bound(root_bound(n), n)
      .with_dominates_parameter(true);
  return c;
}

namespace {

Chart stereographic(unsigned d, bool north) {
  if (d < 2) throw InvalidArgument("sphere:d needs d >= 2");
  const unsigned k = d - 1;
  Polynomial norm2(k);
  for (unsigned i = 0; i < k; ++i) norm2 += pow(Polynomial::variable(k, i), 2);
  const Polynomial one = Polynomial::constant(k, 1);
  std::vector<Polynomial> coords;
  for (unsigned i = 0; i < k; ++i) coords.push_back(Polynomial::variable(k, i) * Rational(2));
  coords.push_back(north ? one - norm2 : norm2 - one);

  Polynomial sphere = Polynomial::constant(d, -1);
  for (unsigned i = 0; i < d; ++i) sphere += pow(ambient_var(d, i), 2);

  Chart c(std::string(north ? "sphere:" : "sphere-south:") + std::to_string(d), k, std::move(coords), one + norm2,
          Box::cube(k, -1, 1));
  HeightBound bound;
  if (k == 1) {
    // Parameter u/v gives height (u^2 + v^2) / g with g in {1, 2}, so v^2 <= 2T.
    bound = [](const Integer& T) { return T < 1 ? Integer(0) : integer_root(2 * T, 2); };
  } else {
    // Inverse map t_i = p_i / (h + p_d) (or h - p_d) has denominator <= 2T.
    bound = [](const Integer& T) { return T < 1 ? Integer(0) : Integer(2 * T); };
  }
  c.with_implicit_equations({sphere}).with_height_bound(std::move(bound));
  return c;
}

}  // namespace

Chart sphere_chart(unsigned d) { return stereographic(d, true); }

Atlas sphere_atlas(unsigned d) {
  Atlas a;
  a.spec = "sphere:" + std::to_string(d);
  a.charts.push_back(stereographic(d, true));
  a.charts.push_back(stereographic(d, false));
  return a;
}

Chart polynomial_chart(std::string name, unsigned k, std::vector<Polynomial> coordinates) {
  Chart c(std::move(name), k, std::move(coordinates), Polynomial::constant(k, 1), Box::cube(k, -1, 1));
  c.with_height_bound([](const Integer& T) { return T; });
  return c;
}

namespace {

unsigned parse_unsigned(std::string_view s, std::string_view spec) {
  s = trim(s);
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("bad chart specifier '" + std::string(spec) + "'");
  return v;
}

}  // namespace

Atlas atlas_from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("bad chart specifier '" + std::string(spec) + "'");
  const auto family = trim(spec.substr(0, colon));
  const auto args = split(spec.substr(colon + 1), ',');
  Atlas a;
  if (family == "veronese") {
    if (args.size() != 2) throw InvalidArgument("veronese:k,n takes two arguments");
    a.charts.push_back(veronese_chart(parse_unsigned(args[0], spec), parse_unsigned(args[1], spec)));
  } else if (family == "cn") {
    if (args.size() != 1) throw InvalidArgument("cn:n takes one argument");
    a.charts.push_back(curve_cn(parse_unsigned(args[0], spec)));
  } else if (family == "sphere") {
    if (args.size() != 1) throw InvalidArgument("sphere:d takes one argument");
    a = sphere_atlas(parse_unsigned(args[0], spec));
  } else {
    throw InvalidArgument("unknown chart family '" + std::string(family) + "'");
  }
  a.spec = a.primary().name();
  return a;
}

std::vector<std::string> builtin_chart_specs() {
  return {"cn:2", "cn:3", "veronese:1,2", "veronese:1,3", "veronese:2,2", "veronese:2,3", "sphere:2", "sphere:3"};
}

// ---------------------------------------------------------------------------
// Derivatives and nondegeneracy

RationalVector DerivativeMap::at(const RationalVector& t) const {
  RationalVector v(static_cast<Eigen::Index>(coordinates.size()));
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    const auto& f = coordinates[i];
    const Rational den = f.denominator(t);
    if (den == 0) throw PoleHit("derivative denominator vanishes");
    v(static_cast<Eigen::Index>(i)) = f.numerator(t) / den;
  }
  return v;
}

DerivativeMap partial(const Chart& chart, const MultiIndex& alpha) {
  if (alpha.size() != chart.k()) throw InvalidArgument("multi-index has the wrong length");
  DerivativeMap m;
  m.alpha = alpha;
  m.coordinates.reserve(chart.d());
  for (unsigned i = 0; i < chart.d(); ++i) m.coordinates.push_back(chart.coordinate(i).derivative(alpha));
  return m;
}

namespace {

// Rows d^alpha Psi(t) for 0 < |alpha| <= order, in graded order. Each
// derivative is obtained from a lower one by a single differentiation.
RationalMatrix derivative_rows(const Chart& chart, const RationalVector& t, unsigned order) {
  if (t.size() != static_cast<Eigen::Index>(chart.k())) throw InvalidArgument("parameter has the wrong dimension");
  if (!chart.domain().contains(t)) throw OutsideDomain("chart " + chart.name() + ": parameter outside the domain");
  const auto alphas = multi_indices_up_to(chart.k(), order, 1);
  std::map<MultiIndex, std::vector<RationalFunction>, GradedLess> cache;
  {
    std::vector<RationalFunction> base;
    for (unsigned i = 0; i < chart.d(); ++i) base.push_back(chart.coordinate(i));
    cache.emplace(MultiIndex::zero(chart.k()), std::move(base));
  }
  RationalMatrix rows(static_cast<Eigen::Index>(alphas.size()), chart.d());
  for (std::size_t r = 0; r < alphas.size(); ++r) {
    const auto& alpha = alphas[r];
    unsigned var = 0;
    while (alpha[var] == 0) ++var;
    auto lower = alpha.exponents;
    --lower[var];
    const auto& prev = cache.at(MultiIndex(lower));
    std::vector<RationalFunction> cur;
    cur.reserve(prev.size());
    for (const auto& f : prev) cur.push_back(f.derivative(var));
    DerivativeMap m{alpha, cur};
    rows.row(static_cast<Eigen::Index>(r)) = m.at(t).transpose();
    cache.emplace(alpha, std::move(cur));
  }
  return rows;
}

}  // namespace

TangentData tangent_space(const Chart& chart, const RationalVector& t, unsigned order) {
  TangentData td;
  td.point = t;
  td.order = order;
  td.spanning_vectors = derivative_rows(chart, t, order);
  td.rank = exact_rank(td.spanning_vectors);
  return td;
}

NondegeneracyOrder nondegeneracy_order(const Chart& chart, const RationalVector& t, unsigned j_max) {
  if (j_max < 1) throw InvalidArgument("nondegeneracy_order needs j_max >= 1");
  const RationalMatrix all = derivative_rows(chart, t, j_max);
  NondegeneracyOrder out;
  for (unsigned j = 1; j <= j_max; ++j) {
    const auto rows = static_cast<Eigen::Index>(multi_indices_up_to(chart.k(), j, 1).size());
    const Eigen::Index r = exact_rank(RationalMatrix(all.topRows(rows)));
    out.ranks.push_back(r);
    out.terminal_rank = r;
    if (r == static_cast<Eigen::Index>(chart.d())) {
      out.order = j;
      break;
    }
  }
  return out;
}

}  // namespace intrinsic
