#include "intrinsic/enumerate.hpp"

#include "intrinsic/farey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace intrinsic {

namespace {

// A polynomial f of degree <= D rewritten as q^D f(p/q), an integer form in
// (p_1, ..., p_k, q), times a positive scale.
template <typename Coef>
struct HomogeneousTerm {
  std::vector<unsigned> exponents;
  unsigned q_exponent = 0;
  Coef coefficient{};
};

template <typename Coef>
using HomogeneousForm = std::vector<HomogeneousTerm<Coef>>;

Integer coefficient_scale(const std::vector<const Polynomial*>& polys) {
  Integer scale = 1;
  for (const auto* p : polys)
    for (const auto& [alpha, c] : p->terms()) scale = lcm(scale, denominator(c));
  return scale;
}

HomogeneousForm<Integer> homogenize(const Polynomial& p, unsigned degree, const Integer& scale) {
  HomogeneousForm<Integer> form;
  for (const auto& [alpha, c] : p.terms()) {
    const Rational scaled = c * scale;
    form.push_back({alpha.exponents, degree - alpha.degree(), numerator(scaled)});
  }
  return form;
}

Integer evaluate(const HomogeneousForm<Integer>& form, const std::vector<std::vector<Integer>>& p_powers,
                 const std::vector<Integer>& q_powers) {
  Integer sum = 0;
  for (const auto& term : form) {
    Integer v = term.coefficient * q_powers[term.q_exponent];
    for (std::size_t i = 0; i < term.exponents.size(); ++i)
      if (term.exponents[i]) v *= p_powers[i][term.exponents[i]];
    sum += v;
  }
  return sum;
}

// Exact integer evaluation of a chart at rational parameters p/q.
class ChartEvaluator {
 public:
  explicit ChartEvaluator(const Chart& chart) : k_(chart.k()) {
    std::vector<const Polynomial*> polys;
    for (const auto& p : chart.numerators()) polys.push_back(&p);
    polys.push_back(&chart.denominator());
    degree_ = 0;
    for (const auto* p : polys) degree_ = std::max(degree_, p->degree());
    const Integer scale = coefficient_scale(polys);
    for (const auto& p : chart.numerators()) numerators_.push_back(homogenize(p, degree_, scale));
    denominator_ = homogenize(chart.denominator(), degree_, scale);
    p_powers_.assign(k_, std::vector<Integer>(degree_ + 1));
    q_powers_.resize(degree_ + 1);
  }

  // Fills `values` with the integer numerators and returns the common
  // denominator of Psi(p/q).
  Integer operator()(const std::vector<Integer>& p, const Integer& q, std::vector<Integer>& values) {
    q_powers_[0] = 1;
    for (unsigned e = 1; e <= degree_; ++e) q_powers_[e] = q_powers_[e - 1] * q;
    for (unsigned i = 0; i < k_; ++i) {
      p_powers_[i][0] = 1;
      for (unsigned e = 1; e <= degree_; ++e) p_powers_[i][e] = p_powers_[i][e - 1] * p[i];
    }
    values.resize(numerators_.size());
    for (std::size_t i = 0; i < numerators_.size(); ++i) values[i] = evaluate(numerators_[i], p_powers_, q_powers_);
    return evaluate(denominator_, p_powers_, q_powers_);
  }

 private:
  unsigned k_;
  unsigned degree_;
  std::vector<HomogeneousForm<Integer>> numerators_;
  HomogeneousForm<Integer> denominator_;
  std::vector<std::vector<Integer>> p_powers_;
  std::vector<Integer> q_powers_;
};

// Parameter window: the domain, cut down by the ambient box on the
// coordinates that equal the parameters.
Box parameter_window(const Chart& chart, const std::optional<Box>& box) {
  Box window = chart.domain();
  if (box && chart.dominates_parameter()) {
    for (unsigned i = 0; i < chart.k(); ++i) {
      if (window.lo(i) < box->lo(i)) window.lo(i) = box->lo(i);
      if (box->hi(i) < window.hi(i)) window.hi(i) = box->hi(i);
    }
  }
  return window;
}

bool in_box(const std::optional<Box>& box, const std::vector<Integer>& num, const Integer& h) {
  if (!box) return true;
  for (std::size_t i = 0; i < num.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (Rational(num[i]) < box->lo(ii) * h || box->hi(ii) * h < Rational(num[i])) return false;
  }
  return true;
}

void check_box(const Chart& chart, const std::optional<Box>& box) {
  if (box && box->dim() != static_cast<Eigen::Index>(chart.d()))
    throw InvalidArgument("ambient box has the wrong dimension");
}

}  // namespace

double enumeration_cost(const Chart& chart, const Integer& T, const std::optional<Box>& box) {
  check_box(chart, box);
  const Box window = parameter_window(chart, box);
  if (window.empty() || T < 1) return 0;
  const Integer Q = chart.param_height_bound(T);
  if (chart.k() == 1) return estimated_fraction_count(window.lo(0), window.hi(0), Q);
  const double q_max = Q.convert_to<double>();
  std::vector<double> widths;
  for (unsigned i = 0; i < chart.k(); ++i) widths.push_back(to_double(window.hi(i) - window.lo(i)));
  if (q_max > 1e6) {
    double v = std::pow(q_max, chart.k() + 1) / (chart.k() + 1);
    for (double w : widths) v *= w;
    return v;
  }
  double total = 0;
  for (double q = 1; q <= q_max; ++q) {
    double v = 1;
    for (double w : widths) v *= std::floor(w * q) + 1;
    total += v;
  }
  return total;
}

std::vector<IntrinsicRational> enumerate_rationals(const Chart& chart, const Integer& T, const std::optional<Box>& box,
                                                   std::uint64_t budget) {
  if (T < 1) throw InvalidArgument("enumerate_rationals needs T >= 1");
  check_box(chart, box);
  std::vector<IntrinsicRational> out;
  const Box window = parameter_window(chart, box);
  if (window.empty()) return out;
  const double cost = enumeration_cost(chart, T, box);
  if (cost > static_cast<double>(budget))
    throw BudgetExceeded("enumeration of " + chart.name() + " at T = " + to_string(T) + " needs about " +
                         std::to_string(static_cast<long long>(cost)) + " candidates (budget " +
                         std::to_string(budget) + ")");

  const Integer Q = chart.param_height_bound(T);
  const unsigned k = chart.k();
  ChartEvaluator eval(chart);
  std::vector<Integer> values;
  std::vector<Integer> p(k);

  auto consider = [&](const Integer& q) {
    const Integer den = eval(p, q, values);
    if (den == 0) throw PoleHit("chart " + chart.name() + ": denominator vanishes inside the domain");
    Integer g = abs(den);
    for (const auto& v : values) {
      if (g == 1) break;
      g = gcd(g, v);
    }
    const Integer h = abs(den) / g;
    if (h > T) return;
    const bool negate = den < 0;
    for (auto& v : values) {
      v /= g;
      if (negate) v = -v;
    }
    if (!in_box(box, values, h)) return;
    IntrinsicRational r;
    IntegerVector num(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) num(static_cast<Eigen::Index>(i)) = values[i];
    r.point = RationalPoint(std::move(num), h);
    r.parameter.resize(k);
    for (unsigned i = 0; i < k; ++i) r.parameter(i) = Rational(p[i], q);
    out.push_back(std::move(r));
  };

  if (k == 1) {
    for_each_fraction(window.lo(0), window.hi(0), Q, [&](const Rational& t) {
      p[0] = numerator(t);
      consider(denominator(t));
      return true;
    });
  } else {
    const long long q_max = Q.convert_to<long long>();
    std::vector<long long> lo(k), hi(k), cur(k);
    for (long long q = 1; q <= q_max; ++q) {
      bool empty = false;
      for (unsigned i = 0; i < k; ++i) {
        lo[i] = ceil(window.lo(i) * q).convert_to<long long>();
        hi[i] = floor(window.hi(i) * q).convert_to<long long>();
        if (hi[i] < lo[i]) empty = true;
        cur[i] = lo[i];
      }
      if (empty) continue;
      for (;;) {
        long long g = q;
        for (unsigned i = 0; i < k && g != 1; ++i) g = std::gcd(g, cur[i]);
        if (g == 1) {
          for (unsigned i = 0; i < k; ++i) p[i] = cur[i];
          consider(Integer(q));
        }
        unsigned i = 0;
        while (i < k && cur[i] == hi[i]) {
          cur[i] = lo[i];
          ++i;
        }
        if (i == k) break;
        ++cur[i];
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntrinsicRational> enumerate_rationals(const Atlas& atlas, const Integer& T, const std::optional<Box>& box,
                                                   std::uint64_t budget) {
  std::vector<IntrinsicRational> out;
  for (unsigned c = 0; c < atlas.charts.size(); ++c) {
    auto part = enumerate_rationals(atlas.charts[c], T, box, budget);
    for (auto& r : part) {
      r.chart = c;
      out.push_back(std::move(r));
    }
  }
  std::stable_sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const IntrinsicRational& a, const IntrinsicRational& b) { return a.point == b.point; }),
            out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Brute force over Q^d

namespace {

using Wide = __int128;

struct SmallTerm {
  std::vector<unsigned> exponents;
  unsigned q_exponent = 0;
  long long coefficient = 0;
};

struct SmallEquation {
  std::vector<SmallTerm> terms;
  unsigned last_variable = 0;
  bool constant = true;
};

Wide evaluate_small(const SmallEquation& eq, const std::vector<long long>& p, long long q) {
  Wide sum = 0;
  for (const auto& t : eq.terms) {
    Wide v = t.coefficient;
    for (unsigned e = 0; e < t.q_exponent; ++e) v *= q;
    for (std::size_t i = 0; i < t.exponents.size(); ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) v *= p[i];
    sum += v;
  }
  return sum;
}

}  // namespace

std::vector<RationalPoint> bruteforce_intrinsic(const std::vector<Polynomial>& equations, const Integer& T,
                                                const Box& box, std::uint64_t budget) {
  const auto d = static_cast<unsigned>(box.dim());
  if (d < 1) throw InvalidArgument("bruteforce_intrinsic needs a box of dimension >= 1");
  std::vector<RationalPoint> out;
  if (T < 1 || box.empty()) return out;
  if (T > 10'000'000) throw InvalidArgument("bruteforce_intrinsic is limited to T <= 10^7");
  const long long t_max = T.convert_to<long long>();

  double magnitude = 1;
  for (unsigned i = 0; i < d; ++i)
    magnitude = std::max({magnitude, std::abs(to_double(box.lo(i))), std::abs(to_double(box.hi(i)))});
  magnitude *= static_cast<double>(t_max);

  std::vector<SmallEquation> eqs;
  for (const auto& e : equations) {
    if (e.variables() != d) throw InvalidArgument("equation has the wrong number of variables");
    const unsigned deg = e.degree();
    const Integer scale = coefficient_scale({&e});
    SmallEquation se;
    double bound = 0;
    for (const auto& [alpha, c] : e.terms()) {
      const Integer coef = numerator(c * scale);
      if (abs(coef) > Integer(1LL << 40)) throw InvalidArgument("equation coefficient too large for brute force");
      SmallTerm t{alpha.exponents, deg - alpha.degree(), coef.convert_to<long long>()};
      for (unsigned i = 0; i < d; ++i) {
        if (alpha[i]) {
          se.last_variable = std::max(se.last_variable, i);
          se.constant = false;
        }
      }
      bound += std::abs(static_cast<double>(t.coefficient)) * std::pow(magnitude, deg);
      se.terms.push_back(std::move(t));
    }
    if (bound > 1e36) throw InvalidArgument("brute-force search values would overflow 128 bits");
    if (se.constant && !se.terms.empty()) return out;  // nonzero constant equation
    if (!se.terms.empty()) eqs.push_back(std::move(se));
  }
  std::vector<std::vector<const SmallEquation*>> at_level(d);
  for (const auto& e : eqs) at_level[e.last_variable].push_back(&e);

  std::uint64_t nodes = 0;
  std::vector<long long> p(d, 0);
  for (long long q = 1; q <= t_max; ++q) {
    std::vector<long long> lo(d), hi(d);
    bool empty = false;
    for (unsigned i = 0; i < d; ++i) {
      lo[i] = ceil(box.lo(i) * q).convert_to<long long>();
      hi[i] = floor(box.hi(i) * q).convert_to<long long>();
      if (hi[i] < lo[i]) empty = true;
    }
    if (empty) continue;
    // Iterative depth-first search over numerators p_0, ..., p_{d-1}.
    unsigned level = 0;
    p[0] = lo[0] - 1;
    for (;;) {
      if (++p[level] > hi[level]) {
        if (level == 0) break;
        --level;
        continue;
      }
      if (++nodes > budget) throw BudgetExceeded("brute-force search exceeded the node budget");
      bool ok = true;
      for (const auto* e : at_level[level]) {
        if (evaluate_small(*e, p, q) != 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (level + 1 < d) {
        ++level;
        p[level] = lo[level] - 1;
        continue;
      }
      long long g = q;
      for (unsigned i = 0; i < d && g != 1; ++i) g = std::gcd(g, p[i]);
      if (g != 1) continue;
      IntegerVector num(d);
      for (unsigned i = 0; i < d; ++i) num(i) = p[i];
      out.emplace_back(std::move(num), Integer(q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace intrinsic
