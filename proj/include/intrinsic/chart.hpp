#pragma once

// Parametrized manifold pieces Psi: U -> M in R^d with exact evaluation,
// symbolic partial derivatives, nondegeneracy order, and implicit equations
// certifying membership in M.

#include "intrinsic/multi_index.hpp"
#include "intrinsic/polynomial.hpp"
#include "intrinsic/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace intrinsic {

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class PoleHit : public Error {
 public:
  using Error::Error;
};

/// Closed axis-aligned box prod [lo_i, hi_i].
struct Box {
  RationalVector lo;
  RationalVector hi;

  static Box cube(Eigen::Index dim, const Rational& a, const Rational& b);
  /// Max-norm ball B(center, radius).
  static Box ball(const RationalVector& center, const Rational& radius);

  Eigen::Index dim() const { return lo.size(); }
  bool empty() const;
  bool contains(const RationalVector& x) const;
  bool contains(const RationalPoint& x) const;
  bool contains(const Box& other) const;
  Box intersect(const Box& other) const;
  Box expanded(const Rational& r) const;
};

/// Parses "a..b" (applied to every axis) or "a..b,c..d,...".
Box parse_box(std::string_view text, Eigen::Index dim);
std::string to_string(const Box& b);

using HeightBound = std::function<Integer(const Integer&)>;

class Chart {
 public:
  Chart() = default;
  /// Coordinates numerators[i] / denominator in k parameters.
  Chart(std::string name, unsigned k, std::vector<Polynomial> numerators, Polynomial denominator, Box domain);

  const std::string& name() const { return name_; }
  unsigned k() const { return k_; }
  unsigned d() const { return static_cast<unsigned>(numerators_.size()); }
  const Box& domain() const { return domain_; }
  const std::vector<Polynomial>& numerators() const { return numerators_; }
  const Polynomial& denominator() const { return denominator_; }
  RationalFunction coordinate(unsigned i) const { return {numerators_[i], denominator_}; }
  bool is_polynomial() const { return denominator_.degree() == 0; }
  /// Largest total degree of a coordinate numerator.
  unsigned degree() const;

  const std::vector<Polynomial>& implicit_equations() const { return implicit_eqs_; }
  /// Parameter denominator bound Q(T): every intrinsic rational of height
  /// <= T with parameter in the domain has a parameter of denominator <= Q(T).
  Integer param_height_bound(const Integer& T) const { return height_bound_(T); }
  /// n > 0 when H(Psi(r)) = H(r)^n for every rational parameter r.
  unsigned height_power() const { return height_power_; }
  /// True when the first k coordinates are the parameters, so the ambient
  /// max-norm distance dominates the parameter distance.
  bool dominates_parameter() const { return dominates_parameter_; }

  Chart& with_implicit_equations(std::vector<Polynomial> eqs);
  Chart& with_height_bound(HeightBound bound, unsigned height_power = 0);
  Chart& with_dominates_parameter(bool value);
  /// Same parametrization on another parameter box.
  Chart with_domain(Box domain) const;

  /// Exact image; throws OutsideDomain or PoleHit.
  RationalVector image(const RationalVector& t) const;
  /// Image without the domain check (still throws PoleHit).
  RationalVector image_unchecked(const RationalVector& t) const;
  RationalPoint evaluate(const RationalVector& t) const { return reduce(image(t)); }
  /// Interval enclosure of the image of a parameter box.
  std::vector<RationalInterval> image_enclosure(const std::vector<RationalInterval>& t) const;
  void image(std::span<const double> t, std::span<double> out) const;

  /// True when every implicit equation vanishes at x.
  bool satisfies_equations(const RationalVector& x) const;

 private:
  std::string name_;
  unsigned k_ = 0;
  std::vector<Polynomial> numerators_;
  Polynomial denominator_;
  Box domain_;
  std::vector<Polynomial> implicit_eqs_;
  HeightBound height_bound_;
  unsigned height_power_ = 0;
  bool dominates_parameter_ = false;
};

/// One or more charts covering a manifold, sharing implicit equations.
struct Atlas {
  std::string spec;
  std::vector<Chart> charts;

  const Chart& primary() const { return charts.front(); }
  unsigned k() const { return primary().k(); }
  unsigned d() const { return primary().d(); }
  const std::vector<Polynomial>& implicit_equations() const { return primary().implicit_equations(); }
};

/// Psi_{k,n}(t) = (t^alpha) for 0 < |alpha| <= n in graded order.
Chart veronese_chart(unsigned k, unsigned n);
/// t -> (t, t^n).
Chart curve_cn(unsigned n);
/// Stereographic chart of S^{d-1} with t = 0 at (0, ..., 0, 1).
Chart sphere_chart(unsigned d);
/// Pair of stereographic charts (north then south) covering S^{d-1}.
Atlas sphere_atlas(unsigned d);
/// Polynomial chart on [-1, 1]^k with no implicit equations; parameters
/// are swept up to the ambient height bound.
Chart polynomial_chart(std::string name, unsigned k, std::vector<Polynomial> coordinates);

/// Registry: "veronese:k,n", "cn:n", "sphere:d".
Atlas atlas_from_spec(std::string_view spec);
std::vector<std::string> builtin_chart_specs();

/// d-th partial derivatives of the coordinate functions.
struct DerivativeMap {
  MultiIndex alpha;
  std::vector<RationalFunction> coordinates;

  RationalVector at(const RationalVector& t) const;
};

DerivativeMap partial(const Chart& chart, const MultiIndex& alpha);

struct TangentData {
  RationalVector point;
  unsigned order = 0;
  RationalMatrix spanning_vectors;  // one row per alpha with 0 < |alpha| <= order
  Eigen::Index rank = 0;
};

TangentData tangent_space(const Chart& chart, const RationalVector& t, unsigned order);

struct NondegeneracyOrder {
  std::optional<unsigned> order;  // empty means NotReached
  Eigen::Index terminal_rank = 0;
  std::vector<Eigen::Index> ranks;  // ranks[j-1] = rank of the order-j tangent space
};

NondegeneracyOrder nondegeneracy_order(const Chart& chart, const RationalVector& t, unsigned j_max);

}  // namespace intrinsic
