#pragma once

// Intrinsic simplex lemma: the intrinsic rationals of height
// q <= kappa rho^(-1/c(k,d)) with parameter in a ball B(s, rho) lie on one
// affine hyperplane. Collection, exact containment test, seeded sweeps and
// empirical calibration of kappa.

#include "intrinsic/chart.hpp"
#include "intrinsic/dirichlet.hpp"
#include "intrinsic/enumerate.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace intrinsic {

class SimplexViolation : public Error {
 public:
  using Error::Error;
};

/// Affine functional w . x = b with (w, b) a jointly primitive integer vector.
struct AffineFunctional {
  IntegerVector w;
  Integer b;

  Rational value(const RationalVector& x) const;  // w . x - b
  bool vanishes_at(const RationalPoint& p) const;
  /// The functional as a degree-1 polynomial in d variables.
  Polynomial to_polynomial() const;
};

std::string to_string(const AffineFunctional& f);

struct SimplexQuery {
  RationalVector center;
  Rational radius;
  Rational kappa;
};

/// Largest integer h with h <= kappa rho^(-N/(d+1)), evaluated exactly as
/// floor((kappa^(d+1) / rho^N)^(1/(d+1))).
Integer simplex_height_bound(const DirichletConstants& constants, const Rational& rho, const Rational& kappa);

/// S_{s,rho}: intrinsic rationals with parameter in B(s, rho) ∩ domain and
/// height at most simplex_height_bound.
std::vector<IntrinsicRational> collect_S(const Chart& chart, const SimplexQuery& query,
                                         std::uint64_t budget = kDefaultBudget);

/// Data for a set of points not contained in any affine hyperplane.
struct SimplexFailure {
  std::vector<RationalPoint> simplex;  // d + 1 affinely independent points
  Rational determinant;                // det [1 ... 1; r_1 ... r_{d+1}]
  Integer scaled_determinant;          // determinant * prod q_i
  bool integral = false;               // scaled_determinant was an integer
  bool lower_bound_holds = false;      // |D| >= 1 / prod q_i
};

struct SimplexReport {
  std::vector<RationalPoint> points;
  Eigen::Index rank = 0;                        // rank of the columns (1, r_i)
  std::optional<AffineFunctional> hyperplane;   // empty when unconstrained or failed
  bool passed = true;
  std::optional<SimplexFailure> failure;
};

/// Exact test whether the points lie on a common affine hyperplane of R^d.
SimplexReport hyperplane_containment(const std::vector<RationalPoint>& points, unsigned d);

struct SweepOptions {
  std::size_t samples = 1000;
  Rational rho_min = Rational(1, 1 << 20);
  Rational rho_max = 1;
  Rational kappa = Rational(1, 10);
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  unsigned workers = 1;
};

struct SweepRecord {
  std::size_t index = 0;
  RationalVector center;
  Rational radius;
  Rational kappa;
  Integer height_bound;
  std::size_t size = 0;
  Eigen::Index rank = 0;
  bool passed = true;
  std::optional<AffineFunctional> functional;
  std::optional<SimplexFailure> failure;
};

struct SweepReport {
  std::vector<SweepRecord> records;
  std::size_t passed = 0;
  double pass_rate = 1;
  std::size_t worst = 0;  // index of the record with the largest (rank, |S|)
  std::vector<std::size_t> failures;
};

/// Deterministic sample plan: centers from a shifted Halton sequence snapped
/// to dyadic rationals, radii 2^-j with j uniform over the dyadic range.
std::vector<SimplexQuery> sweep_plan(const Chart& chart, const SweepOptions& options);

SweepReport simplex_sweep(const Chart& chart, const SweepOptions& options);

struct KappaCalibration {
  Rational kappa;              // largest grid value with a full pass (0 if none)
  unsigned precision = 0;      // grid step is 2^-precision
  bool double_fails = false;   // whether 2 kappa fails on the same samples
  bool capped = false;         // search stopped at kappa_max without failing
  std::size_t evaluations = 0;
};

/// Monotone search over kappa = m 2^-precision, m >= 1, up to kappa_max.
KappaCalibration kappa_calibrate(const Chart& chart, const SweepOptions& options, unsigned precision,
                                 const Rational& kappa_max = 64);

}  // namespace intrinsic
