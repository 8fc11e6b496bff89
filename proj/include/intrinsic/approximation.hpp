#pragma once

// Intrinsic approximation of a target point of the manifold: best
// approximation records, exponent estimates, finite-scale badly / very well
// approximable tests, and uniform Dirichlet constants over target samples.

#include "intrinsic/chart.hpp"
#include "intrinsic/enumerate.hpp"
#include "intrinsic/univariate.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace intrinsic {

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Real algebraic number: the unique root of `polynomial` in `isolating`.
struct AlgebraicNumber {
  UPoly polynomial;
  RationalInterval isolating;

  AlgebraicNumber(UPoly p, RationalInterval iv);
  /// Enclosure of width at most `width` (a point when the root is rational).
  RationalInterval enclosure(const Rational& width) const;
  double approx() const;
};

using TargetCoordinate = std::variant<Rational, AlgebraicNumber>;

/// A parameter vector in chart coordinates whose entries are rational or
/// real algebraic.
struct TargetPoint {
  std::string spec;
  std::vector<TargetCoordinate> parameter;

  unsigned k() const { return static_cast<unsigned>(parameter.size()); }
  bool is_rational() const;
  std::vector<RationalInterval> enclosure(const Rational& width) const;
  std::vector<double> approx() const;
};

/// Coordinates separated by ';'. Each is a rational ("1/3") or
/// "polynomial,[a,b]" with the interval isolating one root.
TargetPoint parse_target(std::string_view text);
TargetPoint rational_target(const RationalVector& t);

/// Quadratic irrationals a x^2 + b x + c with small coefficients, one per
/// coordinate, inside the open window. Seeded and deduplicated.
std::vector<TargetPoint> sample_quadratic_targets(std::size_t count, std::uint64_t seed, const Box& window);

/// Seeded uniform rational parameters with denominators up to max_den.
std::vector<TargetPoint> sample_rational_targets(std::size_t count, std::uint64_t seed, const Box& window,
                                                 long long max_den);

struct ApproximationRecord {
  Integer height;
  RationalInterval distance;  // exact (a point) for rational targets
  RationalPoint witness;
  RationalVector parameter;
  unsigned chart = 0;
};

struct UnresolvedPair {
  RationalPoint first;
  RationalPoint second;
};

struct RecordSet {
  TargetPoint target;
  Integer T;
  std::vector<ApproximationRecord> records;
  std::vector<UnresolvedPair> unresolved;
  Rational enclosure_width;  // final width of the target parameter enclosure
  Box search_domain;         // parameter box that was searched
  bool pruned = false;       // parameter-window search (true) or cached enumeration
};

struct RecordOptions {
  Rational precision = Rational(Integer(1), ipow(Integer(2), 64));
  Rational min_precision = Rational(Integer(1), ipow(Integer(2), 256));
  bool strict = false;  // throw PrecisionExhausted instead of listing ties
  std::uint64_t budget = kDefaultBudget;
};

/// Best approximation search for one atlas and height bound; reusable across
/// targets (the enumeration cache is built on first use and then shared).
class RecordSearch {
 public:
  RecordSearch(Atlas atlas, Integer T, RecordOptions options = {});
  ~RecordSearch();
  RecordSearch(RecordSearch&&) noexcept;

  /// Builds the shared enumeration cache (needed by charts that do not admit
  /// the parameter-window search). Not thread-safe; call before run() is used
  /// from several threads.
  void prepare();
  RecordSet run(const TargetPoint& target) const;

  const Atlas& atlas() const { return atlas_; }
  const Integer& T() const { return T_; }
  bool uses_parameter_window() const;

 private:
  struct Cache;
  Atlas atlas_;
  Integer T_;
  RecordOptions options_;
  std::unique_ptr<Cache> cache_;
};

RecordSet best_approximations(const Atlas& atlas, const TargetPoint& target, const Integer& T,
                              const RecordOptions& options = {});

/// Minimal distance at each dyadic height 2^j <= T (empty before the first record).
std::vector<std::pair<Integer, std::optional<RationalInterval>>> dyadic_profile(
    const std::vector<ApproximationRecord>& records, const Integer& T);

/// Certified enclosure of h^c with relative width about 2^-bits.
RationalInterval power_enclosure(const Integer& h, const Rational& c, unsigned bits = 64);

struct ExponentEstimate {
  double slope = 0;       // least squares of log(distance) on -log(height), all records
  double tail_slope = 0;  // same fit on the tail window
  double tail_inf = 0;    // min of log(1/distance)/log(height) over the tail
  double tail_sup = 0;
  Rational c_reference;
  std::size_t used = 0;
  std::size_t tail_used = 0;
  double tail_fraction = 0.5;
};

/// Uses records with positive distance and height > 1; the tail is the last
/// `tail_fraction` of them by log-height. Throws InsufficientData with fewer
/// than two usable records.
ExponentEstimate exponent_estimate(const std::vector<ApproximationRecord>& records, const Rational& c_reference,
                                   double tail_fraction = 0.5);

struct WindowInfimum {
  int window = 0;  // heights in (2^(window-1), 2^window]
  RationalInterval infimum;
};

struct BaResult {
  Rational c;
  RationalInterval infimum;       // over all records of distance * height^c
  std::vector<WindowInfimum> windows;
  std::optional<RationalInterval> last_window;
  std::optional<RationalInterval> earlier_windows;
  Rational threshold = Rational(1, 2);
  bool verdict = false;  // BA at scale T
  std::string label;
};

/// Badly approximable at scale: the infimum is certified positive and the
/// last dyadic window's infimum is at least threshold times the infimum over
/// the earlier windows.
BaResult ba_test(const RecordSet& set, const Rational& c,
                 const Rational& threshold = Rational(1, 2));

struct VwaResult {
  Rational c;
  bool degenerate = false;  // some record has distance 0
  std::vector<std::pair<Rational, std::size_t>> counts;  // epsilon -> tail records with d <= h^-(c+eps)
  std::optional<Rational> supported_epsilon;             // largest epsilon with count >= min_count
  std::size_t min_count = 5;
  double tail_fraction = 0.25;
  bool verdict = false;
  std::string label;
};

/// epsilon ranges over {1/16, 2/16, ..., max_epsilon}; the tail is the final
/// `tail_fraction` of the log-height range.
VwaResult vwa_test(const RecordSet& set, const Rational& c, std::size_t min_count = 5,
                   double tail_fraction = 0.25, const Rational& max_epsilon = 2);

enum class Classification { BadlyApproximable, VeryWellApproximable, Neither, Inconclusive, Degenerate };
/// Combines both verdicts; simultaneous claims are reported as Inconclusive.
Classification classify(const BaResult& ba, const VwaResult& vwa);
std::string to_string(Classification c);

struct DirichletLevel {
  Integer height;             // dyadic T' = 2^j
  RationalInterval constant;  // sup over targets and dyadic h <= T'
  std::size_t witness_target = 0;
  Integer witness_height;
};

struct DirichletTestResult {
  Rational c;
  Integer T;
  std::vector<DirichletLevel> levels;
  std::size_t targets = 0;
};

/// sup over targets of sup over dyadic h <= T of (min distance at height <= h) h^c.
DirichletTestResult dirichlet_test(const Atlas& atlas, const std::vector<TargetPoint>& targets, const Rational& c,
                                   const Integer& T, const RecordOptions& options = {}, unsigned workers = 1);

/// Last `count` successive ratios constant(2T') / constant(T') (midpoints).
std::vector<double> doubling_ratios(const DirichletTestResult& result, std::size_t count);

}  // namespace intrinsic
