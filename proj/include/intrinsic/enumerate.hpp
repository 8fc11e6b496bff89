#pragma once

// Intrinsic rational points Q^d ∩ Psi(U) of bounded height, and an
// independent brute-force oracle that searches Q^d directly.

#include "intrinsic/chart.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace intrinsic {

inline constexpr std::uint64_t kDefaultBudget = 50'000'000;

struct IntrinsicRational {
  RationalPoint point;
  RationalVector parameter;
  unsigned chart = 0;  // index into the atlas
};

/// Canonical order: (height, numerators).
inline bool operator<(const IntrinsicRational& a, const IntrinsicRational& b) { return a.point < b.point; }

/// Every intrinsic rational of height <= T whose parameter lies in the chart
/// domain and whose image lies in `box` (the whole space when absent),
/// sorted and without duplicates. Throws BudgetExceeded when the parameter
/// sweep would visit more than `budget` candidates.
std::vector<IntrinsicRational> enumerate_rationals(const Chart& chart, const Integer& T,
                                                   const std::optional<Box>& box = std::nullopt,
                                                   std::uint64_t budget = kDefaultBudget);

/// Union over the charts of an atlas, deduplicated by point (the first chart
/// producing a point is recorded).
std::vector<IntrinsicRational> enumerate_rationals(const Atlas& atlas, const Integer& T,
                                                   const std::optional<Box>& box = std::nullopt,
                                                   std::uint64_t budget = kDefaultBudget);

/// Number of parameter candidates the sweep would visit (an estimate for
/// k = 1, exact up to rounding for k >= 2).
double enumeration_cost(const Chart& chart, const Integer& T, const std::optional<Box>& box = std::nullopt);

/// All jointly primitive p/q in `box` with q <= T at which every equation
/// vanishes. Equations are polynomials in d = box.dim() variables with
/// rational coefficients. Budget counts visited search nodes.
std::vector<RationalPoint> bruteforce_intrinsic(const std::vector<Polynomial>& equations, const Integer& T,
                                                const Box& box, std::uint64_t budget = kDefaultBudget);

}  // namespace intrinsic
