#pragma once

#include <compare>
#include <string>
#include <vector>

namespace intrinsic {

/// Exponent vector alpha in N^k with |alpha| = sum of exponents.
struct MultiIndex {
  std::vector<unsigned> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> e) : exponents(std::move(e)) {}
  static MultiIndex zero(unsigned k) { return MultiIndex(std::vector<unsigned>(k, 0)); }
  static MultiIndex unit(unsigned k, unsigned i);

  unsigned size() const { return static_cast<unsigned>(exponents.size()); }
  unsigned degree() const;
  unsigned operator[](unsigned i) const { return exponents[i]; }

  MultiIndex operator+(const MultiIndex& other) const;
  bool operator==(const MultiIndex&) const = default;
};

/// Graded order: lower degree first; within a degree, exponent vectors in
/// descending lexicographic order, so (1,0) < (0,1) and t1^2 < t1 t2 < t2^2.
std::strong_ordering graded_compare(const MultiIndex& a, const MultiIndex& b);

struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return graded_compare(a, b) < 0;
  }
};

/// All alpha in N^k with |alpha| = degree, in graded order.
std::vector<MultiIndex> multi_indices_of_degree(unsigned k, unsigned degree);

/// All alpha with min_degree <= |alpha| <= max_degree, in graded order.
std::vector<MultiIndex> multi_indices_up_to(unsigned k, unsigned max_degree, unsigned min_degree = 0);

std::string to_string(const MultiIndex& alpha);

}  // namespace intrinsic
