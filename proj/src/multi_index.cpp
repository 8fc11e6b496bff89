#include "intrinsic/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace intrinsic {

MultiIndex MultiIndex::unit(unsigned k, unsigned i) {
  MultiIndex m = zero(k);
  m.exponents.at(i) = 1;
  return m;
}

unsigned MultiIndex::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0u);
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size() != other.size()) throw std::invalid_argument("multi-index size mismatch");
  MultiIndex r = *this;
  for (unsigned i = 0; i < size(); ++i) r.exponents[i] += other.exponents[i];
  return r;
}

std::strong_ordering graded_compare(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  // Larger leading exponent comes first.
  return b.exponents <=> a.exponents;
}

namespace {

void fill_degree(unsigned k, unsigned position, unsigned remaining, std::vector<unsigned>& current,
                 std::vector<MultiIndex>& out) {
  if (position + 1 == k) {
    current[position] = remaining;
    out.emplace_back(current);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    current[position] = e;
    fill_degree(k, position + 1, remaining - e, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_degree(unsigned k, unsigned degree) {
  std::vector<MultiIndex> out;
  if (k == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  std::vector<unsigned> current(k, 0);
  fill_degree(k, 0, degree, current, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(unsigned k, unsigned max_degree, unsigned min_degree) {
  std::vector<MultiIndex> out;
  for (unsigned j = min_degree; j <= max_degree; ++j) {
    auto block = multi_indices_of_degree(k, j);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::string to_string(const MultiIndex& alpha) {
  std::string s = "(";
  for (unsigned i = 0; i < alpha.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alpha[i]);
  }
  return s + ")";
}

}  // namespace intrinsic
