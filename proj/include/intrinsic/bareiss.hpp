#pragma once

// Fraction-free (Bareiss) elimination over Z, and exact rank, determinant
// and kernel routines for integer or rational Eigen matrices.
//
// Rational inputs are first scaled row by row to integer rows (rank is
// unchanged, the determinant picks up the product of the row scales), so the
// elimination itself only ever performs exact integer divisions. Pivots are
// the first nonzero entry of the current column, which keeps every result
// reproducible.

#include "intrinsic/rational.hpp"

#include <type_traits>
#include <utility>
#include <vector>

namespace intrinsic {

struct Echelon {
  IntegerMatrix reduced;                 // fraction-free row echelon form
  std::vector<Eigen::Index> pivot_rows;  // original row index of each pivot row
  std::vector<Eigen::Index> pivot_cols;
  int swap_sign = 1;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_cols.size()); }
};

/// In-place Bareiss elimination of an integer matrix.
inline Echelon bareiss_echelon(IntegerMatrix m) {
  Echelon out;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) order[static_cast<std::size_t>(i)] = i;

  Integer previous = 1;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (m(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) {
      m.row(pivot).swap(m.row(r));
      std::swap(order[static_cast<std::size_t>(pivot)], order[static_cast<std::size_t>(r)]);
      out.swap_sign = -out.swap_sign;
    }
    const Integer p = m(r, c);
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      const Integer factor = m(i, c);
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        Integer v = p * m(i, j) - factor * m(r, j);
        // Bareiss: every intermediate entry is a minor, so this is exact.
        mpz_divexact(v.backend().data(), v.backend().data(), previous.backend().data());
        m(i, j) = std::move(v);
      }
      m(i, c) = 0;
    }
    previous = p;
    out.pivot_cols.push_back(c);
    out.pivot_rows.push_back(order[static_cast<std::size_t>(r)]);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

/// Scales each row to a primitive-free integer row: row_i * lcm(denominators).
/// `scale` receives the product of the row multipliers.
template <typename Derived>
IntegerMatrix integer_rows(const Eigen::MatrixBase<Derived>& m, Rational* scale = nullptr) {
  using Scalar = typename Derived::Scalar;
  IntegerMatrix out(m.rows(), m.cols());
  Rational total = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      Integer l = 1;
      for (Eigen::Index j = 0; j < m.cols(); ++j) l = lcm(l, denominator(m(i, j)));
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out(i, j) = numerator(m(i, j)) * (l / denominator(m(i, j)));
      }
      total *= l;
    } else {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Integer(m(i, j));
    }
  }
  if (scale) *scale = total;
  return out;
}

template <typename Derived>
Eigen::Index exact_rank(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return bareiss_echelon(integer_rows(m)).rank();
}

template <typename Derived>
Rational exact_det(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("exact_det needs a square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  Rational scale;
  Echelon e = bareiss_echelon(integer_rows(m, &scale));
  if (e.rank() < n) return 0;
  Rational det(e.reduced(n - 1, n - 1));
  if (e.swap_sign < 0) det = -det;
  return det / scale;
}

/// Scales a rational vector to the jointly primitive integer vector on the
/// same ray whose first nonzero entry is positive.
inline IntegerVector primitive_integer_vector(const RationalVector& v) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denominator(v(i)));
  IntegerVector w(v.size());
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    w(i) = numerator(v(i)) * (l / denominator(v(i)));
    g = gcd(g, w(i));
  }
  if (g == 0) return w;
  int sign = 1;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) != 0) {
      sign = w(i) < 0 ? -1 : 1;
      break;
    }
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = sign * w(i) / g;
  return w;
}

/// Basis of {x : m x = 0}, one jointly primitive integer vector per free
/// column, ordered by free column (first free column first).
template <typename Derived>
std::vector<IntegerVector> kernel_basis(const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  RationalMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = Rational(m(i, j));

  // Reduced row echelon form over Q.
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) a.row(p).swap(a.row(r));
    const Rational inv = Rational(1) / a(r, c);
    for (Eigen::Index j = c; j < cols; ++j) a(r, j) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (Eigen::Index j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  std::vector<IntegerVector> basis;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    RationalVector x = RationalVector::Constant(cols, Rational(0));
    x(free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      x(pivots[i]) = -a(static_cast<Eigen::Index>(i), free);
    }
    basis.push_back(primitive_integer_vector(x));
  }
  return basis;
}

}  // namespace intrinsic
