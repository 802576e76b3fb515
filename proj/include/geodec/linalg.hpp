#pragma once

/// \file linalg.hpp
/// Dense matrices over Rational or double. Exact determinants use
/// fraction-free (Bareiss) elimination on an integer-scaled copy; solves use
/// the same fraction-free forward sweep on the augmented system.

#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace geodec {

template <class Scalar>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Scalar(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<Scalar> row(std::size_t i) const { return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_}; }
  std::vector<Scalar> col(std::size_t j) const {
    std::vector<Scalar> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    DenseMatrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t l = 0; l < x.cols_; ++l) {
        const Scalar& xil = x(i, l);
        if (xil == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += xil * y(l, j);
      }
    return z;
  }

  std::vector<Scalar> operator*(const std::vector<Scalar>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector product: shape mismatch");
    std::vector<Scalar> out(rows_, Scalar(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  bool operator==(const DenseMatrix&) const = default;

  bool is_identity() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> a_;
};

using RationalMatrix = DenseMatrix<Rational>;

namespace detail {

/// Scales each row of a rational matrix by the lcm of its denominators.
/// Returns the integer matrix and the product of the scale factors.
inline std::vector<std::vector<Integer>> integer_rows(const RationalMatrix& a, Integer& scale_product) {
  std::vector<std::vector<Integer>> out(a.rows(), std::vector<Integer>(a.cols()));
  scale_product = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    scale_product *= l;
  }
  return out;
}

}  // namespace detail

/// Exact determinant by Bareiss elimination.
inline Rational determinant(const RationalMatrix& a) {
  if (!a.square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer scale;
  auto m = detail::integer_rows(a, scale);
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // m_ij = (m_kk m_ij - m_ik m_kj) / prev, exact
        m[i][j] *= m[k][k];
        m[i][j] -= m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Rational det(m[n - 1][n - 1] * sign, scale);
  det.canonicalize();
  return det;
}

/// Solves A X = B exactly; throws std::domain_error when A is singular.
inline RationalMatrix solve(const RationalMatrix& a, const RationalMatrix& b) {
  if (!a.square() || b.rows() != a.rows()) throw std::invalid_argument("solve: shape mismatch");
  const std::size_t n = a.rows(), nrhs = b.cols();
  // Augmented integer system [A | B], each row scaled to integers.
  RationalMatrix aug(n, n + nrhs);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < nrhs; ++j) aug(i, n + j) = b(i, j);
  }
  Integer unused;
  auto m = detail::integer_rows(aug, unused);
  const std::size_t w = n + nrhs;
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) throw std::domain_error("solve: singular matrix");
      std::swap(m[k], m[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) {
        // row i unchanged up to the exact factor m_kk / prev
        for (std::size_t j = k + 1; j < w; ++j) {
          m[i][j] *= m[k][k];
          mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
        }
        continue;
      }
      for (std::size_t j = k + 1; j < w; ++j) {
        m[i][j] *= m[k][k];
        m[i][j] -= m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  RationalMatrix x(n, nrhs);
  for (std::size_t c = 0; c < nrhs; ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      Rational s = Rational(m[ii][n + c]);
      for (std::size_t j = ii + 1; j < n; ++j)
        if (m[ii][j] != 0) s -= Rational(m[ii][j]) * x(j, c);
      x(ii, c) = s / Rational(m[ii][ii]);
    }
  }
  return x;
}

inline RationalMatrix inverse(const RationalMatrix& a) { return solve(a, RationalMatrix::identity(a.rows())); }

/// Gauss-Jordan inverse for small matrices over any field-like scalar
/// (partial pivoting by magnitude for floating point). Returns nullopt if singular.
template <class Scalar>
std::optional<DenseMatrix<Scalar>> small_inverse(DenseMatrix<Scalar> a) {
  if (!a.square()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  auto inv = DenseMatrix<Scalar>::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = n;
    if constexpr (std::is_floating_point_v<Scalar>) {
      double best = 0;
      for (std::size_t i = k; i < n; ++i)
        if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), p = i;
    } else {
      for (std::size_t i = k; i < n && p == n; ++i)
        if (a(i, k) != 0) p = i;
    }
    if (p == n || a(p, k) == 0) return std::nullopt;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    Scalar piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Scalar f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// Reduced row echelon form (exact). Returns the pivot columns.
inline std::vector<std::size_t> rref(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t p = row;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(p, j));
    Rational piv = a(row, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) /= piv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

/// Rank via floating-point LU with partial pivoting; used only for the
/// large float smoke tests. Rows are scaled to unit max-norm first (rank is
/// unchanged), then pivots below tol count as zero.
inline std::size_t float_rank(DenseMatrix<double> a, double tol = 1e-10) {
  const std::size_t n = a.rows(), m = a.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s = std::max(s, std::abs(a(i, j)));
    if (s > 0)
      for (std::size_t j = 0; j < m; ++j) a(i, j) /= s;
  }
  const double scale = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m && rank < n; ++c) {
    std::size_t p = rank;
    double best = 0;
    for (std::size_t i = rank; i < n; ++i)
      if (std::abs(a(i, c)) > best) best = std::abs(a(i, c)), p = i;
    if (best <= tol * scale) continue;
    for (std::size_t j = 0; j < m; ++j) std::swap(a(rank, j), a(p, j));
    for (std::size_t i = rank + 1; i < n; ++i) {
      double f = a(i, c) / a(rank, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < m; ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace geodec
