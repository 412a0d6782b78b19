// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrices and the handful of factorizations the precoder
// needs. Every decomposition in the project lives here.
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace groupcast {

using cplx = std::complex<double>;

/// Tolerances shared by the factorization checks.
///
/// `residual` is an absolute bound on the max-abs entry of a residual
/// (QR reconstruction, orthonormality, nulling). `rank_rel` scales the
/// largest singular value to obtain the threshold below which a matrix is
/// treated as rank deficient.
struct Tolerances {
  double residual = 1e-10;
  double rank_rel = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  /// Builds from nested rows; all rows must have equal length.
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  CMatrix adjoint() const;
  CMatrix select_rows(std::span<const std::size_t> idx) const;
  CMatrix select_cols(std::span<const std::size_t> idx) const;
  /// Square submatrix at rows/cols `idx`, in the order given.
  CMatrix principal_submatrix(std::span<const std::size_t> idx) const;

  double max_abs() const;
  double frobenius_norm_sq() const;
  bool all_finite() const;

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(cplx s, const CMatrix& a);
  friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Max-abs entry of a - b. Dimensions must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// Max-abs entry of a - b divided by max(1, max_abs(b)).
double max_rel_diff(const CMatrix& a, const CMatrix& b);

struct QrFactors {
  CMatrix q;  // n x g, orthonormal columns
  CMatrix r;  // g x g, upper triangular, positive real diagonal
};

/// Thin QR of a full-column-rank n x g matrix with diag(R) real and
/// positive, which makes the factorization unique. Householder based.
/// Throws RankDeficient when the smallest singular value of `f` is at or
/// below tol.rank_rel times the largest one.
QrFactors qr_positive(const CMatrix& f, const Tolerances& tol = kDefaultTolerances);

/// Upper-triangular R with positive diagonal such that R^H R = m.
/// Throws NotPositiveDefinite on a non-positive pivot or when `m` is not
/// Hermitian to within tol.residual (scaled by max(1, max_abs(m))).
CMatrix cholesky_upper(const CMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Inverse of a Hermitian positive definite matrix through its Cholesky
/// factor. The result is exactly Hermitian.
CMatrix hermitian_inverse(const CMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Inverse of an upper-triangular matrix with nonzero diagonal.
CMatrix upper_triangular_inverse(const CMatrix& r);

/// Singular values in nonincreasing order, min(rows, cols) of them.
/// One-sided Jacobi.
std::vector<double> singular_values(const CMatrix& m);

}  // namespace groupcast
