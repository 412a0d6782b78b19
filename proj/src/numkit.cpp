// SPDX-License-Identifier: Apache-2.0
#include "groupcast/numkit.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "groupcast/errors.hpp"

namespace groupcast {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw BadDimensions("entry count " + std::to_string(data_.size()) + " does not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<cplx> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw BadDimensions("ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return CMatrix(r, c, std::move(entries));
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::select_rows(std::span<const std::size_t> idx) const {
  CMatrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    assert(idx[i] < rows_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[i] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
  }
  return out;
}

CMatrix CMatrix::select_cols(std::span<const std::size_t> idx) const {
  CMatrix out(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
  return out;
}

CMatrix CMatrix::principal_submatrix(std::span<const std::size_t> idx) const {
  CMatrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(idx[i], idx[j]);
  return out;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double CMatrix::frobenius_norm_sq() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return s;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw BadDimensions("product of " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                        " and " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    cplx* orow = &out.data_[i * b.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a.data_[i * a.cols_ + k];
      if (aik == cplx{}) continue;
      const cplx* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw BadDimensions("sum of mismatched shapes");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw BadDimensions("difference of mismatched shapes");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

CMatrix operator*(cplx s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& z : out.data_) z *= s;
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

double max_rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

namespace {

cplx unit_phase(cplx z) {
  const double m = std::abs(z);
  return m == 0.0 ? cplx{1.0, 0.0} : z / m;
}

}  // namespace

QrFactors qr_positive(const CMatrix& f, const Tolerances& tol) {
  const std::size_t n = f.rows();
  const std::size_t g = f.cols();
  if (g == 0 || n < g) {
    throw RankDeficient("QR needs rows >= cols >= 1, got " + std::to_string(n) + "x" +
                        std::to_string(g));
  }

  CMatrix a = f;
  std::vector<std::vector<cplx>> reflectors(g);

  for (std::size_t k = 0; k < g; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < n; ++i) norm_sq += std::norm(a(i, k));
    const double norm = std::sqrt(norm_sq);
    auto& v = reflectors[k];
    v.assign(n - k, cplx{});
    if (norm == 0.0) continue;

    const cplx alpha = -unit_phase(a(k, k)) * norm;
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    double vnorm_sq = 0.0;
    for (const auto& z : v) vnorm_sq += std::norm(z);
    if (vnorm_sq == 0.0) continue;
    const double vnorm = std::sqrt(vnorm_sq);
    for (auto& z : v) z /= vnorm;

    // A[k:, k:] -= 2 v (v^H A[k:, k:])
    for (std::size_t j = k; j < g; ++j) {
      cplx dot{};
      for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i - k]) * a(i, j);
      dot *= 2.0;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= v[i - k] * dot;
    }
  }

  CMatrix r(g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i; j < g; ++j) r(i, j) = a(i, j);

  CMatrix q(n, g);
  for (std::size_t j = 0; j < g; ++j) q(j, j) = 1.0;
  for (std::size_t kk = g; kk-- > 0;) {
    const auto& v = reflectors[kk];
    for (std::size_t j = 0; j < g; ++j) {
      cplx dot{};
      for (std::size_t i = kk; i < n; ++i) dot += std::conj(v[i - kk]) * q(i, j);
      dot *= 2.0;
      for (std::size_t i = kk; i < n; ++i) q(i, j) -= v[i - kk] * dot;
    }
  }

  // Rotate each (column of Q, row of R) pair so that diag(R) is real positive.
  for (std::size_t j = 0; j < g; ++j) {
    const cplx phase = unit_phase(r(j, j));
    for (std::size_t c = j; c < g; ++c) r(j, c) *= std::conj(phase);
    for (std::size_t i = 0; i < n; ++i) q(i, j) *= phase;
    r(j, j) = cplx{std::abs(r(j, j)), 0.0};
  }

  const auto sv = singular_values(r);
  if (sv.front() == 0.0 || sv.back() <= tol.rank_rel * sv.front()) {
    throw RankDeficient("smallest singular value " + std::to_string(sv.back()) +
                        " at or below rank tolerance");
  }
  return {std::move(q), std::move(r)};
}

CMatrix cholesky_upper(const CMatrix& m, const Tolerances& tol) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw NotPositiveDefinite("matrix is not square");

  const double herm_tol = tol.residual * std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > herm_tol) {
        throw NotPositiveDefinite("matrix is not Hermitian");
      }
    }
  }

  CMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(r(k, j));
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    }
    const double rjj = std::sqrt(pivot);
    r(j, j) = rjj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = m(j, i);
      for (std::size_t k = 0; k < j; ++k) s -= std::conj(r(k, j)) * r(k, i);
      r(j, i) = s / rjj;
    }
  }
  return r;
}

CMatrix upper_triangular_inverse(const CMatrix& r) {
  const std::size_t n = r.rows();
  CMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / r(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      cplx s{};
      for (std::size_t k = ii + 1; k <= j; ++k) s += r(ii, k) * inv(k, j);
      inv(ii, j) = -s / r(ii, ii);
    }
  }
  return inv;
}

CMatrix hermitian_inverse(const CMatrix& m, const Tolerances& tol) {
  const CMatrix r = cholesky_upper(m, tol);
  const CMatrix rinv = upper_triangular_inverse(r);
  // m^{-1} = R^{-1} R^{-H}; fill the upper triangle and mirror it.
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx s{};
      for (std::size_t k = j; k < n; ++k) s += rinv(i, k) * std::conj(rinv(j, k));
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
    out(i, i) = cplx{out(i, i).real(), 0.0};
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  const bool tall = m.rows() >= m.cols();
  const CMatrix a = tall ? m : m.adjoint();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();

  // Column-major working copy.
  std::vector<std::vector<cplx>> col(cols, std::vector<cplx>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) col[j][i] = a(i, j);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(col[p][i]);
          beta += std::norm(col[q][i]);
          gamma += std::conj(col[p][i]) * col[q][i];
        }
        const double gabs = std::abs(gamma);
        if (gabs == 0.0 || gabs <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase_conj = std::conj(gamma) / gabs;
        const double zeta = (beta - alpha) / (2.0 * gabs);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const cplx ap = col[p][i];
          const cplx aq = col[q][i] * phase_conj;
          col[p][i] = c * ap - s * aq;
          col[q][i] = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (const auto& z : col[j]) s += std::norm(z);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace groupcast
