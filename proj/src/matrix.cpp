#include "qperf/matrix.hpp"

#include <algorithm>
#include <cstdlib>

namespace qperf {

Mat Mat::identity(std::size_t n, const Field& F) {
  Mat m(n, n, F);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = F.one();
  return m;
}

std::vector<Scalar> Mat::row(std::size_t i) const {
  return std::vector<Scalar>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void Mat::set_row(std::size_t i, const std::vector<Scalar>& v) {
  std::copy(v.begin(), v.end(), a_.begin() + i * cols_);
}

Mat mat_mul(const Mat& A, const Mat& B, const Field& F) {
  Mat C(A.rows(), B.cols(), F);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      if (F.is_zero(A.at(i, k))) continue;
      for (std::size_t j = 0; j < B.cols(); ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(A.at(i, k), B.at(k, j)));
    }
  return C;
}

Mat mat_add(const Mat& A, const Mat& B, const Field& F) {
  Mat C(A.rows(), A.cols(), F);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      C.at(i, j) = F.add(A.at(i, j), B.at(i, j));
  return C;
}

Mat mat_sub(const Mat& A, const Mat& B, const Field& F) {
  Mat C(A.rows(), A.cols(), F);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      C.at(i, j) = F.sub(A.at(i, j), B.at(i, j));
  return C;
}

Mat mat_scale(const Mat& A, const Scalar& c, const Field& F) {
  Mat C(A.rows(), A.cols(), F);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) = F.mul(A.at(i, j), c);
  return C;
}

Mat transpose(const Mat& A, const Field& F) {
  Mat C(A.cols(), A.rows(), F);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(j, i) = A.at(i, j);
  return C;
}

bool mat_eq(const Mat& A, const Mat& B, const Field& F) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!F.eq(A.at(i, j), B.at(i, j))) return false;
  return true;
}

bool mat_is_zero(const Mat& A, const Field& F) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!F.is_zero(A.at(i, j))) return false;
  return true;
}

std::vector<Scalar> apply(const Mat& A, const std::vector<Scalar>& x, const Field& F) {
  std::vector<Scalar> y(A.rows(), F.zero());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!F.is_zero(A.at(i, j))) y[i] = F.add(y[i], F.mul(A.at(i, j), x[j]));
  return y;
}

std::vector<std::size_t> rref_in_place(Mat& A, const Field& F) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t sel = A.rows();
    for (std::size_t i = r; i < A.rows(); ++i)
      if (!F.is_zero(A.at(i, c))) {
        sel = i;
        break;
      }
    if (sel == A.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A.at(sel, j), A.at(r, j));
    Scalar piv_inv = F.inv(A.at(r, c));
    for (std::size_t j = c; j < A.cols(); ++j)
      A.at(r, j) = F.mul(A.at(r, j), piv_inv);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r || F.is_zero(A.at(i, c))) continue;
      Scalar f = A.at(i, c);
      for (std::size_t j = c; j < A.cols(); ++j)
        A.at(i, j) = F.sub(A.at(i, j), F.mul(f, A.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank_of(Mat A, const Field& F) { return rref_in_place(A, F).size(); }

Mat kernel_basis(const Mat& A, const Field& F) {
  Mat R = A;
  std::vector<std::size_t> pivots = rref_in_place(R, F);
  std::vector<bool> is_pivot(A.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < A.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat K(free_cols.size(), A.cols(), F);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    K.at(k, fc) = F.one();
    for (std::size_t r = 0; r < pivots.size(); ++r)
      K.at(k, pivots[r]) = F.neg(R.at(r, fc));
  }
  return K;
}

std::optional<std::vector<Scalar>> solve(const Mat& A, const std::vector<Scalar>& b,
                                         const Field& F) {
  Mat aug(A.rows(), A.cols() + 1, F);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols()) = b[i];
  }
  std::vector<std::size_t> pivots = rref_in_place(aug, F);
  if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
  std::vector<Scalar> x(A.cols(), F.zero());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, A.cols());
  return x;
}

std::optional<Mat> inverse(const Mat& A, const Field& F) {
  if (A.rows() != A.cols()) return std::nullopt;
  std::size_t n = A.rows();
  Mat aug(n, 2 * n, F);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n + i) = F.one();
  }
  std::vector<std::size_t> pivots = rref_in_place(aug, F);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  Mat inv(n, n, F);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

RowSpace RowSpace::from_rows(const Mat& rows, const Field& F) {
  Mat R = rows;
  std::vector<std::size_t> pivots = rref_in_place(R, F);
  RowSpace s(rows.cols());
  s.basis_ = Mat(pivots.size(), rows.cols(), F);
  for (std::size_t i = 0; i < pivots.size(); ++i) s.basis_.set_row(i, R.row(i));
  s.pivots_ = pivots;
  return s;
}

bool RowSpace::contains(const std::vector<Scalar>& v, const Field& F) const {
  std::vector<Scalar> w = v;
  for (std::size_t r = 0; r < basis_.rows(); ++r) {
    const Scalar& c = w[pivots_[r]];
    if (F.is_zero(c)) continue;
    Scalar f = c;
    for (std::size_t j = 0; j < n_; ++j)
      w[j] = F.sub(w[j], F.mul(f, basis_.at(r, j)));
  }
  for (const Scalar& c : w)
    if (!F.is_zero(c)) return false;
  return true;
}

bool RowSpace::contains(const RowSpace& other, const Field& F) const {
  for (std::size_t r = 0; r < other.basis_.rows(); ++r)
    if (!contains(other.basis_.row(r), F)) return false;
  return true;
}

std::optional<std::vector<Scalar>> RowSpace::coordinates(const std::vector<Scalar>& v,
                                                         const Field& F) const {
  std::vector<Scalar> w = v;
  std::vector<Scalar> coord(basis_.rows(), F.zero());
  for (std::size_t r = 0; r < basis_.rows(); ++r) {
    const Scalar c = w[pivots_[r]];
    if (F.is_zero(c)) continue;
    coord[r] = c;
    for (std::size_t j = 0; j < n_; ++j)
      w[j] = F.sub(w[j], F.mul(c, basis_.at(r, j)));
  }
  for (const Scalar& c : w)
    if (!F.is_zero(c)) return std::nullopt;
  return coord;
}

RowSpace RowSpace::sum(const RowSpace& other, const Field& F) const {
  Mat stacked(dim() + other.dim(), n_, F);
  for (std::size_t i = 0; i < dim(); ++i) stacked.set_row(i, basis_.row(i));
  for (std::size_t i = 0; i < other.dim(); ++i)
    stacked.set_row(dim() + i, other.basis_.row(i));
  return from_rows(stacked, F);
}

RowSpace RowSpace::intersect(const RowSpace& other, const Field& F) const {
  // x U = y V  <=>  [U^T | -V^T] (x; y)^T = 0.
  std::size_t du = dim(), dv = other.dim();
  if (du == 0 || dv == 0) return RowSpace(n_);
  Mat sys(n_, du + dv, F);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < du; ++i) sys.at(j, i) = basis_.at(i, j);
    for (std::size_t i = 0; i < dv; ++i)
      sys.at(j, du + i) = F.neg(other.basis_.at(i, j));
  }
  Mat K = kernel_basis(sys, F);
  Mat vecs(K.rows(), n_, F);
  for (std::size_t k = 0; k < K.rows(); ++k)
    for (std::size_t j = 0; j < n_; ++j) {
      Scalar acc = F.zero();
      for (std::size_t i = 0; i < du; ++i)
        acc = F.add(acc, F.mul(K.at(k, i), basis_.at(i, j)));
      vecs.at(k, j) = acc;
    }
  return from_rows(vecs, F);
}

std::vector<Scalar> char_poly(const Mat& A, const Field& F) {
  // Faddeev-LeVerrier. Divides by 1..n, so needs char 0 or p > n.
  std::size_t n = A.rows();
  if (F.is_prime() && F.modulus() <= static_cast<std::int64_t>(n))
    throw FieldError("char_poly needs p > matrix size");
  std::vector<Scalar> c(n + 1, F.zero());
  c[n] = F.one();
  Mat M = Mat::identity(n, F);
  for (std::size_t k = 1; k <= n; ++k) {
    Mat AM = mat_mul(A, M, F);
    Scalar tr = F.zero();
    for (std::size_t i = 0; i < n; ++i) tr = F.add(tr, AM.at(i, i));
    Scalar ck = F.neg(F.div(tr, F.from_int(static_cast<std::int64_t>(k))));
    c[n - k] = ck;
    M = AM;
    for (std::size_t i = 0; i < n; ++i) M.at(i, i) = F.add(M.at(i, i), ck);
  }
  return c;
}

std::vector<std::int64_t> smith_normal_form_divisors(
    std::vector<std::vector<std::int64_t>> m) {
  std::vector<std::int64_t> divisors;
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    std::size_t pi = rows, pj = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 &&
            (best == 0 || std::abs(m[i][j]) < std::abs(best))) {
          best = m[i][j];
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    std::swap(m[pi], m[t]);
    for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][pj], m[i][t]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        std::int64_t q = m[i][t] / m[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) {
          std::swap(m[i], m[t]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        std::int64_t q = m[t][j] / m[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) {
          for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][j], m[i][t]);
          clean = false;
        }
      }
    }
    divisors.push_back(std::abs(m[t][t]));
    ++t;
  }
  // Enforce the divisibility chain.
  for (std::size_t i = 0; i + 1 < divisors.size(); ++i)
    for (std::size_t j = i + 1; j < divisors.size(); ++j) {
      std::int64_t a = divisors[i], b = divisors[j];
      std::int64_t g = a;
      std::int64_t h = b;
      while (h) {
        std::int64_t r = g % h;
        g = h;
        h = r;
      }
      std::int64_t l = a / g * b;
      divisors[i] = g;
      divisors[j] = l;
    }
  return divisors;
}

}  // namespace qperf
