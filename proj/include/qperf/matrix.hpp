#ifndef QPERF_MATRIX_HPP
#define QPERF_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qperf/field.hpp"

namespace qperf {

/* Dense exact matrix. Row-major; all arithmetic routed through a Field.
   Deterministic pivoting everywhere: first nonzero entry scanning rows top
   to bottom, columns left to right. */
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols, const Field& F)
      : rows_(rows), cols_(cols), a_(rows * cols, F.zero()) {}

  static Mat identity(std::size_t n, const Field& F);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<Scalar> row(std::size_t i) const;
  void set_row(std::size_t i, const std::vector<Scalar>& v);

 private:
  std::size_t rows_, cols_;
  std::vector<Scalar> a_;
};

Mat mat_mul(const Mat& A, const Mat& B, const Field& F);
Mat mat_add(const Mat& A, const Mat& B, const Field& F);
Mat mat_sub(const Mat& A, const Mat& B, const Field& F);
Mat mat_scale(const Mat& A, const Scalar& c, const Field& F);
Mat transpose(const Mat& A, const Field& F);
bool mat_eq(const Mat& A, const Mat& B, const Field& F);
bool mat_is_zero(const Mat& A, const Field& F);

// y = A x (x a column vector of length cols).
std::vector<Scalar> apply(const Mat& A, const std::vector<Scalar>& x, const Field& F);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<std::size_t> rref_in_place(Mat& A, const Field& F);

std::size_t rank_of(Mat A, const Field& F);

// Rows = canonical basis of the null space {x : A x = 0}.
Mat kernel_basis(const Mat& A, const Field& F);

// One solution of A x = b with free variables set to zero, if consistent.
std::optional<std::vector<Scalar>> solve(const Mat& A, const std::vector<Scalar>& b,
                                         const Field& F);

std::optional<Mat> inverse(const Mat& A, const Field& F);

/* Subspace of k^n stored as the unique RREF whose rows form a basis.
   Canonical, so equality of subspaces is row-wise equality. */
class RowSpace {
 public:
  RowSpace() : n_(0) {}
  explicit RowSpace(std::size_t n) : n_(n) {}
  static RowSpace from_rows(const Mat& rows, const Field& F);

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.rows(); }
  const Mat& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const std::vector<Scalar>& v, const Field& F) const;
  bool contains(const RowSpace& other, const Field& F) const;
  // Coordinates of v in the basis, if v lies in the space.
  std::optional<std::vector<Scalar>> coordinates(const std::vector<Scalar>& v,
                                                 const Field& F) const;

  RowSpace sum(const RowSpace& other, const Field& F) const;
  RowSpace intersect(const RowSpace& other, const Field& F) const;

 private:
  std::size_t n_;
  Mat basis_;
  std::vector<std::size_t> pivots_;
};

// det(xI - A) coefficients, constant term first. Needs char 0 or p > n.
std::vector<Scalar> char_poly(const Mat& A, const Field& F);

// Elementary divisors (nonzero, in division order) of an integer matrix.
std::vector<std::int64_t> smith_normal_form_divisors(
    std::vector<std::vector<std::int64_t>> m);

}  // namespace qperf

#endif
