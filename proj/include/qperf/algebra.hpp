#ifndef QPERF_ALGEBRA_HPP
#define QPERF_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qperf/matrix.hpp"
#include "qperf/quiver.hpp"

namespace qperf {

class AlgebraError : public std::runtime_error {
 public:
  explicit AlgebraError(const std::string& what) : std::runtime_error(what) {}
};

// Sorted-by-index sparse vector over the normal-form basis.
using SparseVec = std::vector<std::pair<int, Scalar>>;

struct PathNF {
  int src = -1, tgt = -1, length = 0;
  std::vector<int> arrows;  // application order: arrows[0] acts first
};

/* Finite-dimensional quotient of a path algebra by admissible length-
   homogeneous relations. The basis is the set of normal-form paths found by
   length-graded linear closure of the relation ideal; pieces, radical layers
   and all structure constants are exact over the presentation's field.

   Products follow right-to-left composition: basis_product(p, q) is p*q,
   the path q acting first (nonzero only when src(p) == tgt(q)). */
class AlgebraBasis {
 public:
  static constexpr int kDefaultNilpotencyCap = 64;

  static AlgebraBasis compute(Presentation pres,
                              int nilpotency_cap = kDefaultNilpotencyCap);

  const Presentation& presentation() const { return pres_; }
  const Field& field() const { return pres_.field; }
  int num_vertices() const { return static_cast<int>(pres_.vertices.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  int nilpotency_index() const { return nilpotency_; }
  bool connected() const { return connected_; }

  const std::vector<PathNF>& basis() const { return basis_; }
  const PathNF& path(int k) const { return basis_[k]; }
  int unit_index(int v) const { return unit_index_[v]; }

  // Basis of e_j A e_i: normal-form paths from vertex i to vertex j.
  const std::vector<int>& piece(int i, int j) const { return pieces_[i][j]; }
  int piece_dim(int i, int j) const { return static_cast<int>(pieces_[i][j].size()); }
  // Subset of piece(i, j) with path length >= minlen.
  std::vector<int> piece_radical(int i, int j, int minlen = 1) const;

  const SparseVec& basis_product(int p, int q) const {
    return mult_[static_cast<std::size_t>(p) * basis_.size() + q];
  }

  std::string path_label(int k) const;

  // Transport construction: same data with all paths reversed.
  AlgebraBasis opposite() const;
  // Index of the reversed path in the opposite algebra's basis.
  int opposite_index(int k) const { return op_index_.at(k); }

 private:
  AlgebraBasis() = default;
  void index_pieces();
  void fill_opposite_map();

  Presentation pres_;
  std::vector<PathNF> basis_;
  std::vector<int> unit_index_;
  std::vector<std::vector<std::vector<int>>> pieces_;
  std::vector<SparseVec> mult_;
  int nilpotency_ = 0;
  bool connected_ = true;
  std::vector<int> op_index_;
};

/* Element of an AlgebraBasis, dense over the normal-form basis. */
class AlgebraElement {
 public:
  AlgebraElement() : A_(nullptr) {}
  explicit AlgebraElement(const AlgebraBasis& A)
      : A_(&A), c_(A.dim(), A.field().zero()) {}
  static AlgebraElement unit(const AlgebraBasis& A, int v);
  static AlgebraElement from_path(const AlgebraBasis& A, int k);

  const AlgebraBasis* algebra() const { return A_; }
  bool attached() const { return A_ != nullptr; }
  const Scalar& coeff(int k) const { return c_[k]; }
  Scalar& coeff(int k) { return c_[k]; }
  bool is_zero() const;

  AlgebraElement& add_in(const AlgebraElement& o);
  AlgebraElement& sub_in(const AlgebraElement& o);
  AlgebraElement& scale_in(const Scalar& s);

  friend AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement scale(const AlgebraElement& a, const Scalar& s);
  // a*b with b acting first.
  friend AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
  friend bool eq(const AlgebraElement& a, const AlgebraElement& b);

  // True when every nonzero coefficient sits in e_j A e_i.
  bool in_piece(int i, int j) const;
  std::string to_string() const;

 private:
  const AlgebraBasis* A_;
  std::vector<Scalar> c_;
};

// Evaluates a word of arrow indices (application order) in the algebra.
AlgebraElement eval_word(const AlgebraBasis& A, const std::vector<int>& word);
// Evaluates one side of a relation; used to assert relations vanish.
AlgebraElement eval_relation(const AlgebraBasis& A, const Relation& rel);

inline AlgebraBasis build_tensor_family(const TensorFamilySpec& spec,
                                        int cap = AlgebraBasis::kDefaultNilpotencyCap) {
  return AlgebraBasis::compute(build_tensor_presentation(spec), cap);
}

struct CartanData {
  std::vector<std::vector<std::int64_t>> cartan;
  std::int64_t det = 0;
  bool invertible_over_q = false;
  bool unimodular = false;
  // Coxeter matrix -C^{-T} C and char poly of it, present when det != 0.
  std::vector<std::vector<BigRat>> coxeter;
  std::vector<BigRat> char_poly_ascending;  // constant term first
  bool char_poly_integral = false;
};

CartanData cartan_coxeter(const AlgebraBasis& A);

}  // namespace qperf

#endif
