#ifndef QPERF_MODULE_HPP
#define QPERF_MODULE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qperf/algebra.hpp"

namespace qperf {

/* Finite-dimensional left module, stored vertex by vertex: a dimension for
   every vertex and, for every arrow a: u -> w, the matrix of its action
   M_u -> M_w. Every relation of the presentation must annihilate the module;
   validate() checks that. */
class Module {
 public:
  Module() : A_(nullptr) {}
  Module(const AlgebraBasis& A, std::vector<std::size_t> dims,
         std::vector<Mat> arrow_action);

  // A e_v with basis the normal-form paths starting at v, in basis order.
  static Module projective(const AlgebraBasis& A, int v);
  static Module simple(const AlgebraBasis& A, int v);
  static Module zero(const AlgebraBasis& A);
  /* Direct sum of A e_v over verts, in order. At each vertex w the
     coordinates are the summands' path slices concatenated summand-major,
     which is the layout the complex and resolution code relies on. */
  static Module projective_sum(const AlgebraBasis& A, const std::vector<int>& verts);

  const AlgebraBasis& algebra() const { return *A_; }
  bool attached() const { return A_ != nullptr; }
  const Field& field() const { return A_->field(); }
  int num_vertices() const { return A_->num_vertices(); }

  std::size_t dim_at(int v) const { return dims_[v]; }
  std::size_t total_dim() const;
  const std::vector<std::size_t>& dims() const { return dims_; }
  const Mat& action(int arrow) const { return act_[arrow]; }

  // Matrix of the action of a normal-form basis path, M_src -> M_tgt.
  Mat path_matrix(int path_index) const;

  void validate() const;  // throws AlgebraError on a violated relation

 private:
  const AlgebraBasis* A_;
  std::vector<std::size_t> dims_;
  std::vector<Mat> act_;
};

Module direct_sum(const Module& M, const Module& N);

/* Map of modules over the same algebra: one matrix per vertex, commuting
   with every arrow action. Holds copies of both endpoints so a map stays
   usable after the originals go out of scope. */
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(Module src, Module dst, std::vector<Mat> mats);

  static ModuleMap identity(const Module& M);
  static ModuleMap zero(const Module& src, const Module& dst);

  const Module& src() const { return src_; }
  const Module& dst() const { return dst_; }
  const Mat& at(int v) const { return f_[v]; }
  Mat& at(int v) { return f_[v]; }

  bool is_zero() const;
  void validate() const;  // throws AlgebraError when not a module map

 private:
  Module src_;
  Module dst_;
  std::vector<Mat> f_;
};

ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // f acts first
ModuleMap map_add(const ModuleMap& f, const ModuleMap& g);
ModuleMap map_scale(const ModuleMap& f, const Scalar& c);
bool map_eq(const ModuleMap& f, const ModuleMap& g);

// Basis of Hom(M, N), deterministic order.
std::vector<ModuleMap> hom_modules(const Module& M, const Module& N);

/* Vertex-graded subspace of a module, one RowSpace per vertex. All the
   constructors below return genuinely arrow-stable families. */
struct Submodule {
  std::vector<RowSpace> at;

  std::size_t dim() const;
};

Submodule zero_submodule(const Module& M);
Submodule full_submodule(const Module& M);
Submodule meet(const Submodule& S, const Submodule& T, const Field& F);
Submodule join(const Submodule& S, const Submodule& T, const Field& F);
bool contains(const Submodule& S, const Submodule& T, const Field& F);
bool submodule_eq(const Submodule& S, const Submodule& T, const Field& F);
// Checks arrow stability of a candidate family.
bool is_arrow_stable(const Module& M, const Submodule& S);

// Smallest submodule containing the given vectors, each in M_v coordinates.
Submodule generated_submodule(
    const Module& M,
    const std::vector<std::pair<int, std::vector<Scalar>>>& gens);

Submodule radical_of(const Module& M);      // arrow ideal times M
Submodule socle_of(const Module& M);        // annihilator of the arrows
Submodule socle_component(const Module& M, int v);

Submodule kernel_of(const ModuleMap& f);
Submodule image_of(const ModuleMap& f);

// Sum of the images of all maps N -> M.
Submodule trace_submodule(const Module& N, const Module& M);

Module submodule_module(const Module& M, const Submodule& S,
                        ModuleMap* inclusion = nullptr);
Module quotient_module(const Module& M, const Submodule& S,
                       ModuleMap* projection = nullptr);

/* k-linear dual as a module over the opposite algebra: same dimensions,
   each arrow acting by the transpose of its original action. Aop must be
   M.algebra().opposite() (same arrow order, endpoints swapped). */
Module dual_module(const Module& M, const AlgebraBasis& Aop);

bool is_projective_module(const Module& M);

/* Minimal projective resolution ... -> P_1 -> P_0 -> M -> 0, stopped after
   `cutoff` covers when the syzygies keep going. covers[k] lists the vertices
   of P_k; diffs[k][t][s] is the component of P_{k+1} -> P_k from summand s
   of P_{k+1} (vertex u) into summand t of P_k (vertex w), an element of
   e_u A e_w acting by right multiplication. Every component lies in the
   radical, which is what makes the resolution minimal. */
struct ResolutionTrace {
  std::vector<std::vector<int>> covers;
  std::vector<std::vector<std::vector<AlgebraElement>>> diffs;
  bool finite = false;
  bool truncated = false;
  int length = -1;  // projective dimension when finite
};

ResolutionTrace min_resolution(const Module& M, int cutoff);

}  // namespace qperf

#endif
