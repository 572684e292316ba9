#ifndef QPERF_COMPLEX_HPP
#define QPERF_COMPLEX_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qperf/module.hpp"

namespace qperf {

/* Bounded complex of projectives in cohomological indexing. Degree lo()+i
   carries the summands listed in summands()[i], each a vertex v standing for
   A e_v. The differential block diff()[i][s][t] is the component from
   summand t of degree lo()+i into summand s of degree lo()+i+1; it is an
   element of e_u A e_w (u the source vertex, w the target vertex) and acts
   by right multiplication. Boundary degrees with no summands are trimmed,
   so the zero complex is the one with no degrees at all. */
class PerfectComplex {
 public:
  using Blocks = std::vector<std::vector<AlgebraElement>>;

  PerfectComplex() : A_(nullptr), lo_(0) {}
  PerfectComplex(const AlgebraBasis& A, int lo,
                 std::vector<std::vector<int>> summands,
                 std::vector<Blocks> diff);

  static PerfectComplex zero(const AlgebraBasis& A);
  static PerfectComplex stalk(const AlgebraBasis& A, int v, int degree);

  const AlgebraBasis& algebra() const { return *A_; }
  bool attached() const { return A_ != nullptr; }
  const Field& field() const { return A_->field(); }

  bool is_zero() const { return summands_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(summands_.size()) - 1; }
  // Summand vertices at an absolute degree; empty outside [lo, hi].
  const std::vector<int>& summands_at(int n) const;
  const Blocks& diff_at(int n) const;  // block map degree n -> n+1
  int total_summands() const;

  // Count of A e_v summands in each degree, keyed (degree, vertex).
  std::map<std::pair<int, int>, int> multiplicities() const;
  // Alternating sum of summand classes in the Grothendieck group.
  std::vector<std::int64_t> k0_class() const;

  void validate() const;  // shapes, piece membership, d^2 = 0

 private:
  void trim();

  const AlgebraBasis* A_;
  int lo_;
  std::vector<std::vector<int>> summands_;
  std::vector<Blocks> diff_;  // diff_[i]: degree lo_+i -> lo_+i+1

  static const std::vector<int> kNoSummands;
  static const Blocks kNoBlocks;
};

/* Chain map of pure degree: components src^i -> dst^{i+degree}. blocks[i]
   holds the component out of absolute degree lo+i, indexed [s][t] like a
   differential. A degree-n map f satisfies d f = (-1)^n f d. */
struct ChainMap {
  PerfectComplex src, dst;
  int degree = 0;
  int lo = 0;
  std::vector<PerfectComplex::Blocks> blocks;
};

ChainMap identity_chain_map(const PerfectComplex& X);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // f acts first
bool chain_map_ok(const ChainMap& f);

PerfectComplex shift(const PerfectComplex& X, int k);  // X[k], d flips sign for odd k
PerfectComplex sum_complex(const PerfectComplex& X, const PerfectComplex& Y);
PerfectComplex cone(const ChainMap& f);  // dst then shifted src

/* Homotopy category hom space dst-shifted by n: chain maps X -> Y[n] modulo
   homotopy. reps spans the quotient when requested. */
struct HomResult {
  std::size_t dim = 0;
  std::vector<ChainMap> reps;
};

HomResult hom_K(const PerfectComplex& X, const PerfectComplex& Y, int n,
                bool with_reps = false);

/* Hom space with a solver attached: any chain map X -> Y[n] can be
   expressed in the representative classes modulo homotopy. */
struct HomClasses {
  PerfectComplex src, dst;
  int degree = 0;
  std::size_t dim = 0;
  std::vector<ChainMap> reps;
  Mat solver;  // columns: class representatives, then a homotopy-image basis
};

HomClasses hom_classes(const PerfectComplex& X, const PerfectComplex& Y, int n);

// Coordinates of [f] in H.reps. Throws when f lies outside the span, which
// only happens if f is not a chain map between the recorded complexes.
std::vector<Scalar> class_coordinates(const HomClasses& H, const ChainMap& f);

struct MinimizeResult {
  PerfectComplex complex;
  bool was_minimal = false;
};

// Strips contractible pairs until no differential entry has an invertible
// component; the result is the unique minimal representative.
MinimizeResult minimize(const PerfectComplex& X);
bool is_minimal(const PerfectComplex& X);

// Number of degrees carrying summands in the minimal representative.
int length_of(const PerfectComplex& X);

// Cohomology in one degree, as a module over the algebra.
Module homology_at(const PerfectComplex& X, int n);

// Self-orthogonality: hom_K(X, X, m) = 0 for every m != 0 that the support
// window allows.
bool is_exceptional(const PerfectComplex& X);

// Endomorphism ring modulo homotopy is local. Needs char 0 or p > dim End.
bool is_indecomposable(const PerfectComplex& X);

/* Isomorphism test in the homotopy category: minimize both sides, compare
   multiplicities, then hunt for a degreewise invertible chain map among
   the hom representatives, their partial sums and seeded random
   combinations. A `true` is a certificate; `false` can in principle be a
   miss over a tiny field, so the seed is surfaced. */
bool iso_K(const PerfectComplex& X, const PerfectComplex& Y,
           std::uint64_t seed = 12345);

// Resolution laid out in degrees [-(covers-1), 0], differentials verbatim.
PerfectComplex resolution_complex(const AlgebraBasis& A, const ResolutionTrace& tr);

nlohmann::json complex_to_json(const PerfectComplex& X);
PerfectComplex complex_from_json(const AlgebraBasis& A, const nlohmann::json& j);

}  // namespace qperf

#endif
