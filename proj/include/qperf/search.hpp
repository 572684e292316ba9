#ifndef QPERF_SEARCH_HPP
#define QPERF_SEARCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qperf/complex.hpp"
#include "qperf/criteria.hpp"

namespace qperf {

/* Bounds shared by all searches. Zeroes ask for the derived defaults:
   max_length and max_summands_per_degree fall back to the vertex count and
   vertex count times max_mult. Caps bound candidate evaluations; hitting
   one sets the truncation flag instead of failing. */
struct SearchBounds {
  int max_length = 0;
  int max_mult = 2;
  int max_summands_per_degree = 0;
  int depth = 3;
  std::uint64_t seed = 12345;
  std::size_t profile_cap = 100000;
  std::size_t global_cap = 10000000;
  int random_per_profile = 32;
  int resolution_cutoff = 20;

  int length_or_default(int n) const { return max_length > 0 ? max_length : n; }
  int per_degree_or_default(int n) const {
    return max_summands_per_degree > 0 ? max_summands_per_degree : n * max_mult;
  }
};

struct EnumerationResult {
  std::vector<PerfectComplex> objects;
  bool truncated = false;
  std::size_t candidates_tried = 0;
  std::size_t unknown_excluded = 0;  // tilting only: Unknown generation verdicts
};

/* Minimal indecomposable exceptional complexes up to shift, last nonzero
   degree pinned at 0. Complete only relative to the differential sweep:
   all {0,1} coefficient patterns on radical path slots up to the caps,
   plus seeded random coefficient rounds. */
EnumerationResult enumerate_exceptional(const AlgebraBasis& A, const SearchBounds& b);

/* Basic tilting complexes: sums of exactly n enumerated exceptional
   objects across relative shifts, filtered by exceptionality of the sum
   and a Generates verdict. Unknown verdicts are excluded and counted. */
EnumerationResult enumerate_tilting(const AlgebraBasis& A, const SearchBounds& b);

/* Direct-summand split along the summand incidence graph: components of
   the graph whose edges are nonzero differential blocks are honest direct
   summands, and each spans a contiguous degree range. */
std::vector<PerfectComplex> split_components(const PerfectComplex& X);

enum class Generation { Generates, NotGenerating, Unknown };

struct GenerationVerdict {
  Generation verdict = Generation::Unknown;
  int tier = 0;  // 1 = class matrix, 2 = weak generation, 3 = thick closure
  std::string detail;
  std::vector<std::string> trace;  // construction steps reaching the stalks
};

/* Three tiers: the summand class matrix must be square with determinant
   +-1; every vertex simple must be seen by some hom from T into its
   truncated resolution; then thick-closure rounds (cones of hom class
   representatives, splitting visibly disconnected results) must reach
   every stalk projective within the configured depth. */
GenerationVerdict generates(const std::vector<PerfectComplex>& summands,
                            const SearchBounds& b);

struct EndoArrow {
  int from = 0, to = 0;        // summand block indices
  std::vector<Scalar> coords;  // in the global class basis
  std::string label;
};

/* Endomorphism algebra of a direct sum in the homotopy category. The
   summand list drives the block structure; basis classes are block-pure.
   Products follow the path convention: in x * y the factor y acts first,
   so a basis class T_a -> T_b behaves like a path a -> b. */
struct EndoPresentation {
  const AlgebraBasis* algebra = nullptr;
  int blocks = 0;
  std::size_t dim = 0;
  std::vector<int> basis_from, basis_to;
  // product[i][j]: coordinates of basis_i * basis_j (j acts first)
  std::vector<std::vector<std::vector<Scalar>>> product;
  std::vector<std::vector<Scalar>> idempotent;  // one per block
  std::size_t radical_dim = 0;
  std::vector<std::vector<Scalar>> radical_basis;   // block-pure rows
  std::vector<std::pair<int, int>> radical_block;   // (from, to) per row
  std::vector<std::vector<int>> piece_dims;     // hom(block a, block b) dims
  std::vector<std::vector<int>> arrow_counts;   // rad / rad^2 dims
  std::vector<EndoArrow> arrows;
  // Minimal vanishing arrow words, rightmost factor first, e.g. "b*a*b":
  // the word itself is zero but every proper contiguous subword is not.
  std::vector<std::string> vanishing_products;

  const Field& field() const { return algebra->field(); }
};

EndoPresentation endo_algebra(const std::vector<PerfectComplex>& summands);

// x * y in class coordinates, y acting first.
std::vector<Scalar> endo_mul(const EndoPresentation& E,
                             const std::vector<Scalar>& x,
                             const std::vector<Scalar>& y);

/* Searches for an isomorphism E1 ~ E2^op: sweeps block bijections and
   arrow image assignments with small and seeded random coefficients, then
   verifies bijectivity and anti-multiplicativity on all basis pairs. A
   `true` is a certificate; `false` only means the sweep found nothing. */
bool endo_isomorphic_op(const EndoPresentation& E1, const EndoPresentation& E2,
                        std::uint64_t seed = 12345);

struct WitnessPair {
  PerfectComplex X, Y;
  bool x_exceptional = false, y_exceptional = false;
  bool hom_vanishes = false;  // hom_K(X, Y, n) = 0 across the forced window
  GenerationVerdict generation;
  bool triangular = false;  // supports disjoint and covering with eAf = 0
  int corner_pd = -1;       // pd of the gluing corner module when triangular
};

/* Ordered pairs over the enumerated exceptional objects and their bounded
   direct sums passing: both exceptional, one-way hom vanishing in all
   degrees, and a Generates verdict for the sum. Pairs whose supports split
   the algebra triangularly are additionally screened by the gluing
   obstruction: the corner module (1-e)Ae must resolve within the cutoff,
   else no recollement can induce the pair and it is rejected. */
struct WitnessReport {
  std::vector<WitnessPair> pairs;
  std::size_t pairs_checked = 0;
  bool truncated = false;
  bool conditions_predict_empty = false;  // check_all_conditions passed
  std::vector<std::string> rejected_by_obstruction;
};

WitnessReport recollement_witness_search(const AlgebraBasis& A, const SearchBounds& b);

/* Theorem-conclusion consistency over the enumerated sets, restricted to
   qualifying projectives (vertices passing the socle and trace checks):
   degree-appearance bounds in exceptional and tilting complexes, socle of
   the first homology, disjoint supports of hom-orthogonal pairs, and
   gap-freeness of tiltings. */
struct ConclusionsReport {
  std::vector<int> qualifying;
  bool no_qualifying = false;
  bool at_most_one_degree = true;
  bool socle_first_homology = true;
  bool disjoint_supports = true;
  bool tilting_one_degree = true;
  bool tilting_gap_free = true;
  bool all_pass = true;
  bool truncated = false;
  std::vector<std::string> failures;
  EnumerationResult exceptional, tilting;
};

ConclusionsReport conclusions_report(const AlgebraBasis& A, const SearchBounds& b);

}  // namespace qperf

#endif
