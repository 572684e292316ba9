#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qperf/algebra.hpp"
#include "qperf/module.hpp"

namespace qperf {

/* Socle/trace test for one simple S at `vertex`, run inside the projective
   cover P = Ae_vertex. V is the S-isotypic part of soc P, T its meet with
   the trace of the other projectives, K its meet with the joint kernel of
   all maps P -> Ae_w (w != vertex). */
struct ConditionEntry {
  int vertex = -1;
  std::size_t socle_dim = 0;        // dim V
  std::size_t trace_meet_dim = 0;   // dim (V meet T)
  std::size_t kernel_meet_dim = 0;  // dim K
  bool cond1 = false;               // V != 0
  bool cond2 = false;               // V not inside the trace
  bool cond3_kernel_form = false;   // K not inside the trace
  bool cond3_dual_trace_form = false;
  bool dual_forms_agree = false;    // the two cond3 routes find the same K
  bool separate_witnesses = false;  // cond2 and cond3 hold individually
  bool overall = false;
  std::vector<Scalar> witness_line;  // soc line in P_vertex avoiding the trace
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;  // one per vertex, ascending
  bool all_pass = false;
};

ConditionEntry check_conditions(const AlgebraBasis& A, int vertex);
ConditionReport check_all_conditions(const AlgebraBasis& A);

/* Vertices admit an order with no nonzero paths from a later vertex back
   to an earlier one. `order` lists vertices earliest first when directed;
   otherwise `cycle` is a directed cycle through nonzero pieces. */
struct WeaklyDirectedOrder {
  bool directed = false;
  std::vector<int> order;
  std::vector<int> cycle;
};

WeaklyDirectedOrder is_weakly_directed(const AlgebraBasis& A);

/* Shortcut test available in the weakly directed case: for each vertex the
   left socle of the local algebra e A e must kill e A (1 - e). */
struct WdVertexVerdict {
  int vertex = -1;
  bool socle_ok = false;     // soc Ae has a summand at the vertex itself
  bool products_ok = false;  // soc(eAe) . eA(1-e) = 0
  bool pass = false;
  std::string failing_product;  // set when products_ok is false
};

std::vector<WdVertexVerdict> check_wd_conditions(const AlgebraBasis& A);

/* Corner algebra (1-e_v) A (1-e_v) for an extremal vertex v, i.e. one with
   e_v A (1-e_v) = 0 or (1-e_v) A e_v = 0. Throws when v is not extremal or
   is the only vertex. Extremality keeps every surviving basis path away
   from v, so the corner keeps the surviving arrows and relations verbatim. */
AlgebraBasis corner_delete(const AlgebraBasis& A, int v);

/* Vertex bipartitions {e, f} with e A f = 0, e listed first. */
struct IdempotentSplit {
  std::vector<int> e_block;
  std::vector<int> f_block;
};

std::vector<IdempotentSplit> triangular_split(const AlgebraBasis& A);

/* Sampling plan for the finitistic-dimension probe: cyclic submodules of
   the projectives from unit vectors, all 0/1 vectors in components of
   dimension <= 3, and seeded random generators. */
struct FindimSample {
  std::size_t submodule_dim_bound = 6;
  int random_samples = 200;
  std::uint64_t seed = 777;
};

struct FindimReport {
  bool witness_found = false;  // nonprojective quotient of finite pd
  int witness_vertex = -1;     // projective the witness came from
  int witness_pd = 0;
  std::vector<std::size_t> witness_dims;
  int modules_tested = 0;
  int nonprojective_tested = 0;
  int truncated_resolutions = 0;
};

FindimReport findim_probe(const AlgebraBasis& A, const FindimSample& sample,
                          int cutoff);

}  // namespace qperf
