#include "qperf/criteria.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <utility>

#include "qperf/matrix.hpp"
#include "qperf/quiver.hpp"

namespace qperf {

namespace {

// Trace of all the other projectives inside P = Ae_v.
Submodule other_trace(const AlgebraBasis& A, const Module& P, int v) {
  const Field& F = A.field();
  Submodule tr = zero_submodule(P);
  for (int w = 0; w < A.num_vertices(); ++w) {
    if (w == v) continue;
    tr = join(tr, trace_submodule(Module::projective(A, w), P), F);
  }
  return tr;
}

// Joint kernel of every map P -> Ae_w over w != v.
Submodule other_kernels(const AlgebraBasis& A, const Module& P, int v) {
  const Field& F = A.field();
  Submodule ker = full_submodule(P);
  for (int w = 0; w < A.num_vertices(); ++w) {
    if (w == v) continue;
    Module Q = Module::projective(A, w);
    for (const ModuleMap& f : hom_modules(P, Q)) ker = meet(ker, kernel_of(f), F);
  }
  return ker;
}

// Copy with the ambient width made explicit; a fresh zero RowSpace stores an
// empty matrix that has lost its column count.
Mat rows_with_width(const RowSpace& S, std::size_t width, const Field& F) {
  Mat rows(S.dim(), width, F);
  for (std::size_t i = 0; i < S.dim(); ++i) rows.set_row(i, S.basis().row(i));
  return rows;
}

}  // namespace

ConditionEntry check_conditions(const AlgebraBasis& A, int vertex) {
  const Field& F = A.field();
  Module P = Module::projective(A, vertex);
  Submodule V = socle_component(P, vertex);
  Submodule tr = other_trace(A, P, vertex);
  Submodule T = meet(V, tr, F);
  Submodule K = meet(V, other_kernels(A, P, vertex), F);
  Submodule KT = meet(K, T, F);

  ConditionEntry e;
  e.vertex = vertex;
  e.socle_dim = V.dim();
  e.trace_meet_dim = T.dim();
  e.kernel_meet_dim = K.dim();
  e.cond1 = V.dim() > 0;
  e.cond2 = T.dim() < V.dim();
  e.cond3_kernel_form = K.dim() > 0;

  /* Second route to the same space: over the opposite algebra the trace of
     the dualised projectives annihilates exactly the joint kernel, so the
     socle lines avoiding that trace are the lines inside K. */
  AlgebraBasis Aop = A.opposite();
  Module DP = dual_module(P, Aop);
  Submodule W = zero_submodule(DP);
  for (int w = 0; w < A.num_vertices(); ++w) {
    if (w == vertex) continue;
    Module DQ = dual_module(Module::projective(A, w), Aop);
    W = join(W, trace_submodule(DQ, DP), F);
  }
  Mat wrows = rows_with_width(W.at[vertex], P.dim_at(vertex), F);
  RowSpace perp = RowSpace::from_rows(kernel_basis(wrows, F), F);
  RowSpace Kdual = V.at[vertex].intersect(perp, F);
  e.cond3_dual_trace_form = Kdual.dim() > 0;
  e.dual_forms_agree =
      Kdual.dim() == K.at[vertex].dim() && Kdual.contains(K.at[vertex], F);

  e.separate_witnesses = e.cond2 && e.cond3_kernel_form;
  // All three conditions carried by one socle line: some line in K misses
  // the trace.
  e.overall = e.cond1 && KT.dim() < K.dim();
  if (e.overall) {
    const Mat& kb = K.at[vertex].basis();
    for (std::size_t r = 0; r < kb.rows(); ++r) {
      std::vector<Scalar> line = kb.row(r);
      if (!tr.at[vertex].contains(line, F)) {
        e.witness_line = std::move(line);
        break;
      }
    }
  }
  return e;
}

ConditionReport check_all_conditions(const AlgebraBasis& A) {
  ConditionReport rep;
  rep.all_pass = true;
  for (int v = 0; v < A.num_vertices(); ++v) {
    rep.entries.push_back(check_conditions(A, v));
    rep.all_pass = rep.all_pass && rep.entries.back().overall;
  }
  return rep;
}

WeaklyDirectedOrder is_weakly_directed(const AlgebraBasis& A) {
  int n = A.num_vertices();
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && A.piece_dim(i, j) > 0) {
        out[i].push_back(j);
        ++indeg[j];
      }

  WeaklyDirectedOrder r;
  std::vector<bool> placed(n, false);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    if (pick < 0) break;
    placed[pick] = true;
    r.order.push_back(pick);
    for (int w : out[pick]) --indeg[w];
  }
  if (static_cast<int>(r.order.size()) == n) {
    r.directed = true;
    return r;
  }

  // The unplaced vertices all feed cycles; walk them until one closes.
  r.order.clear();
  std::vector<int> state(n, 0);  // 0 fresh, 1 on stack, 2 done
  std::vector<int> stack;
  std::function<bool(int)> dfs = [&](int v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (int w : out[v]) {
      if (placed[w]) continue;
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        r.cycle.assign(it, stack.end());
        return true;
      }
      if (state[w] == 0 && dfs(w)) return true;
    }
    state[v] = 2;
    stack.pop_back();
    return false;
  };
  for (int v = 0; v < n && r.cycle.empty(); ++v)
    if (!placed[v] && state[v] == 0) dfs(v);
  return r;
}

std::vector<WdVertexVerdict> check_wd_conditions(const AlgebraBasis& A) {
  if (!is_weakly_directed(A).directed)
    throw AlgebraError("shortcut check needs a weakly directed algebra");
  const Field& F = A.field();
  int n = A.num_vertices();

  std::vector<int> pos(A.dim(), -1);
  std::vector<WdVertexVerdict> out;
  for (int v = 0; v < n; ++v) {
    WdVertexVerdict verdict;
    verdict.vertex = v;
    verdict.socle_ok = socle_component(Module::projective(A, v), v).dim() > 0;

    // Left socle of the local algebra e_v A e_v.
    const std::vector<int>& pb = A.piece(v, v);
    std::vector<int> rad = A.piece_radical(v, v);
    for (std::size_t j = 0; j < pb.size(); ++j) pos[pb[j]] = static_cast<int>(j);
    Mat M(rad.size() * pb.size(), pb.size(), F);
    for (std::size_t r = 0; r < rad.size(); ++r)
      for (std::size_t j = 0; j < pb.size(); ++j)
        for (const auto& [k, c] : A.basis_product(rad[r], pb[j])) {
          std::size_t row = r * pb.size() + static_cast<std::size_t>(pos[k]);
          M.at(row, j) = F.add(M.at(row, j), c);
        }
    Mat soc = kernel_basis(M, F);

    verdict.products_ok = true;
    for (std::size_t s = 0; s < soc.rows() && verdict.products_ok; ++s) {
      AlgebraElement z(A);
      for (std::size_t j = 0; j < pb.size(); ++j) z.coeff(pb[j]) = soc.at(s, j);
      for (int w = 0; w < n && verdict.products_ok; ++w) {
        if (w == v) continue;
        for (int q : A.piece(w, v)) {
          if (mul(z, AlgebraElement::from_path(A, q)).is_zero()) continue;
          verdict.products_ok = false;
          verdict.failing_product = z.to_string() + " * " + A.path_label(q);
          break;
        }
      }
    }
    verdict.pass = verdict.socle_ok && verdict.products_ok;
    out.push_back(std::move(verdict));
  }
  return out;
}

AlgebraBasis corner_delete(const AlgebraBasis& A, int v) {
  const Presentation& p = A.presentation();
  int n = A.num_vertices();
  if (v < 0 || v >= n) throw AlgebraError("corner delete: no such vertex");
  if (n < 2) throw AlgebraError("corner delete needs at least two vertices");
  bool no_out = true, no_in = true;
  for (int w = 0; w < n; ++w) {
    if (w == v) continue;
    if (A.piece_dim(v, w) > 0) no_out = false;
    if (A.piece_dim(w, v) > 0) no_in = false;
  }
  if (!no_out && !no_in)
    throw AlgebraError("corner delete: vertex " + p.vertices[v] +
                       " is not extremal");

  /* No path between surviving vertices can pass through an extremal vertex
     (it would need both an entry and an exit), so the corner is presented by
     the surviving arrows and relations verbatim. */
  Presentation q;
  q.field = p.field;
  std::vector<int> vmap(n, -1);
  for (int w = 0; w < n; ++w) {
    if (w == v) continue;
    vmap[w] = static_cast<int>(q.vertices.size());
    q.vertices.push_back(p.vertices[w]);
  }
  std::vector<int> amap(p.arrows.size(), -1);
  for (std::size_t a = 0; a < p.arrows.size(); ++a) {
    const Arrow& ar = p.arrows[a];
    if (ar.src == v || ar.tgt == v) continue;
    amap[a] = static_cast<int>(q.arrows.size());
    q.arrows.push_back(Arrow{ar.label, vmap[ar.src], vmap[ar.tgt]});
  }
  for (const Relation& r : p.relations) {
    if (r.src == v || r.tgt == v) continue;
    Relation s = r;
    s.src = vmap[r.src];
    s.tgt = vmap[r.tgt];
    for (RelTerm& t : s.terms)
      for (int& a : t.arrows) {
        a = amap[a];
        if (a < 0) throw AlgebraError("corner delete: relation crosses the corner");
      }
    q.relations.push_back(std::move(s));
  }

  AlgebraBasis B = AlgebraBasis::compute(std::move(q));
  for (int i = 0; i < n; ++i) {
    if (i == v) continue;
    for (int j = 0; j < n; ++j) {
      if (j == v) continue;
      if (B.piece_dim(vmap[i], vmap[j]) != A.piece_dim(i, j))
        throw AlgebraError("corner delete: corner dimensions drifted");
    }
  }
  return B;
}

std::vector<IdempotentSplit> triangular_split(const AlgebraBasis& A) {
  int n = A.num_vertices();
  if (n > 16) throw AlgebraError("triangular split: too many vertices");
  std::vector<IdempotentSplit> out;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    IdempotentSplit s;
    for (int v = 0; v < n; ++v)
      ((mask >> v) & 1u ? s.e_block : s.f_block).push_back(v);
    bool ok = true;
    for (std::size_t a = 0; a < s.e_block.size() && ok; ++a)
      for (int w : s.f_block)
        if (A.piece_dim(w, s.e_block[a]) > 0) {  // e_u A e_w = paths w -> u
          ok = false;
          break;
        }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

FindimReport findim_probe(const AlgebraBasis& A, const FindimSample& sample,
                          int cutoff) {
  const Field& F = A.field();
  int n = A.num_vertices();
  FindimReport rep;

  auto consider = [&](const Module& P, int pvert, int w,
                      const std::vector<Scalar>& gen) -> bool {
    Submodule U = generated_submodule(P, {{w, gen}});
    if (U.dim() == 0 || U.dim() > sample.submodule_dim_bound) return false;
    Module Mq = quotient_module(P, U, nullptr);
    if (Mq.total_dim() == 0) return false;
    ++rep.modules_tested;
    ResolutionTrace res = min_resolution(Mq, cutoff);
    if (res.finite && res.length == 0) return false;
    ++rep.nonprojective_tested;
    if (res.truncated) {
      ++rep.truncated_resolutions;
      return false;
    }
    if (res.finite && res.length >= 1) {
      rep.witness_found = true;
      rep.witness_vertex = pvert;
      rep.witness_pd = res.length;
      for (int u = 0; u < n; ++u) rep.witness_dims.push_back(Mq.dim_at(u));
      return true;
    }
    return false;
  };

  // Deterministic sweep: unit generators, plus every 0/1 generator in
  // components of dimension at most 3.
  for (int v = 0; v < n; ++v) {
    Module P = Module::projective(A, v);
    for (int w = 0; w < n; ++w) {
      std::size_t d = P.dim_at(w);
      if (d == 0) continue;
      if (d <= 3) {
        for (unsigned mask = 1; mask < (1u << d); ++mask) {
          std::vector<Scalar> gen(d, F.zero());
          for (std::size_t i = 0; i < d; ++i)
            if ((mask >> i) & 1u) gen[i] = F.one();
          if (consider(P, v, w, gen)) return rep;
        }
      } else {
        for (std::size_t i = 0; i < d; ++i) {
          std::vector<Scalar> gen(d, F.zero());
          gen[i] = F.one();
          if (consider(P, v, w, gen)) return rep;
        }
      }
    }
  }

  std::mt19937_64 rng(sample.seed);
  for (int k = 0; k < sample.random_samples; ++k) {
    int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    Module P = Module::projective(A, v);
    std::vector<int> support;
    for (int w = 0; w < n; ++w)
      if (P.dim_at(w) > 0) support.push_back(w);
    int w = support[static_cast<std::size_t>(rng() % support.size())];
    std::vector<Scalar> gen(P.dim_at(w), F.zero());
    bool nonzero = false;
    for (Scalar& c : gen) {
      c = F.sample(rng);
      if (!F.is_zero(c)) nonzero = true;
    }
    if (!nonzero) continue;
    if (consider(P, v, w, gen)) return rep;
  }
  return rep;
}

}  // namespace qperf
