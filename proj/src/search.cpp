#include "qperf/search.hpp"

#include "qperf/criteria.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>

namespace qperf {

namespace {

using Blocks = PerfectComplex::Blocks;

std::string vertex_name(const AlgebraBasis& A, int v) {
  return A.presentation().vertices[static_cast<std::size_t>(v)];
}

std::string shape_string(const PerfectComplex& X) {
  if (X.is_zero()) return "0";
  const AlgebraBasis& A = X.algebra();
  std::string out;
  for (int d = X.lo(); d <= X.hi(); ++d) {
    if (!out.empty()) out += " | ";
    out += "[" + std::to_string(d) + "]";
    for (int v : X.summands_at(d)) out += " " + vertex_name(A, v);
  }
  return out;
}

std::set<int> support_set(const PerfectComplex& X) {
  std::set<int> s;
  for (int d = X.lo(); d <= X.hi(); ++d)
    for (int v : X.summands_at(d)) s.insert(v);
  return s;
}

// Vertex of a one-term one-summand complex, or -1.
int stalk_vertex(const PerfectComplex& X) {
  if (X.is_zero() || X.lo() != X.hi()) return -1;
  if (X.summands_at(X.lo()).size() != 1) return -1;
  return X.summands_at(X.lo())[0];
}

PerfectComplex normalize_top(const PerfectComplex& X) {
  if (X.is_zero() || X.hi() == 0) return X;
  return shift(X, X.hi());
}

}  // namespace

std::vector<PerfectComplex> split_components(const PerfectComplex& X) {
  std::vector<PerfectComplex> out;
  if (X.is_zero()) return out;
  const AlgebraBasis& A = X.algebra();
  int len = X.hi() - X.lo() + 1;
  std::vector<std::size_t> first(static_cast<std::size_t>(len) + 1, 0);
  for (int i = 0; i < len; ++i)
    first[static_cast<std::size_t>(i) + 1] =
        first[static_cast<std::size_t>(i)] + X.summands_at(X.lo() + i).size();
  std::size_t total = first[static_cast<std::size_t>(len)];
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  for (int i = 0; i + 1 < len; ++i) {
    const Blocks& d = X.diff_at(X.lo() + i);
    for (std::size_t s = 0; s < d.size(); ++s)
      for (std::size_t t = 0; t < d[s].size(); ++t)
        if (!d[s][t].is_zero())
          unite(first[static_cast<std::size_t>(i)] + t,
                first[static_cast<std::size_t>(i) + 1] + s);
  }
  std::map<std::size_t, std::vector<std::vector<std::size_t>>> comp;
  for (int i = 0; i < len; ++i)
    for (std::size_t t = 0; t < X.summands_at(X.lo() + i).size(); ++t) {
      auto& slots = comp[find(first[static_cast<std::size_t>(i)] + t)];
      if (slots.empty()) slots.resize(static_cast<std::size_t>(len));
      slots[static_cast<std::size_t>(i)].push_back(t);
    }
  for (auto& [root, slots] : comp) {
    (void)root;
    int clo = 0;
    while (slots[static_cast<std::size_t>(clo)].empty()) ++clo;
    int chi = len - 1;
    while (slots[static_cast<std::size_t>(chi)].empty()) --chi;
    std::vector<std::vector<int>> summ;
    std::vector<Blocks> diff;
    for (int i = clo; i <= chi; ++i) {
      std::vector<int> row;
      for (std::size_t t : slots[static_cast<std::size_t>(i)])
        row.push_back(X.summands_at(X.lo() + i)[t]);
      summ.push_back(std::move(row));
    }
    for (int i = clo; i < chi; ++i) {
      const Blocks& d = X.diff_at(X.lo() + i);
      Blocks b;
      for (std::size_t s : slots[static_cast<std::size_t>(i) + 1]) {
        std::vector<AlgebraElement> row;
        for (std::size_t t : slots[static_cast<std::size_t>(i)])
          row.push_back(d[s][t]);
        b.push_back(std::move(row));
      }
      diff.push_back(std::move(b));
    }
    out.emplace_back(A, X.lo() + clo, std::move(summ), std::move(diff));
  }
  return out;
}

namespace {

bool is_connected_complex(const PerfectComplex& X) {
  return split_components(X).size() <= 1;
}

// A degree-n chain map equals a degree-zero map out of the shifted source.
ChainMap to_degree_zero(const ChainMap& f) {
  if (f.degree == 0) return f;
  ChainMap g;
  g.src = shift(f.src, -f.degree);
  g.dst = f.dst;
  g.degree = 0;
  g.lo = f.lo + f.degree;
  g.blocks = f.blocks;
  return g;
}

bool contains_iso(const std::vector<PerfectComplex>& pool, const PerfectComplex& X,
                  std::uint64_t seed) {
  for (const PerfectComplex& P : pool)
    if (iso_K(P, X, seed)) return true;
  return false;
}

PerfectComplex sum_all(const AlgebraBasis& A,
                       const std::vector<PerfectComplex>& parts) {
  PerfectComplex acc = PerfectComplex::zero(A);
  for (const PerfectComplex& P : parts) acc = sum_complex(acc, P);
  return acc;
}

// dim Hom(P_u, P_w) matrix, indexed [u][w].
std::vector<std::vector<int>> hom_dims(const AlgebraBasis& A) {
  int n = A.num_vertices();
  std::vector<std::vector<int>> h(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w) h[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] = A.piece_dim(w, u);
  return h;
}

struct SlotRef {
  int junction;           // differential index, 0-based from the lowest degree
  std::size_t s, t;       // target and source summand slots
  int path;               // normal form path index
};

}  // namespace

EnumerationResult enumerate_exceptional(const AlgebraBasis& A, const SearchBounds& b) {
  EnumerationResult out;
  const Field& F = A.field();
  int n = A.num_vertices();
  int L = b.length_or_default(n);
  int per_degree = b.per_degree_or_default(n);
  std::vector<std::vector<int>> homd = hom_dims(A);

  // All per-degree multiplicity vectors, lexicographic.
  std::vector<std::vector<int>> degree_options;
  {
    std::vector<int> m(static_cast<std::size_t>(n), 0);
    while (true) {
      int total = std::accumulate(m.begin(), m.end(), 0);
      if (total >= 1 && total <= per_degree) degree_options.push_back(m);
      int i = n - 1;
      while (i >= 0 && m[static_cast<std::size_t>(i)] == b.max_mult) {
        m[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++m[static_cast<std::size_t>(i)];
    }
  }

  std::mt19937_64 rng(b.seed);
  bool stop = false;
  for (int len = 1; len <= L && !stop; ++len) {
    if (len == 1) {
      // Stalk sums with more than one summand are never indecomposable.
      for (int v = 0; v < n; ++v) {
        PerfectComplex S = PerfectComplex::stalk(A, v, 0);
        ++out.candidates_tried;
        if (!is_exceptional(S) || !is_indecomposable(S)) continue;
        if (!contains_iso(out.objects, S, b.seed)) out.objects.push_back(S);
      }
      continue;
    }

    // Odometer over per-degree option indices; degree 0 of the profile is
    // the lowest degree -(len-1).
    std::vector<std::size_t> pick(static_cast<std::size_t>(len), 0);
    while (!stop) {
      std::vector<const std::vector<int>*> prof;
      for (std::size_t i = 0; i < pick.size(); ++i)
        prof.push_back(&degree_options[pick[i]]);

      // Euler characteristic of the profile must be positive: for an
      // exceptional object it equals dim End >= 1.
      std::int64_t chi = 0;
      for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) {
          std::int64_t pair = 0;
          for (int u = 0; u < n; ++u)
            for (int w = 0; w < n; ++w)
              pair += static_cast<std::int64_t>((*prof[static_cast<std::size_t>(i)])[static_cast<std::size_t>(u)]) *
                      (*prof[static_cast<std::size_t>(j)])[static_cast<std::size_t>(w)] *
                      homd[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)];
          chi += ((j - i) % 2 == 0) ? pair : -pair;
        }

      if (chi > 0) {
        // Expanded summand lists and the radical path slots.
        std::vector<std::vector<int>> summ;
        for (int i = 0; i < len; ++i) {
          std::vector<int> row;
          for (int v = 0; v < n; ++v)
            for (int c = 0; c < (*prof[static_cast<std::size_t>(i)])[static_cast<std::size_t>(v)]; ++c)
              row.push_back(v);
          summ.push_back(std::move(row));
        }
        std::vector<SlotRef> slots;
        for (int i = 0; i + 1 < len; ++i)
          for (std::size_t s = 0; s < summ[static_cast<std::size_t>(i) + 1].size(); ++s)
            for (std::size_t t = 0; t < summ[static_cast<std::size_t>(i)].size(); ++t)
              for (int p : A.piece_radical(summ[static_cast<std::size_t>(i) + 1][s],
                                           summ[static_cast<std::size_t>(i)][t]))
                slots.push_back(SlotRef{i, s, t, p});

        std::size_t sweep = b.profile_cap;
        if (slots.size() < 63) {
          std::size_t full = static_cast<std::size_t>(1) << slots.size();
          if (full <= b.profile_cap)
            sweep = full;
          else
            out.truncated = true;
        } else {
          out.truncated = true;
        }

        auto try_candidate = [&](const std::vector<Scalar>& coeff) {
          if (out.candidates_tried >= b.global_cap) {
            out.truncated = true;
            stop = true;
            return;
          }
          ++out.candidates_tried;
          std::vector<Blocks> diff;
          for (int i = 0; i + 1 < len; ++i) {
            Blocks blk(summ[static_cast<std::size_t>(i) + 1].size(),
                       std::vector<AlgebraElement>(summ[static_cast<std::size_t>(i)].size(),
                                                   AlgebraElement(A)));
            diff.push_back(std::move(blk));
          }
          for (std::size_t k = 0; k < slots.size(); ++k) {
            if (F.is_zero(coeff[k])) continue;
            diff[static_cast<std::size_t>(slots[k].junction)][slots[k].s][slots[k].t]
                .coeff(slots[k].path) = coeff[k];
          }
          // d^2 = 0 blockwise.
          for (int i = 0; i + 2 < len; ++i)
            for (std::size_t t = 0; t < summ[static_cast<std::size_t>(i)].size(); ++t)
              for (std::size_t s = 0; s < summ[static_cast<std::size_t>(i) + 2].size(); ++s) {
                AlgebraElement acc(A);
                for (std::size_t m = 0; m < summ[static_cast<std::size_t>(i) + 1].size(); ++m)
                  acc.add_in(mul(diff[static_cast<std::size_t>(i)][m][t],
                                 diff[static_cast<std::size_t>(i) + 1][s][m]));
                if (!acc.is_zero()) return;
              }
          PerfectComplex C(A, -(len - 1), summ, std::move(diff));
          if (!is_connected_complex(C)) return;
          if (!is_exceptional(C)) return;
          if (!is_indecomposable(C)) return;
          if (!contains_iso(out.objects, C, b.seed)) out.objects.push_back(C);
        };

        std::vector<Scalar> coeff(slots.size(), F.zero());
        for (std::size_t c = 1; c < sweep && !stop; ++c) {
          for (std::size_t k = 0; k < slots.size(); ++k)
            coeff[k] = ((c >> k) & 1) ? F.one() : F.zero();
          try_candidate(coeff);
        }
        for (int r = 0; r < b.random_per_profile && !stop && !slots.empty(); ++r) {
          for (std::size_t k = 0; k < slots.size(); ++k) coeff[k] = F.sample(rng);
          try_candidate(coeff);
        }
      }

      // Advance the profile odometer.
      std::size_t i = pick.size();
      while (i > 0) {
        --i;
        if (++pick[i] < degree_options.size()) break;
        pick[i] = 0;
        if (i == 0) pick.clear();
      }
      if (pick.empty()) break;
    }
  }
  return out;
}

GenerationVerdict generates(const std::vector<PerfectComplex>& summands,
                            const SearchBounds& b) {
  GenerationVerdict out;
  if (summands.empty() || summands[0].is_zero()) {
    out.verdict = Generation::NotGenerating;
    out.tier = 1;
    out.detail = "no summands";
    return out;
  }
  const AlgebraBasis& A = summands[0].algebra();
  int n = A.num_vertices();

  // Tier 1: the summand class matrix must be square and unimodular.
  out.tier = 1;
  if (static_cast<int>(summands.size()) != n) {
    out.verdict = Generation::NotGenerating;
    out.detail = "class matrix is " + std::to_string(summands.size()) + " x " +
                 std::to_string(n);
    return out;
  }
  std::vector<std::vector<std::int64_t>> classes;
  for (const PerfectComplex& S : summands) classes.push_back(S.k0_class());
  std::vector<std::int64_t> divisors = smith_normal_form_divisors(classes);
  bool unimodular = static_cast<int>(divisors.size()) == n;
  for (std::int64_t d : divisors)
    if (d != 1 && d != -1) unimodular = false;
  if (!unimodular) {
    out.verdict = Generation::NotGenerating;
    out.detail = "class matrix determinant is not a unit";
    return out;
  }

  // Tier 2: every vertex simple must be seen from T through its truncated
  // minimal resolution.
  out.tier = 2;
  PerfectComplex T = sum_all(A, summands);
  for (int v = 0; v < n; ++v) {
    ResolutionTrace tr = min_resolution(Module::simple(A, v), b.resolution_cutoff);
    PerfectComplex R = resolution_complex(A, tr);
    bool seen = false;
    for (int m = R.lo() - T.hi(); m <= R.hi() - T.lo() && !seen; ++m)
      if (hom_K(T, R, m).dim != 0) seen = true;
    if (!seen) {
      out.verdict = Generation::NotGenerating;
      out.detail = "no hom into the resolution of simple " + vertex_name(A, v);
      return out;
    }
  }

  // Tier 3: thick-closure rounds. Cones of hom class representatives,
  // splitting visibly disconnected results into their direct summands.
  out.tier = 3;
  std::vector<PerfectComplex> pool;
  std::vector<bool> have(static_cast<std::size_t>(n), false);
  auto note_stalk = [&](const PerfectComplex& W) {
    int v = stalk_vertex(W);
    if (v >= 0) have[static_cast<std::size_t>(v)] = true;
  };
  auto all_have = [&]() {
    for (bool h : have)
      if (!h) return false;
    return true;
  };
  auto add_object = [&](const PerfectComplex& W, const std::string& how) {
    for (const PerfectComplex& piece : split_components(minimize(W).complex)) {
      PerfectComplex C = normalize_top(piece);
      if (contains_iso(pool, C, b.seed)) continue;
      pool.push_back(C);
      out.trace.push_back(how + " => " + shape_string(C));
      note_stalk(C);
    }
  };
  for (const PerfectComplex& S : summands) add_object(S, "summand");
  const std::size_t pool_cap = 64;
  for (int round = 1; round <= b.depth && !all_have(); ++round) {
    std::size_t frozen = pool.size();
    for (std::size_t i = 0; i < frozen && !all_have(); ++i)
      for (std::size_t j = 0; j < frozen && !all_have(); ++j) {
        // By value: add_object below grows the pool and moves its storage.
        PerfectComplex U = pool[i];
        PerfectComplex V = pool[j];
        for (int m = V.lo() - U.hi(); m <= V.hi() - U.lo() && !all_have(); ++m) {
          HomResult H = hom_K(U, V, m, true);
          for (const ChainMap& f : H.reps) {
            if (pool.size() >= pool_cap) break;
            add_object(cone(to_degree_zero(f)),
                       "cone " + std::to_string(i) + " -> " + std::to_string(j) +
                           " deg " + std::to_string(m));
            if (all_have()) break;
          }
        }
      }
    if (pool.size() >= pool_cap) break;
  }
  if (all_have()) {
    out.verdict = Generation::Generates;
    out.detail = "every stalk projective reached";
    return out;
  }
  out.verdict = Generation::Unknown;
  out.detail = pool.size() >= pool_cap ? "closure pool cap reached"
                                       : "closure depth exhausted";
  return out;
}

namespace {

EnumerationResult tilting_from(const AlgebraBasis& A, const SearchBounds& b,
                               const EnumerationResult& base) {
  EnumerationResult out;
  out.truncated = base.truncated;
  int n = A.num_vertices();
  int L = b.length_or_default(n);

  // All placements (object, downward shift), tops at or below degree 0.
  struct Placement {
    std::size_t obj;
    int k;
  };
  std::vector<Placement> placements;
  for (std::size_t j = 0; j < base.objects.size(); ++j) {
    int len = base.objects[j].hi() - base.objects[j].lo() + 1;
    for (int k = 0; k + len <= L; ++k) placements.push_back(Placement{j, k});
  }
  if (static_cast<int>(placements.size()) < n) return out;

  // Lexicographic n-subsets of placements; at least one summand on top.
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (out.candidates_tried >= b.global_cap) {
      out.truncated = true;
      break;
    }
    bool on_top = false;
    for (std::size_t i : idx)
      if (placements[i].k == 0) on_top = true;
    if (on_top) {
      ++out.candidates_tried;
      std::vector<PerfectComplex> parts;
      for (std::size_t i : idx)
        parts.push_back(shift(base.objects[placements[i].obj], placements[i].k));
      std::vector<std::vector<std::int64_t>> classes;
      for (const PerfectComplex& P : parts) classes.push_back(P.k0_class());
      std::vector<std::int64_t> divisors = smith_normal_form_divisors(classes);
      bool unimodular = static_cast<int>(divisors.size()) == n;
      for (std::int64_t d : divisors)
        if (d != 1 && d != -1) unimodular = false;
      if (unimodular) {
        PerfectComplex T = sum_all(A, parts);
        if (is_exceptional(T)) {
          GenerationVerdict g = generates(parts, b);
          if (g.verdict == Generation::Unknown) ++out.unknown_excluded;
          if (g.verdict == Generation::Generates &&
              !contains_iso(out.objects, T, b.seed))
            out.objects.push_back(T);
        }
      }
    }
    // Advance the subset odometer.
    int pos = n - 1;
    while (pos >= 0 &&
           idx[static_cast<std::size_t>(pos)] ==
               placements.size() - static_cast<std::size_t>(n - pos))
      --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < n; ++q)
      idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q) - 1] + 1;
  }
  return out;
}

}  // namespace

EnumerationResult enumerate_tilting(const AlgebraBasis& A, const SearchBounds& b) {
  return tilting_from(A, b, enumerate_exceptional(A, b));
}

namespace {

bool coords_zero(const Field& F, const std::vector<Scalar>& v) {
  for (const Scalar& c : v)
    if (!F.is_zero(c)) return false;
  return true;
}

bool coords_eq(const Field& F, const std::vector<Scalar>& a,
               const std::vector<Scalar>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!F.eq(a[i], b[i])) return false;
  return true;
}

std::string arrow_label(std::size_t k) {
  if (k < 26) return std::string(1, static_cast<char>('a' + k));
  return "a" + std::to_string(k);
}

}  // namespace

std::vector<Scalar> endo_mul(const EndoPresentation& E, const std::vector<Scalar>& x,
                             const std::vector<Scalar>& y) {
  const Field& F = E.field();
  std::vector<Scalar> out(E.dim, F.zero());
  for (std::size_t i = 0; i < E.dim; ++i) {
    if (F.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < E.dim; ++j) {
      if (F.is_zero(y[j])) continue;
      Scalar c = F.mul(x[i], y[j]);
      const std::vector<Scalar>& p = E.product[i][j];
      for (std::size_t k = 0; k < E.dim; ++k)
        if (!F.is_zero(p[k])) out[k] = F.add(out[k], F.mul(c, p[k]));
    }
  }
  return out;
}

EndoPresentation endo_algebra(const std::vector<PerfectComplex>& summands) {
  if (summands.empty()) throw AlgebraError("endomorphism algebra of nothing");
  for (const PerfectComplex& S : summands)
    if (S.is_zero()) throw AlgebraError("endomorphism algebra needs nonzero summands");
  EndoPresentation E;
  const AlgebraBasis& A = summands[0].algebra();
  const Field& F = A.field();
  E.algebra = &A;
  E.blocks = static_cast<int>(summands.size());
  std::size_t nb = summands.size();

  std::vector<std::vector<HomClasses>> H(nb);
  std::vector<std::vector<std::size_t>> off(nb, std::vector<std::size_t>(nb, 0));
  E.piece_dims.assign(nb, std::vector<int>(nb, 0));
  for (std::size_t a = 0; a < nb; ++a) {
    H[a].reserve(nb);
    for (std::size_t c = 0; c < nb; ++c) {
      H[a].push_back(hom_classes(summands[a], summands[c], 0));
      off[a][c] = E.dim;
      E.dim += H[a][c].dim;
      E.piece_dims[a][c] = static_cast<int>(H[a][c].dim);
      for (std::size_t k = 0; k < H[a][c].dim; ++k) {
        E.basis_from.push_back(static_cast<int>(a));
        E.basis_to.push_back(static_cast<int>(c));
      }
    }
  }
  if (F.is_prime() && F.modulus() <= static_cast<std::int64_t>(E.dim))
    throw AlgebraError("endomorphism radical needs characteristic above " +
                       std::to_string(E.dim));

  auto rep_of = [&](std::size_t i) -> const ChainMap& {
    std::size_t a = static_cast<std::size_t>(E.basis_from[i]);
    std::size_t c = static_cast<std::size_t>(E.basis_to[i]);
    return H[a][c].reps[i - off[a][c]];
  };

  // Structure constants: basis_i * basis_j with j acting first.
  std::vector<Scalar> zero_vec(E.dim, F.zero());
  E.product.assign(E.dim, std::vector<std::vector<Scalar>>(E.dim, zero_vec));
  for (std::size_t i = 0; i < E.dim; ++i)
    for (std::size_t j = 0; j < E.dim; ++j) {
      if (E.basis_from[i] != E.basis_to[j]) continue;
      std::size_t a = static_cast<std::size_t>(E.basis_from[j]);
      std::size_t c = static_cast<std::size_t>(E.basis_to[i]);
      ChainMap g = compose(rep_of(i), rep_of(j));
      std::vector<Scalar> local = class_coordinates(H[a][c], g);
      for (std::size_t k = 0; k < local.size(); ++k)
        E.product[i][j][off[a][c] + k] = local[k];
    }

  for (std::size_t a = 0; a < nb; ++a) {
    std::vector<Scalar> ide = zero_vec;
    std::vector<Scalar> local =
        class_coordinates(H[a][a], identity_chain_map(summands[a]));
    for (std::size_t k = 0; k < local.size(); ++k) ide[off[a][a] + k] = local[k];
    E.idempotent.push_back(std::move(ide));
  }
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = 0; c < nb; ++c) {
      std::vector<Scalar> p = endo_mul(E, E.idempotent[a], E.idempotent[c]);
      bool ok = (a == c) ? coords_eq(F, p, E.idempotent[a]) : coords_zero(F, p);
      if (!ok) throw AlgebraError("endomorphism idempotents drifted");
    }

  // Radical of the trace form; valid in characteristic 0 or above dim.
  Mat G(E.dim, E.dim, F);
  for (std::size_t i = 0; i < E.dim; ++i)
    for (std::size_t j = 0; j < E.dim; ++j) {
      Scalar tr = F.zero();
      for (std::size_t m = 0; m < E.dim; ++m)
        for (std::size_t k = 0; k < E.dim; ++k)
          tr = F.add(tr, F.mul(E.product[i][m][k], E.product[j][k][m]));
      G.at(i, j) = tr;
    }
  Mat rad = kernel_basis(G, F);

  // The radical is stable under the block grading, so it splits block-pure.
  std::vector<std::vector<RowSpace>> R(nb, std::vector<RowSpace>(nb, RowSpace(E.dim)));
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = 0; c < nb; ++c) {
      std::vector<std::vector<Scalar>> rows;
      for (std::size_t r = 0; r < rad.rows(); ++r) {
        std::vector<Scalar> slice = zero_vec;
        bool nz = false;
        for (std::size_t k = 0; k < H[a][c].dim; ++k) {
          slice[off[a][c] + k] = rad.at(r, off[a][c] + k);
          if (!F.is_zero(slice[off[a][c] + k])) nz = true;
        }
        if (nz) rows.push_back(std::move(slice));
      }
      Mat m(rows.size(), E.dim, F);
      for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
      R[a][c] = RowSpace::from_rows(m, F);
    }
  std::size_t split_total = 0;
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = 0; c < nb; ++c) split_total += R[a][c].dim();
  if (split_total != rad.rows())
    throw AlgebraError("endomorphism radical split drifted");
  E.radical_dim = split_total;
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = 0; c < nb; ++c)
      for (std::size_t r = 0; r < R[a][c].dim(); ++r) {
        E.radical_basis.push_back(R[a][c].basis().row(r));
        E.radical_block.emplace_back(static_cast<int>(a), static_cast<int>(c));
      }

  // rad^2 from products of the block-pure radical bases.
  std::vector<std::vector<RowSpace>> R2(nb, std::vector<RowSpace>(nb, RowSpace(E.dim)));
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t mid = 0; mid < nb; ++mid)
      for (std::size_t c = 0; c < nb; ++c) {
        if (R[a][mid].dim() == 0 || R[mid][c].dim() == 0) continue;
        std::vector<std::vector<Scalar>> rows;
        for (std::size_t ru = 0; ru < R[a][mid].dim(); ++ru)
          for (std::size_t rv = 0; rv < R[mid][c].dim(); ++rv) {
            std::vector<Scalar> w =
                endo_mul(E, R[mid][c].basis().row(rv), R[a][mid].basis().row(ru));
            if (!coords_zero(F, w)) rows.push_back(std::move(w));
          }
        Mat m(rows.size(), E.dim, F);
        for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
        R2[a][c] = R2[a][c].sum(RowSpace::from_rows(m, F), F);
      }

  E.arrow_counts.assign(nb, std::vector<int>(nb, 0));
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t c = 0; c < nb; ++c) {
      E.arrow_counts[a][c] =
          static_cast<int>(R[a][c].dim()) - static_cast<int>(R2[a][c].dim());
      RowSpace span = R2[a][c];
      for (std::size_t r = 0; r < R[a][c].dim(); ++r) {
        std::vector<Scalar> row = R[a][c].basis().row(r);
        if (span.contains(row, F)) continue;
        EndoArrow arr;
        arr.from = static_cast<int>(a);
        arr.to = static_cast<int>(c);
        arr.coords = row;
        arr.label = arrow_label(E.arrows.size());
        E.arrows.push_back(std::move(arr));
        Mat one(1, E.dim, F);
        one.set_row(0, row);
        span = span.sum(RowSpace::from_rows(one, F), F);
      }
    }

  // Minimal vanishing arrow words of length two and three.
  for (const EndoArrow& g : E.arrows)
    for (const EndoArrow& f : E.arrows) {
      if (g.from != f.to) continue;
      if (coords_zero(F, endo_mul(E, g.coords, f.coords)))
        E.vanishing_products.push_back(g.label + "*" + f.label);
    }
  for (const EndoArrow& g : E.arrows)
    for (const EndoArrow& m : E.arrows)
      for (const EndoArrow& f : E.arrows) {
        if (m.from != f.to || g.from != m.to) continue;
        std::vector<Scalar> mf = endo_mul(E, m.coords, f.coords);
        if (coords_zero(F, mf)) continue;
        if (coords_zero(F, endo_mul(E, g.coords, m.coords))) continue;
        if (coords_zero(F, endo_mul(E, g.coords, mf)))
          E.vanishing_products.push_back(g.label + "*" + m.label + "*" + f.label);
      }

  return E;
}

bool endo_isomorphic_op(const EndoPresentation& E1, const EndoPresentation& E2,
                        std::uint64_t seed) {
  if (E1.dim != E2.dim || E1.blocks != E2.blocks) return false;
  if (!(E1.field() == E2.field())) return false;
  const Field& F = E1.field();
  std::size_t dim = E1.dim;
  std::size_t nb = static_cast<std::size_t>(E1.blocks);

  // Word basis of E1 over its idempotents and arrows, with derivations.
  struct Entry {
    std::vector<Scalar> value;
    int kind;  // 0 idempotent, 1 arrow*sub, 2 sub*arrow
    std::size_t block = 0, arrow = 0, sub = 0;
  };
  std::vector<Entry> words;
  RowSpace span(dim);
  auto push_word = [&](Entry e) {
    if (coords_zero(F, e.value) || span.contains(e.value, F)) return;
    Mat one(1, dim, F);
    one.set_row(0, e.value);
    span = span.sum(RowSpace::from_rows(one, F), F);
    words.push_back(std::move(e));
  };
  for (std::size_t a = 0; a < nb; ++a)
    push_word(Entry{E1.idempotent[a], 0, a, 0, 0});
  for (std::size_t w = 0; w < words.size() && span.dim() < dim; ++w)
    for (std::size_t k = 0; k < E1.arrows.size() && span.dim() < dim; ++k) {
      std::vector<Scalar> base = words[w].value;
      push_word(Entry{endo_mul(E1, E1.arrows[k].coords, base), 1, 0, k, w});
      push_word(Entry{endo_mul(E1, base, E1.arrows[k].coords), 2, 0, k, w});
    }
  if (span.dim() < dim) return false;

  Mat M1(dim, dim, F);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) M1.at(r, c) = words[c].value[r];
  std::optional<Mat> inv1 = inverse(M1, F);
  if (!inv1) return false;

  std::vector<Scalar> one1(dim, F.zero()), one2(dim, F.zero());
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t k = 0; k < dim; ++k) {
      one1[k] = F.add(one1[k], E1.idempotent[a][k]);
      one2[k] = F.add(one2[k], E2.idempotent[a][k]);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<int> sigma(nb);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    bool compat = true;
    for (std::size_t a = 0; a < nb && compat; ++a)
      for (std::size_t c = 0; c < nb && compat; ++c) {
        std::size_t sa = static_cast<std::size_t>(sigma[a]);
        std::size_t sc = static_cast<std::size_t>(sigma[c]);
        if (E1.piece_dims[a][c] != E2.piece_dims[sc][sa] ||
            E1.arrow_counts[a][c] != E2.arrow_counts[sc][sa])
          compat = false;
      }
    if (!compat) continue;

    // Candidate images per arrow: combinations of E2's radical basis in the
    // opposite block piece, small coefficients first, then seeded random.
    std::vector<std::vector<std::vector<Scalar>>> cand(E1.arrows.size());
    bool feasible = true;
    for (std::size_t k = 0; k < E1.arrows.size(); ++k) {
      std::size_t sa = static_cast<std::size_t>(sigma[static_cast<std::size_t>(E1.arrows[k].from)]);
      std::size_t sc = static_cast<std::size_t>(sigma[static_cast<std::size_t>(E1.arrows[k].to)]);
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < E2.radical_basis.size(); ++r)
        if (E2.radical_block[r].first == static_cast<int>(sc) &&
            E2.radical_block[r].second == static_cast<int>(sa))
          rows.push_back(r);
      if (rows.empty()) {
        feasible = false;
        break;
      }
      std::size_t d = rows.size();
      if (d <= 4) {
        std::vector<int> t(d, -1);
        while (true) {
          bool allz = true;
          for (int x : t)
            if (x != 0) allz = false;
          if (!allz) {
            std::vector<Scalar> v(dim, F.zero());
            for (std::size_t r = 0; r < d; ++r) {
              if (t[r] == 0) continue;
              Scalar c = F.from_int(t[r]);
              const std::vector<Scalar>& row = E2.radical_basis[rows[r]];
              for (std::size_t q = 0; q < dim; ++q)
                v[q] = F.add(v[q], F.mul(c, row[q]));
            }
            cand[k].push_back(std::move(v));
          }
          std::size_t i = 0;
          while (i < d && t[i] == 1) t[i++] = -1;
          if (i == d) break;
          ++t[i];
        }
      }
      for (int r = 0; r < 8; ++r) {
        std::vector<Scalar> v(dim, F.zero());
        bool nz = false;
        for (std::size_t q = 0; q < d; ++q) {
          Scalar c = F.sample(rng);
          if (F.is_zero(c)) continue;
          nz = true;
          const std::vector<Scalar>& row = E2.radical_basis[rows[q]];
          for (std::size_t x = 0; x < dim; ++x)
            v[x] = F.add(v[x], F.mul(c, row[x]));
        }
        if (nz) cand[k].push_back(std::move(v));
      }
    }
    if (!feasible) continue;

    std::vector<std::size_t> choice(E1.arrows.size(), 0);
    std::size_t tried = 0;
    const std::size_t assign_cap = 50000;
    while (tried < assign_cap) {
      ++tried;
      std::vector<const std::vector<Scalar>*> img;
      for (std::size_t k = 0; k < E1.arrows.size(); ++k)
        img.push_back(&cand[k][choice[k]]);

      // Cheap screen: vanishing arrow products must be preserved.
      bool ok = true;
      for (std::size_t k = 0; k < E1.arrows.size() && ok; ++k)
        for (std::size_t l = 0; l < E1.arrows.size() && ok; ++l) {
          if (E1.arrows[k].from != E1.arrows[l].to) continue;
          std::vector<Scalar> p =
              endo_mul(E1, E1.arrows[k].coords, E1.arrows[l].coords);
          if (coords_zero(F, p) &&
              !coords_zero(F, endo_mul(E2, *img[l], *img[k])))
            ok = false;
        }

      if (ok) {
        std::vector<std::vector<Scalar>> val2(words.size());
        for (std::size_t w = 0; w < words.size(); ++w) {
          const Entry& e = words[w];
          if (e.kind == 0)
            val2[w] = E2.idempotent[static_cast<std::size_t>(sigma[e.block])];
          else if (e.kind == 1)
            val2[w] = endo_mul(E2, val2[e.sub], *img[e.arrow]);
          else
            val2[w] = endo_mul(E2, *img[e.arrow], val2[e.sub]);
        }
        Mat M2(dim, dim, F);
        for (std::size_t c = 0; c < dim; ++c)
          for (std::size_t r = 0; r < dim; ++r) M2.at(r, c) = val2[c][r];
        Mat T = mat_mul(M2, *inv1, F);
        if (rank_of(T, F) == dim && coords_eq(F, apply(T, one1, F), one2)) {
          std::vector<std::vector<Scalar>> col(dim);
          for (std::size_t j = 0; j < dim; ++j) {
            col[j].resize(dim);
            for (std::size_t r = 0; r < dim; ++r) col[j][r] = T.at(r, j);
          }
          bool anti = true;
          for (std::size_t i = 0; i < dim && anti; ++i)
            for (std::size_t j = 0; j < dim && anti; ++j) {
              std::vector<Scalar> lhs = apply(T, E1.product[i][j], F);
              std::vector<Scalar> rhs = endo_mul(E2, col[j], col[i]);
              if (!coords_eq(F, lhs, rhs)) anti = false;
            }
          if (anti) return true;
        }
      }

      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == cand[k].size()) choice[k++] = 0;
      if (k == choice.size()) break;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

namespace {

bool hom_vanishes_all(const PerfectComplex& X, const PerfectComplex& Y) {
  for (int n = Y.lo() - X.hi(); n <= Y.hi() - X.lo(); ++n)
    if (hom_K(X, Y, n).dim != 0) return false;
  return true;
}

std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t maxk) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 1; k <= maxk && k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      out.push_back(pick);
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

WitnessReport recollement_witness_search(const AlgebraBasis& A, const SearchBounds& b) {
  WitnessReport rep;
  rep.conditions_predict_empty = check_all_conditions(A).all_pass;
  EnumerationResult base = enumerate_exceptional(A, b);
  rep.truncated = base.truncated;
  const std::vector<PerfectComplex>& objs = base.objects;
  int n = A.num_vertices();
  std::size_t max_total = static_cast<std::size_t>(std::max(n, 2));
  std::vector<std::vector<std::size_t>> subs =
      index_subsets(objs.size(), max_total > 0 ? max_total - 1 : 0);

  for (const std::vector<std::size_t>& s1 : subs) {
    for (const std::vector<std::size_t>& s2 : subs) {
      if (s1.size() + s2.size() > max_total) continue;
      bool overlap = false;
      for (std::size_t i : s1)
        for (std::size_t j : s2)
          if (i == j) overlap = true;
      if (overlap) continue;
      if (rep.pairs_checked >= b.global_cap) {
        rep.truncated = true;
        return rep;
      }
      ++rep.pairs_checked;

      std::vector<PerfectComplex> parts1, parts2;
      for (std::size_t i : s1) parts1.push_back(objs[i]);
      for (std::size_t j : s2) parts2.push_back(objs[j]);
      WitnessPair wp;
      wp.X = sum_all(A, parts1);
      wp.Y = sum_all(A, parts2);
      if (!hom_vanishes_all(wp.X, wp.Y)) continue;
      wp.hom_vanishes = true;
      wp.x_exceptional = s1.size() == 1 || is_exceptional(wp.X);
      if (!wp.x_exceptional) continue;
      wp.y_exceptional = s2.size() == 1 || is_exceptional(wp.Y);
      if (!wp.y_exceptional) continue;

      std::vector<PerfectComplex> all = parts1;
      all.insert(all.end(), parts2.begin(), parts2.end());
      wp.generation = generates(all, b);
      if (wp.generation.verdict != Generation::Generates) continue;

      // Triangular regime: supports split the vertices with no path from
      // the Y side into the X side. A recollement inducing the pair would
      // make the opposite corner module (1-e)Ae perfect over itself, which
      // forces a finite resolution; a truncated one disqualifies the pair.
      std::set<int> sx = support_set(wp.X), sy = support_set(wp.Y);
      bool disjoint = true;
      for (int v : sx)
        if (sy.count(v)) disjoint = false;
      bool covering = static_cast<int>(sx.size() + sy.size()) == n;
      bool no_back = true;
      for (int w : sy)
        for (int u : sx)
          if (A.piece_dim(w, u) != 0) no_back = false;
      wp.triangular = disjoint && covering && no_back;
      if (wp.triangular) {
        std::vector<int> everts(sx.begin(), sx.end());
        Module P = Module::projective_sum(A, everts);
        Submodule S = zero_submodule(P);
        for (int v : sy) {
          std::size_t d = P.dim_at(v);
          S.at[v] = RowSpace::from_rows(Mat::identity(d, A.field()), A.field());
        }
        if (!is_arrow_stable(P, S))
          throw AlgebraError("corner weight space is not a submodule");
        Module C = submodule_module(P, S);
        if (C.total_dim() == 0) {
          wp.corner_pd = 0;
        } else {
          ResolutionTrace tr = min_resolution(C, b.resolution_cutoff);
          if (!tr.finite) {
            rep.rejected_by_obstruction.push_back(
                shape_string(wp.X) + "  /  " + shape_string(wp.Y) +
                " : corner module resolution exceeds the cutoff");
            continue;
          }
          wp.corner_pd = tr.length;
        }
      }
      rep.pairs.push_back(std::move(wp));
    }
  }
  return rep;
}

ConclusionsReport conclusions_report(const AlgebraBasis& A, const SearchBounds& b) {
  ConclusionsReport rep;
  ConditionReport cond = check_all_conditions(A);
  for (const ConditionEntry& e : cond.entries)
    if (e.overall) rep.qualifying.push_back(e.vertex);
  rep.no_qualifying = rep.qualifying.empty();

  rep.exceptional = enumerate_exceptional(A, b);
  rep.tilting = tilting_from(A, b, rep.exceptional);
  rep.truncated = rep.exceptional.truncated || rep.tilting.truncated;

  auto degrees_with = [](const PerfectComplex& C, int v) {
    std::vector<int> degs;
    for (int i = C.lo(); i <= C.hi(); ++i)
      for (int u : C.summands_at(i))
        if (u == v) {
          degs.push_back(i);
          break;
        }
    return degs;
  };

  for (int v : rep.qualifying) {
    std::string pname = "P_" + vertex_name(A, v);
    for (const PerfectComplex& C : rep.exceptional.objects) {
      std::vector<int> degs = degrees_with(C, v);
      if (degs.size() > 1) {
        rep.at_most_one_degree = false;
        rep.failures.push_back(pname + " appears in " +
                               std::to_string(degs.size()) + " degrees of " +
                               shape_string(C));
      }
      if (!degs.empty()) {
        Module H = homology_at(C, degs.front());
        if (socle_component(H, v).dim() == 0) {
          rep.socle_first_homology = false;
          rep.failures.push_back("socle of the first homology of " +
                                 shape_string(C) + " misses " + pname);
        }
      }
    }
    for (const PerfectComplex& T : rep.tilting.objects) {
      std::vector<int> degs = degrees_with(T, v);
      if (degs.size() != 1) {
        rep.tilting_one_degree = false;
        rep.failures.push_back(pname + " appears in " +
                               std::to_string(degs.size()) +
                               " degrees of tilting " + shape_string(T));
      }
    }
  }

  for (std::size_t i = 0; i < rep.exceptional.objects.size(); ++i)
    for (std::size_t j = 0; j < rep.exceptional.objects.size(); ++j) {
      if (i == j) continue;
      const PerfectComplex& X = rep.exceptional.objects[i];
      const PerfectComplex& Y = rep.exceptional.objects[j];
      if (!hom_vanishes_all(X, Y)) continue;
      std::set<int> sx = support_set(X), sy = support_set(Y);
      for (int v : rep.qualifying)
        if (sx.count(v) && sy.count(v)) {
          rep.disjoint_supports = false;
          rep.failures.push_back("hom-orthogonal pair shares qualifying vertex " +
                                 vertex_name(A, v) + ": " + shape_string(X) +
                                 "  /  " + shape_string(Y));
        }
    }

  for (const PerfectComplex& T : rep.tilting.objects)
    for (int i = T.lo(); i <= T.hi(); ++i)
      if (T.summands_at(i).empty()) {
        rep.tilting_gap_free = false;
        rep.failures.push_back("degree gap in tilting " + shape_string(T));
        break;
      }

  rep.all_pass = rep.at_most_one_degree && rep.socle_first_homology &&
                 rep.disjoint_supports && rep.tilting_one_degree &&
                 rep.tilting_gap_free;
  return rep;
}

}  // namespace qperf
