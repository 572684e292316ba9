#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qperf/complex.hpp"
#include "qperf/criteria.hpp"
#include "qperf/module.hpp"

using namespace qperf;

namespace {

const std::vector<std::string> kCorpus = {
    "a2.alg",   "empty.alg",     "ex211.alg", "ex45.alg",
    "ex47.alg", "kronecker.alg", "local3.alg"};

long long euler_hom(const PerfectComplex& X, const PerfectComplex& Y) {
  long long chi = 0;
  for (int n = Y.lo() - X.hi(); n <= Y.hi() - X.lo(); ++n) {
    long long d = static_cast<long long>(hom_K(X, Y, n).dim);
    chi += (n % 2 == 0) ? d : -d;
  }
  return chi;
}

long long euler_pairing(const PerfectComplex& X, const PerfectComplex& Y) {
  const AlgebraBasis& A = X.algebra();
  long long chi = 0;
  for (int i = X.lo(); i <= X.hi(); ++i)
    for (int j = Y.lo(); j <= Y.hi(); ++j) {
      long long c = 0;
      for (int u : X.summands_at(i))
        for (int w : Y.summands_at(j))
          c += static_cast<long long>(A.piece(w, u).size());
      chi += ((j - i) % 2 == 0) ? c : -c;
    }
  return chi;
}

int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random element of e_a A e_c, allowing length-zero parts so minimization
// has something to strip.
AlgebraElement random_entry(const AlgebraBasis& A, int a, int c,
                            std::mt19937_64& rng) {
  AlgebraElement z(A);
  for (int k : A.piece(a, c))
    if (rng() % 2 == 0) z.coeff(k) = A.field().sample(rng);
  return z;
}

PerfectComplex random_two_term(const AlgebraBasis& A, int lo,
                               std::mt19937_64& rng) {
  int n = A.num_vertices();
  std::vector<int> src, tgt;
  for (int i = rand_int(rng, 1, 2); i > 0; --i)
    src.push_back(rand_int(rng, 0, n - 1));
  for (int i = rand_int(rng, 1, 2); i > 0; --i)
    tgt.push_back(rand_int(rng, 0, n - 1));
  PerfectComplex::Blocks d;
  for (int a : tgt) {
    std::vector<AlgebraElement> row;
    for (int c : src) row.push_back(random_entry(A, a, c, rng));
    d.push_back(std::move(row));
  }
  return PerfectComplex(A, lo, {src, tgt}, {d});
}

// Stalks, two-term complexes, and contiguous sums of the two.
PerfectComplex random_complex(const AlgebraBasis& A, std::mt19937_64& rng) {
  int n = A.num_vertices();
  int lo = rand_int(rng, -2, 0);
  switch (rng() % 3) {
    case 0:
      return PerfectComplex::stalk(A, rand_int(rng, 0, n - 1), lo);
    case 1:
      return random_two_term(A, lo, rng);
    default: {
      PerfectComplex a = random_two_term(A, lo, rng);
      PerfectComplex b =
          PerfectComplex::stalk(A, rand_int(rng, 0, n - 1), lo + rng() % 2);
      return sum_complex(a, b);
    }
  }
}

std::string family_vertex(int i) { return "v" + std::to_string(i); }

/* Connected, acyclic, loop-free quiver on 2-4 vertices: a spanning arrow
   into each later vertex plus an optional chord, always pointing forward.
   Truncation orders 2-4 and arrow lengths strictly below both ends. */
TensorFamilySpec random_family(std::mt19937_64& rng) {
  TensorFamilySpec spec;
  int n = rand_int(rng, 2, 4);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    order[i] = rand_int(rng, 2, 4);
    spec.vertex_loops.push_back({family_vertex(i), order[i]});
  }
  std::vector<std::pair<int, int>> used;
  int label = 0;
  auto add_arrow = [&](int s, int t) {
    for (auto& [a, b] : used)
      if (a == s && b == t) return;
    used.push_back({s, t});
    int bound = std::min(order[s], order[t]) - 1;
    spec.arrows.push_back({"a" + std::to_string(label++), family_vertex(s),
                           family_vertex(t), rand_int(rng, 1, bound)});
  };
  for (int i = 1; i < n; ++i) add_arrow(rand_int(rng, 0, i - 1), i);
  if (n > 2 && rng() % 2 == 0) {
    int t = rand_int(rng, 1, n - 1);
    add_arrow(rand_int(rng, 0, t - 1), t);
  }
  return spec;
}

}  // namespace

TEST_CASE("euler characteristics match the multiplicity pairing") {
  std::mt19937_64 rng(4242);
  std::size_t pairs = 0;
  for (const std::string& name : kCorpus) {
    AlgebraBasis A = load_algebra(name);
    std::vector<PerfectComplex> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(random_complex(A, rng));
    for (const PerfectComplex& X : xs)
      for (const PerfectComplex& Y : xs) {
        CHECK(euler_hom(X, Y) == euler_pairing(X, Y));
        ++pairs;
      }
  }
  CHECK(pairs >= 200);
}

TEST_CASE("minimization is idempotent and hom-invariant") {
  std::mt19937_64 rng(777);
  for (const std::string& name : kCorpus) {
    AlgebraBasis A = load_algebra(name);
    for (int i = 0; i < 8; ++i) {
      PerfectComplex X = random_complex(A, rng);
      PerfectComplex Y = random_complex(A, rng);
      PerfectComplex M = minimize(X).complex;
      CHECK(is_minimal(M));
      if (M.is_zero()) {
        CHECK(minimize(M).complex.is_zero());
      } else {
        PerfectComplex M2 = minimize(M).complex;
        CHECK(M2.lo() == M.lo());
        CHECK(M2.multiplicities() == M.multiplicities());
        for (int n = Y.lo() - X.hi() - 1; n <= Y.hi() - X.lo() + 1; ++n)
          CHECK(hom_K(X, Y, n).dim == hom_K(M, Y, n).dim);
        for (int n = X.lo() - Y.hi() - 1; n <= X.hi() - Y.lo() + 1; ++n)
          CHECK(hom_K(Y, X, n).dim == hom_K(Y, M, n).dim);
      }
    }
  }
}

TEST_CASE("dual dimensions are involutive") {
  std::mt19937_64 rng(90210);
  for (const std::string& name : kCorpus) {
    AlgebraBasis A = load_algebra(name);
    AlgebraBasis Aop = A.opposite();
    AlgebraBasis Aopop = Aop.opposite();
    std::vector<Module> mods;
    for (int v = 0; v < A.num_vertices(); ++v) {
      mods.push_back(Module::projective(A, v));
      mods.push_back(Module::simple(A, v));
    }
    for (int i = 0; i < 3; ++i) {
      PerfectComplex X = random_complex(A, rng);
      mods.push_back(homology_at(X, rand_int(rng, X.lo(), X.hi())));
    }
    for (const Module& M : mods) {
      Module D = dual_module(M, Aop);
      D.validate();
      CHECK(D.total_dim() == M.total_dim());
      Module DD = dual_module(D, Aopop);
      DD.validate();
      CHECK(DD.dims() == M.dims());
    }
  }
}

TEST_CASE("multiplication is associative on every corpus basis triple") {
  for (const std::string& name : kCorpus) {
    AlgebraBasis A = load_algebra(name);
    for (int p = 0; p < A.dim(); ++p)
      for (int q = 0; q < A.dim(); ++q)
        for (int r = 0; r < A.dim(); ++r) {
          AlgebraElement pq(A), qr(A);
          for (auto& [k, c] : A.basis_product(p, q)) pq.coeff(k) = c;
          for (auto& [k, c] : A.basis_product(q, r)) qr.coeff(k) = c;
          AlgebraElement left = mul(pq, AlgebraElement::from_path(A, r));
          AlgebraElement right = mul(AlgebraElement::from_path(A, p), qr);
          CHECK(eq(left, right));
          if (!eq(left, right)) return;
        }
  }
}

TEST_CASE("random tensor families satisfy the socle conditions") {
  std::mt19937_64 rng(20260814);
  int families = 0;
  for (int t = 0; t < 50; ++t) {
    TensorFamilySpec spec = random_family(rng);
    AlgebraBasis T = build_tensor_family(spec);
    CHECK(T.connected());
    ConditionReport r = check_all_conditions(T);
    CHECK(r.all_pass);
    ++families;
  }
  CHECK(families == 50);
}
