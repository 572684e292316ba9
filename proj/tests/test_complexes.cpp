#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qperf/complex.hpp"

using namespace qperf;

namespace {

int vx(const AlgebraBasis& A, const std::string& label) {
  return A.presentation().vertex_index(label);
}

AlgebraElement piece_el(const AlgebraBasis& A, int i, int j, std::size_t k) {
  return AlgebraElement::from_path(A, A.piece(i, j).at(k));
}

// P_y in degree -1 mapping onto the radical part of P_x in degree 0.
PerfectComplex two_term(const AlgebraBasis& A) {
  int x = vx(A, "x"), y = vx(A, "y");
  return PerfectComplex(A, -1, {{y}, {x}}, {{{piece_el(A, x, y, 0)}}});
}

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

}  // namespace

TEST_CASE("two-term complex basics") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);
  X.validate();

  CHECK(X.lo() == -1);
  CHECK(X.hi() == 0);
  CHECK(X.total_summands() == 2);
  CHECK(X.summands_at(-1) == std::vector<int>{y});
  CHECK(X.summands_at(0) == std::vector<int>{x});
  CHECK(X.summands_at(3).empty());
  CHECK(is_minimal(X));
  CHECK(length_of(X) == 2);

  std::map<std::pair<int, int>, int> mult{{{-1, y}, 1}, {{0, x}, 1}};
  CHECK(X.multiplicities() == mult);
  CHECK(X.k0_class() == std::vector<std::int64_t>{x == 0 ? 1 : -1, x == 0 ? -1 : 1});

  PerfectComplex Z = PerfectComplex::zero(A);
  CHECK(Z.is_zero());
  CHECK(length_of(Z) == 0);
  CHECK(PerfectComplex::stalk(A, x, 4).multiplicities() ==
        std::map<std::pair<int, int>, int>{{{4, x}, 1}});

  PerfectComplex Xs = shift(X, 2);
  CHECK(Xs.lo() == -3);
  CHECK(Xs.hi() == -2);
  Xs.validate();
  CHECK(shift(Xs, -2).multiplicities() == X.multiplicities());

  // Boundary degrees without summands are dropped on construction.
  PerfectComplex padded(A, 4, {{}, {x}, {}},
                        {PerfectComplex::Blocks{{}}, PerfectComplex::Blocks{}});
  CHECK(padded.lo() == 5);
  CHECK(padded.hi() == 5);
}

TEST_CASE("malformed complexes are rejected") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");

  CHECK_THROWS_AS(PerfectComplex(A, 0, {{x}, {y}}, {}), AlgebraError);
  CHECK_THROWS_AS(PerfectComplex(A, 0, {{x}}, {{{AlgebraElement(A)}}}),
                  AlgebraError);

  // Unit entry between mismatched vertices sits outside its piece.
  PerfectComplex bad_piece(A, -1, {{y}, {x}}, {{{AlgebraElement::unit(A, x)}}});
  CHECK_THROWS_AS(bad_piece.validate(), AlgebraError);

  // Identity twice does not square to zero.
  AlgebraElement ey = AlgebraElement::unit(A, y);
  PerfectComplex bad_square(A, 0, {{y}, {y}, {y}}, {{{ey}}, {{ey}}});
  CHECK_THROWS_AS(bad_square.validate(), AlgebraError);

  // The nilpotent loop does square to zero.
  AlgebraElement rh = piece_el(A, y, y, 1);
  PerfectComplex loops(A, 0, {{y}, {y}, {y}}, {{{rh}}, {{rh}}});
  loops.validate();
  CHECK(is_minimal(loops));
}

TEST_CASE("chain maps compose and cone off") {
  AlgebraBasis A = load_algebra("ex211.alg");
  PerfectComplex X = two_term(A);

  ChainMap id = identity_chain_map(X);
  CHECK(chain_map_ok(id));
  ChainMap sq = compose(id, id);
  CHECK(chain_map_ok(sq));
  for (std::size_t i = 0; i < id.blocks.size(); ++i)
    for (std::size_t s = 0; s < id.blocks[i].size(); ++s)
      for (std::size_t t = 0; t < id.blocks[i][s].size(); ++t)
        CHECK(eq(sq.blocks[i][s][t], id.blocks[i][s][t]));

  PerfectComplex C = cone(id);
  C.validate();
  CHECK(C.lo() == -2);
  CHECK(C.hi() == 0);
  MinimizeResult mr = minimize(C);
  CHECK(mr.complex.is_zero());
  CHECK_FALSE(mr.was_minimal);

  // A hom representative is an honest chain map.
  HomResult h = hom_K(X, X, 0, true);
  REQUIRE(h.reps.size() == h.dim);
  for (const ChainMap& f : h.reps) CHECK(chain_map_ok(f));
}

TEST_CASE("hom spaces in the homotopy category") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);
  PerfectComplex Px = PerfectComplex::stalk(A, x, 0);
  PerfectComplex Pym1 = PerfectComplex::stalk(A, y, -1);

  CHECK(hom_K(X, X, 0).dim == 3);
  CHECK(hom_K(Px, X, 0).dim == 2);
  CHECK(hom_K(X, Px, 0).dim == 1);
  CHECK(hom_K(Pym1, X, 0).dim == 1);
  CHECK(hom_K(X, Pym1, 0).dim == 2);
  CHECK(hom_K(X, X, 1).dim == 0);
  CHECK(hom_K(X, X, -1).dim == 0);

  // Misaligned placement of the projective sees the complex in degree -1.
  CHECK(hom_K(PerfectComplex::stalk(A, x, 1), X, -1).dim == 2);

  // Endomorphism sizes of the three natural two-summand sums.
  PerfectComplex T1 = sum_complex(Px, PerfectComplex::stalk(A, y, 0));
  PerfectComplex T2 = sum_complex(Px, X);
  PerfectComplex T3 = sum_complex(X, Pym1);
  CHECK(hom_K(T1, T1, 0).dim == 5);
  CHECK(hom_K(T2, T2, 0).dim == 8);
  CHECK(hom_K(T3, T3, 0).dim == 8);

  // Shifting the target shifts the hom degree.
  for (int k : {1, 2, -1})
    for (int n : {-1, 0, 1})
      CHECK(hom_K(X, shift(X, k), n).dim == hom_K(X, X, n + k).dim);

  CHECK(hom_K(X, PerfectComplex::zero(A), 0).dim == 0);
}

TEST_CASE("euler characteristic matches the summand pairing") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);
  PerfectComplex T2 = sum_complex(PerfectComplex::stalk(A, x, 0), X);
  PerfectComplex Py = PerfectComplex::stalk(A, y, -1);

  CHECK(euler_hom(X, X) == euler_pairing(X, X));
  CHECK(euler_hom(X, T2) == euler_pairing(X, T2));
  CHECK(euler_hom(T2, X) == euler_pairing(T2, X));
  CHECK(euler_hom(Py, T2) == euler_pairing(Py, T2));
}

TEST_CASE("minimization strips contractible pairs") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int y = vx(A, "y");
  PerfectComplex X = two_term(A);

  CHECK(minimize(X).was_minimal);

  PerfectComplex contractible(A, -1, {{y}, {y}},
                              {{{AlgebraElement::unit(A, y)}}});
  contractible.validate();
  PerfectComplex M = sum_complex(X, contractible);
  M.validate();
  CHECK_FALSE(is_minimal(M));
  MinimizeResult mr = minimize(M);
  CHECK_FALSE(mr.was_minimal);
  CHECK(mr.complex.multiplicities() == X.multiplicities());
  mr.complex.validate();
  CHECK(is_minimal(mr.complex));
  CHECK(minimize(mr.complex).was_minimal);

  // Hom dimensions only depend on the homotopy class.
  CHECK(hom_K(M, X, 0).dim == hom_K(X, X, 0).dim);
  CHECK(hom_K(X, M, 0).dim == 3);
  CHECK(hom_K(M, M, 0).dim == 3);
  CHECK(length_of(M) == 2);
}

TEST_CASE("homology of a two-term complex") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);

  Module H0 = homology_at(X, 0);
  H0.validate();
  CHECK(H0.dim_at(x) == 2);
  CHECK(H0.dim_at(y) == 0);

  Module Hm1 = homology_at(X, -1);
  Hm1.validate();
  CHECK(Hm1.dim_at(x) == 0);
  CHECK(Hm1.dim_at(y) == 1);

  CHECK(homology_at(X, 1).total_dim() == 0);
  CHECK(homology_at(X, -2).total_dim() == 0);

  Module HP = homology_at(PerfectComplex::stalk(A, x, 0), 0);
  CHECK(HP.dim_at(x) == 2);
  CHECK(HP.dim_at(y) == 1);
}

TEST_CASE("self-orthogonality and indecomposability") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);
  PerfectComplex Px = PerfectComplex::stalk(A, x, 0);

  CHECK(is_exceptional(X));
  CHECK(is_exceptional(Px));
  CHECK(is_exceptional(sum_complex(Px, X)));
  CHECK(is_exceptional(sum_complex(X, PerfectComplex::stalk(A, y, -1))));

  // A gap of two degrees between copies of P_x leaves a degree-2 hom.
  PerfectComplex spread = sum_complex(Px, shift(Px, 2));
  CHECK(hom_K(spread, spread, 2).dim == 2);
  CHECK_FALSE(is_exceptional(spread));

  CHECK(is_indecomposable(X));
  CHECK(is_indecomposable(Px));
  CHECK(is_indecomposable(PerfectComplex::stalk(A, y, 5)));
  CHECK_FALSE(is_indecomposable(sum_complex(X, X)));
  CHECK_FALSE(is_indecomposable(sum_complex(Px, X)));
  CHECK_FALSE(is_indecomposable(PerfectComplex::zero(A)));
}

TEST_CASE("isomorphism testing in the homotopy category") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");
  PerfectComplex X = two_term(A);

  CHECK(iso_K(X, X));
  CHECK(iso_K(PerfectComplex::zero(A), PerfectComplex::zero(A)));
  CHECK_FALSE(iso_K(X, PerfectComplex::zero(A)));
  CHECK_FALSE(iso_K(X, shift(X, 1)));
  CHECK_FALSE(iso_K(X, sum_complex(X, X)));
  CHECK_FALSE(iso_K(PerfectComplex::stalk(A, x, 0),
                    PerfectComplex::stalk(A, y, 0)));

  // Scaling the differential leaves the isomorphism class alone.
  AlgebraElement al2 = piece_el(A, x, y, 0);
  al2.scale_in(A.field().from_int(2));
  PerfectComplex X2(A, -1, {{y}, {x}}, {{{al2}}});
  CHECK(iso_K(X, X2));

  // Contractible summands do not change the class.
  PerfectComplex contractible(A, -1, {{y}, {y}},
                              {{{AlgebraElement::unit(A, y)}}});
  CHECK(iso_K(sum_complex(X, contractible), X));
  CHECK(iso_K(two_term(A), X));
}

TEST_CASE("complexes round trip through json") {
  AlgebraBasis A = load_algebra("ex211.alg");
  PerfectComplex X = two_term(A);

  nlohmann::json j = complex_to_json(X);
  PerfectComplex back = complex_from_json(A, j);
  CHECK(back.lo() == X.lo());
  CHECK(back.multiplicities() == X.multiplicities());
  CHECK(iso_K(back, X));

  nlohmann::json jz = complex_to_json(PerfectComplex::zero(A));
  CHECK(complex_from_json(A, jz).is_zero());

  nlohmann::json broken = j;
  broken["summands"][0][0] = "nosuchvertex";
  CHECK_THROWS_AS(complex_from_json(A, broken), AlgebraError);
}

TEST_CASE("resolutions become minimal complexes") {
  AlgebraBasis A2 = load_algebra("a2.alg");
  int ax = vx(A2, "x"), ay = vx(A2, "y");
  ResolutionTrace ta = min_resolution(Module::simple(A2, ax), 10);
  REQUIRE(ta.finite);
  PerfectComplex R = resolution_complex(A2, ta);
  R.validate();
  CHECK(R.lo() == -1);
  CHECK(R.hi() == 0);
  CHECK(R.summands_at(-1) == std::vector<int>{ay});
  CHECK(R.summands_at(0) == std::vector<int>{ax});
  CHECK(is_minimal(R));
  Module H0 = homology_at(R, 0);
  CHECK(H0.dim_at(ax) == 1);
  CHECK(H0.dim_at(ay) == 0);
  CHECK(homology_at(R, -1).total_dim() == 0);

  AlgebraBasis A = load_algebra("ex211.alg");
  int y = vx(A, "y");
  ResolutionTrace ty = min_resolution(Module::simple(A, y), 3);
  CHECK(ty.truncated);
  PerfectComplex Ry = resolution_complex(A, ty);
  Ry.validate();
  CHECK(Ry.lo() == -3);
  CHECK(Ry.hi() == 0);
  CHECK(is_minimal(Ry));
  Module Hy = homology_at(Ry, 0);
  CHECK(Hy.dim_at(y) == 1);
  CHECK(Hy.total_dim() == 1);
  CHECK(homology_at(Ry, -1).total_dim() == 0);
  CHECK(homology_at(Ry, -2).total_dim() == 0);
  CHECK(homology_at(Ry, -3).total_dim() == 1);

  CHECK(resolution_complex(A, min_resolution(Module::zero(A), 5)).is_zero());
}
