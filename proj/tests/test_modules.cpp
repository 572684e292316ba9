#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qperf/module.hpp"

using namespace qperf;

namespace {

int vx(const AlgebraBasis& A, const std::string& label) {
  return A.presentation().vertex_index(label);
}

// Coordinate vector of a basis path inside M = A e_src(p), piece layout.
std::vector<Scalar> unit_vec(std::size_t n, std::size_t i, const Field& F) {
  std::vector<Scalar> v(n, F.zero());
  v[i] = F.one();
  return v;
}

void check_submodule(const Module& M, const Submodule& S) {
  CHECK(S.at.size() == static_cast<std::size_t>(M.num_vertices()));
  for (int v = 0; v < M.num_vertices(); ++v)
    CHECK(S.at[v].ambient_dim() == M.dim_at(v));
  CHECK(is_arrow_stable(M, S));
}

}  // namespace

TEST_CASE("projectives of the two-loop example") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");

  Module Px = Module::projective(A, x);
  Px.validate();
  CHECK(Px.dim_at(x) == 2);  // e_x, de
  CHECK(Px.dim_at(y) == 1);  // al
  CHECK(Px.total_dim() == 3);

  Module Py = Module::projective(A, y);
  Py.validate();
  CHECK(Py.dim_at(x) == 0);
  CHECK(Py.dim_at(y) == 2);  // e_y, rh
  CHECK(is_projective_module(Px));
  CHECK(is_projective_module(Py));
  CHECK(is_projective_module(direct_sum(Px, Py)));

  Module Sx = Module::simple(A, x);
  Sx.validate();
  CHECK(Sx.total_dim() == 1);
  CHECK_FALSE(is_projective_module(Sx));
  CHECK_FALSE(is_projective_module(Module::simple(A, y)));

  // dim Hom(A e_i, M) = dim M_i
  for (int v : {x, y}) {
    Module P = Module::projective(A, v);
    CHECK(hom_modules(P, Px).size() == Px.dim_at(v));
    CHECK(hom_modules(P, Py).size() == Py.dim_at(v));
    CHECK(hom_modules(P, Sx).size() == Sx.dim_at(v));
  }
  for (const ModuleMap& f : hom_modules(Py, Px)) f.validate();
}

TEST_CASE("socle, radical and trace in the two-loop example") {
  AlgebraBasis A = load_algebra("ex211.alg");
  const Field& F = A.field();
  int x = vx(A, "x"), y = vx(A, "y");
  Module Px = Module::projective(A, x);
  Module Py = Module::projective(A, y);

  // soc(P_x) is spanned by de at x and al at y.
  Submodule soc = socle_of(Px);
  check_submodule(Px, soc);
  CHECK(soc.at[x].dim() == 1);
  CHECK(soc.at[y].dim() == 1);
  CHECK(soc.at[x].contains(unit_vec(2, 1, F), F));   // de is the second path
  CHECK_FALSE(soc.at[x].contains(unit_vec(2, 0, F), F));
  CHECK(soc.at[y].contains(unit_vec(1, 0, F), F));

  Submodule socx = socle_component(Px, x);
  check_submodule(Px, socx);
  CHECK(socx.dim() == 1);
  CHECK(socx.at[y].dim() == 0);

  Submodule rad = radical_of(Py);
  check_submodule(Py, rad);
  CHECK(rad.at[x].dim() == 0);
  CHECK(rad.at[y].dim() == 1);
  CHECK(rad.at[y].contains(unit_vec(2, 1, F), F));   // rh

  // Only Hom(P_y, P_x) is nonzero across the two projectives.
  CHECK(hom_modules(Py, Px).size() == 1);
  CHECK(hom_modules(Px, Py).empty());
  Submodule tr = trace_submodule(Py, Px);
  check_submodule(Px, tr);
  CHECK(tr.dim() == 1);
  CHECK(tr.at[y].dim() == 1);  // span of al
  CHECK(trace_submodule(Px, Py).dim() == 0);

  // The trace of P_y inside P_x meets the socle exactly in its y part.
  Submodule cap = meet(soc, tr, F);
  CHECK(cap.dim() == 1);
  CHECK(contains(soc, tr, F));
  CHECK_FALSE(contains(socle_component(Px, x), tr, F));
}

TEST_CASE("generated submodules, quotients and kernels") {
  AlgebraBasis A = load_algebra("ex211.alg");
  const Field& F = A.field();
  int x = vx(A, "x"), y = vx(A, "y");
  Module Px = Module::projective(A, x);

  // A de = span{de}: both de*de and al*de die.
  Submodule cyc = generated_submodule(Px, {{x, unit_vec(2, 1, F)}});
  check_submodule(Px, cyc);
  CHECK(cyc.dim() == 1);
  CHECK(cyc.at[x].dim() == 1);

  // A e_x = all of P_x.
  Submodule full = generated_submodule(Px, {{x, unit_vec(2, 0, F)}});
  CHECK(submodule_eq(full, full_submodule(Px), F));

  ModuleMap incl;
  Module sub = submodule_module(Px, cyc, &incl);
  sub.validate();
  incl.validate();
  CHECK(sub.total_dim() == 1);
  CHECK(sub.dim_at(x) == 1);

  ModuleMap proj;
  Module quo = quotient_module(Px, socle_of(Px), &proj);
  quo.validate();
  proj.validate();
  CHECK(quo.dim_at(x) == 1);
  CHECK(quo.dim_at(y) == 0);

  Submodule ker = kernel_of(proj);
  check_submodule(Px, ker);
  CHECK(submodule_eq(ker, socle_of(Px), F));
  Submodule img = image_of(proj);
  CHECK(img.dim() == quo.total_dim());

  // top(P_x) = P_x / rad(P_x) is the simple at x.
  Module top = quotient_module(Px, radical_of(Px), nullptr);
  top.validate();
  CHECK(top.dim_at(x) == 1);
  CHECK(top.dim_at(y) == 0);
}

TEST_CASE("duality over the opposite algebra") {
  AlgebraBasis A = load_algebra("ex45.alg");
  AlgebraBasis Aop = A.opposite();
  AlgebraBasis Aopop = Aop.opposite();
  int x = vx(A, "x"), y = vx(A, "y");

  Module Px = Module::projective(A, x);
  Module D = dual_module(Px, Aop);
  D.validate();
  CHECK(D.dim_at(x) == Px.dim_at(x));
  CHECK(D.dim_at(y) == Px.dim_at(y));

  // Double dual gives back the same dimensions and action matrices.
  Module DD = dual_module(D, Aopop);
  DD.validate();
  const Field& F = A.field();
  CHECK(DD.dims() == Px.dims());
  for (std::size_t a = 0; a < A.presentation().arrows.size(); ++a)
    CHECK(mat_eq(DD.action(static_cast<int>(a)), Px.action(static_cast<int>(a)), F));

  // Socle of the dual has the dimensions of the top of the original.
  Submodule radP = radical_of(Px);
  Submodule socD = socle_of(D);
  for (int v = 0; v < A.num_vertices(); ++v)
    CHECK(socD.at[v].dim() == Px.dim_at(v) - radP.at[v].dim());
}

TEST_CASE("minimal resolutions") {
  AlgebraBasis A = load_algebra("ex211.alg");
  int x = vx(A, "x"), y = vx(A, "y");

  // P_y is projective: resolution of length 0.
  ResolutionTrace rp = min_resolution(Module::projective(A, y), 20);
  CHECK(rp.finite);
  CHECK(rp.length == 0);
  REQUIRE(rp.covers.size() == 1);
  CHECK(rp.covers[0] == std::vector<int>{y});

  // S_y has the periodic resolution ... -> P_y -> P_y -> S_y.
  ResolutionTrace ry = min_resolution(Module::simple(A, y), 20);
  CHECK_FALSE(ry.finite);
  CHECK(ry.truncated);
  CHECK(ry.covers.size() == 21);
  for (const std::vector<int>& c : ry.covers) CHECK(c == std::vector<int>{y});

  // Differential components stay in the radical: no unit coefficients.
  const Field& F = A.field();
  for (const auto& layer : ry.diffs)
    for (const auto& row : layer)
      for (const AlgebraElement& z : row)
        for (int v = 0; v < A.num_vertices(); ++v)
          CHECK(F.is_zero(z.coeff(A.unit_index(v))));

  // S_x is also periodic here (its syzygy is S_x again via de).
  ResolutionTrace rx = min_resolution(Module::simple(A, x), 6);
  CHECK(rx.truncated);

  AlgebraBasis B = load_algebra("a2.alg");
  int bx = vx(B, "x"), by = vx(B, "y");
  ResolutionTrace ra = min_resolution(Module::simple(B, bx), 20);
  CHECK(ra.finite);
  CHECK(ra.length == 1);
  REQUIRE(ra.covers.size() == 2);
  CHECK(ra.covers[0] == std::vector<int>{bx});
  CHECK(ra.covers[1] == std::vector<int>{by});
  REQUIRE(ra.diffs.size() == 1);
  CHECK_FALSE(ra.diffs[0][0][0].is_zero());
  CHECK(ra.diffs[0][0][0].in_piece(bx, by));  // the arrow path, x to y

  // S_y = P_y in the a2 quiver.
  ResolutionTrace rb = min_resolution(Module::simple(B, by), 20);
  CHECK(rb.finite);
  CHECK(rb.length == 0);
}

TEST_CASE("resolution differentials compose to zero") {
  AlgebraBasis A = load_algebra("ex45.alg");
  int y = vx(A, "y");
  ResolutionTrace r = min_resolution(Module::simple(A, y), 8);
  REQUIRE(r.covers.size() >= 3);
  // d_k . d_{k+1} = 0 blockwise: sum over the middle summand.
  for (std::size_t k = 0; k + 1 < r.diffs.size(); ++k) {
    const auto& d1 = r.diffs[k];      // P_{k+1} -> P_k
    const auto& d2 = r.diffs[k + 1];  // P_{k+2} -> P_{k+1}
    for (std::size_t t = 0; t < d1.size(); ++t)
      for (std::size_t s = 0; s < d2[0].size(); ++s) {
        AlgebraElement acc(A);
        for (std::size_t m = 0; m < d2.size(); ++m)
          acc.add_in(mul(d2[m][s], d1[t][m]));
        CHECK(acc.is_zero());
      }
  }
}

TEST_CASE("hom spaces over the three-vertex example") {
  AlgebraBasis A = load_algebra("ex47.alg");
  int x = vx(A, "x"), y = vx(A, "y"), z = vx(A, "z");
  Module Px = Module::projective(A, x);
  Module Py = Module::projective(A, y);
  Module Pz = Module::projective(A, z);

  // Hom(A e_u, A e_w) has the dimension of e_u A e_w.
  CHECK(hom_modules(Px, Py).size() == static_cast<std::size_t>(A.piece_dim(y, x)));
  CHECK(hom_modules(Py, Px).size() == static_cast<std::size_t>(A.piece_dim(x, y)));
  CHECK(hom_modules(Py, Pz).size() == static_cast<std::size_t>(A.piece_dim(z, y)));
  CHECK(hom_modules(Pz, Px).size() == static_cast<std::size_t>(A.piece_dim(x, z)));
  for (const ModuleMap& f : hom_modules(Px, Py)) f.validate();

  // Composition of projective homs matches multiplication in the algebra:
  // rank of the pairing Hom(P_y,P_x) x Hom(P_z,P_y) -> Hom(P_z,P_x).
  std::vector<ModuleMap> fyx = hom_modules(Py, Px);
  std::vector<ModuleMap> fzy = hom_modules(Pz, Py);
  for (const ModuleMap& g : fyx)
    for (const ModuleMap& f : fzy) compose(g, f).validate();
}
