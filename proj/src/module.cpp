#include "qperf/module.hpp"

#include <algorithm>
#include <memory>
#include <utility>

namespace qperf {

namespace {

// Index of the length-1 basis path of an arrow. Relations have length >= 2,
// so every arrow survives in the normal-form basis.
int arrow_path_index(const AlgebraBasis& A, int arrow) {
  for (int k = 0; k < A.dim(); ++k) {
    const PathNF& p = A.path(k);
    if (p.length == 1 && p.arrows[0] == arrow) return k;
  }
  throw AlgebraError("arrow missing from the basis: " +
                     A.presentation().arrows[arrow].label);
}

// Subtracts the RREF-projection of v onto S, leaving pivot coordinates zero.
void reduce_against(const RowSpace& S, std::vector<Scalar>& v, const Field& F) {
  const Mat& B = S.basis();
  for (std::size_t r = 0; r < B.rows(); ++r) {
    std::size_t p = S.pivots()[r];
    if (F.is_zero(v[p])) continue;
    Scalar c = v[p];
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = F.sub(v[j], F.mul(c, B.at(r, j)));
  }
}

std::vector<std::size_t> complement_columns(const RowSpace& S) {
  std::vector<std::size_t> out;
  std::size_t r = 0;
  for (std::size_t j = 0; j < S.ambient_dim(); ++j) {
    if (r < S.pivots().size() && S.pivots()[r] == j) {
      ++r;
      continue;
    }
    out.push_back(j);
  }
  return out;
}

void require_same_algebra(const Module& M, const Module& N, const char* what) {
  if (&M.algebra() != &N.algebra())
    throw AlgebraError(std::string(what) + " needs modules over one algebra");
}

}  // namespace

Module::Module(const AlgebraBasis& A, std::vector<std::size_t> dims,
               std::vector<Mat> arrow_action)
    : A_(&A), dims_(std::move(dims)), act_(std::move(arrow_action)) {
  const Presentation& P = A.presentation();
  if (dims_.size() != P.vertices.size() || act_.size() != P.arrows.size())
    throw AlgebraError("module data does not match the quiver");
  for (std::size_t a = 0; a < act_.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    if (act_[a].rows() != dims_[ar.tgt] || act_[a].cols() != dims_[ar.src])
      throw AlgebraError("arrow action has the wrong shape: " + ar.label);
  }
}

Module Module::projective(const AlgebraBasis& A, int v) {
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  int nv = A.num_vertices();
  std::vector<std::size_t> dims(nv);
  std::vector<int> pos(A.dim(), -1);
  for (int w = 0; w < nv; ++w) {
    const std::vector<int>& pc = A.piece(v, w);
    dims[w] = pc.size();
    for (std::size_t i = 0; i < pc.size(); ++i) pos[pc[i]] = static_cast<int>(i);
  }
  std::vector<Mat> act;
  act.reserve(P.arrows.size());
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    Mat T(dims[ar.tgt], dims[ar.src], F);
    int ap = arrow_path_index(A, static_cast<int>(a));
    const std::vector<int>& from = A.piece(v, ar.src);
    for (std::size_t j = 0; j < from.size(); ++j)
      for (const auto& [k, c] : A.basis_product(ap, from[j]))
        T.at(pos[k], j) = c;
    act.push_back(std::move(T));
  }
  return Module(A, std::move(dims), std::move(act));
}

Module Module::simple(const AlgebraBasis& A, int v) {
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  std::vector<std::size_t> dims(A.num_vertices(), 0);
  dims[v] = 1;
  std::vector<Mat> act;
  for (const Arrow& ar : P.arrows) act.emplace_back(dims[ar.tgt], dims[ar.src], F);
  return Module(A, std::move(dims), std::move(act));
}

Module Module::zero(const AlgebraBasis& A) {
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  std::vector<std::size_t> dims(A.num_vertices(), 0);
  std::vector<Mat> act;
  for (std::size_t a = 0; a < P.arrows.size(); ++a) act.emplace_back(0, 0, F);
  return Module(A, std::move(dims), std::move(act));
}

Module Module::projective_sum(const AlgebraBasis& A, const std::vector<int>& verts) {
  Module out = Module::zero(A);
  for (int v : verts) out = direct_sum(out, Module::projective(A, v));
  return out;
}

Module direct_sum(const Module& M, const Module& N) {
  require_same_algebra(M, N, "direct sum");
  const AlgebraBasis& A = M.algebra();
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  int nv = A.num_vertices();
  std::vector<std::size_t> dims(nv);
  for (int v = 0; v < nv; ++v) dims[v] = M.dim_at(v) + N.dim_at(v);
  std::vector<Mat> act;
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    Mat T(dims[ar.tgt], dims[ar.src], F);
    const Mat& TM = M.action(static_cast<int>(a));
    const Mat& TN = N.action(static_cast<int>(a));
    for (std::size_t i = 0; i < TM.rows(); ++i)
      for (std::size_t j = 0; j < TM.cols(); ++j) T.at(i, j) = TM.at(i, j);
    for (std::size_t i = 0; i < TN.rows(); ++i)
      for (std::size_t j = 0; j < TN.cols(); ++j)
        T.at(TM.rows() + i, TM.cols() + j) = TN.at(i, j);
    act.push_back(std::move(T));
  }
  return Module(A, std::move(dims), std::move(act));
}

std::size_t Module::total_dim() const {
  std::size_t n = 0;
  for (std::size_t d : dims_) n += d;
  return n;
}

Mat Module::path_matrix(int path_index) const {
  const PathNF& p = A_->path(path_index);
  const Field& F = field();
  if (p.length == 0) return Mat::identity(dims_[p.src], F);
  Mat cur = act_[p.arrows[0]];
  for (std::size_t i = 1; i < p.arrows.size(); ++i)
    cur = mat_mul(act_[p.arrows[i]], cur, F);
  return cur;
}

void Module::validate() const {
  const Presentation& P = A_->presentation();
  const Field& F = field();
  for (const Relation& r : P.relations) {
    Mat acc(dims_[r.tgt], dims_[r.src], F);
    for (const RelTerm& t : r.terms) {
      Mat cur = Mat::identity(dims_[r.src], F);
      for (int a : t.arrows) cur = mat_mul(act_[a], cur, F);
      acc = mat_add(acc, mat_scale(cur, t.coeff, F), F);
    }
    if (!mat_is_zero(acc, F))
      throw AlgebraError("relation does not annihilate the module (line " +
                         std::to_string(r.line) + ")");
  }
}

ModuleMap::ModuleMap(Module src, Module dst, std::vector<Mat> mats)
    : src_(std::move(src)), dst_(std::move(dst)), f_(std::move(mats)) {
  require_same_algebra(src_, dst_, "module map");
  int nv = src_.num_vertices();
  if (f_.size() != static_cast<std::size_t>(nv))
    throw AlgebraError("module map needs one matrix per vertex");
  for (int v = 0; v < nv; ++v)
    if (f_[v].rows() != dst_.dim_at(v) || f_[v].cols() != src_.dim_at(v))
      throw AlgebraError("module map matrix has the wrong shape");
}

ModuleMap ModuleMap::identity(const Module& M) {
  std::vector<Mat> mats;
  for (int v = 0; v < M.num_vertices(); ++v)
    mats.push_back(Mat::identity(M.dim_at(v), M.field()));
  return ModuleMap(M, M, std::move(mats));
}

ModuleMap ModuleMap::zero(const Module& src, const Module& dst) {
  std::vector<Mat> mats;
  for (int v = 0; v < src.num_vertices(); ++v)
    mats.emplace_back(dst.dim_at(v), src.dim_at(v), src.field());
  return ModuleMap(src, dst, std::move(mats));
}

bool ModuleMap::is_zero() const {
  const Field& F = src_.field();
  for (const Mat& m : f_)
    if (!mat_is_zero(m, F)) return false;
  return true;
}

void ModuleMap::validate() const {
  const AlgebraBasis& A = src_.algebra();
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    Mat lhs = mat_mul(f_[ar.tgt], src_.action(static_cast<int>(a)), F);
    Mat rhs = mat_mul(dst_.action(static_cast<int>(a)), f_[ar.src], F);
    if (!mat_eq(lhs, rhs, F))
      throw AlgebraError("matrices do not commute with arrow " + ar.label);
  }
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  const Field& F = f.src().field();
  std::vector<Mat> mats;
  for (int v = 0; v < f.src().num_vertices(); ++v)
    mats.push_back(mat_mul(g.at(v), f.at(v), F));
  return ModuleMap(f.src(), g.dst(), std::move(mats));
}

ModuleMap map_add(const ModuleMap& f, const ModuleMap& g) {
  const Field& F = f.src().field();
  std::vector<Mat> mats;
  for (int v = 0; v < f.src().num_vertices(); ++v)
    mats.push_back(mat_add(f.at(v), g.at(v), F));
  return ModuleMap(f.src(), f.dst(), std::move(mats));
}

ModuleMap map_scale(const ModuleMap& f, const Scalar& c) {
  const Field& F = f.src().field();
  std::vector<Mat> mats;
  for (int v = 0; v < f.src().num_vertices(); ++v)
    mats.push_back(mat_scale(f.at(v), c, F));
  return ModuleMap(f.src(), f.dst(), std::move(mats));
}

bool map_eq(const ModuleMap& f, const ModuleMap& g) {
  const Field& F = f.src().field();
  for (int v = 0; v < f.src().num_vertices(); ++v)
    if (!mat_eq(f.at(v), g.at(v), F)) return false;
  return true;
}

std::vector<ModuleMap> hom_modules(const Module& M, const Module& N) {
  require_same_algebra(M, N, "hom");
  const AlgebraBasis& A = M.algebra();
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  int nv = A.num_vertices();

  // Unknowns: entries of f_v (dim N_v x dim M_v), vertex-major, row-major.
  std::vector<std::size_t> off(nv + 1, 0);
  for (int v = 0; v < nv; ++v) off[v + 1] = off[v] + N.dim_at(v) * M.dim_at(v);
  std::size_t unknowns = off[nv];

  std::size_t rows = 0;
  for (const Arrow& ar : P.arrows) rows += N.dim_at(ar.tgt) * M.dim_at(ar.src);
  Mat E(rows, unknowns, F);
  std::size_t r0 = 0;
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    const Mat& TM = M.action(static_cast<int>(a));
    const Mat& TN = N.action(static_cast<int>(a));
    std::size_t dNw = N.dim_at(ar.tgt), dMu = M.dim_at(ar.src);
    std::size_t dMw = M.dim_at(ar.tgt), dNu = N.dim_at(ar.src);
    for (std::size_t i = 0; i < dNw; ++i) {
      for (std::size_t j = 0; j < dMu; ++j) {
        std::size_t row = r0 + i * dMu + j;
        for (std::size_t t = 0; t < dMw; ++t) {
          std::size_t col = off[ar.tgt] + i * dMw + t;
          E.at(row, col) = F.add(E.at(row, col), TM.at(t, j));
        }
        for (std::size_t s = 0; s < dNu; ++s) {
          std::size_t col = off[ar.src] + s * dMu + j;
          E.at(row, col) = F.sub(E.at(row, col), TN.at(i, s));
        }
      }
    }
    r0 += dNw * dMu;
  }

  Mat K = kernel_basis(E, F);
  std::vector<ModuleMap> out;
  out.reserve(K.rows());
  for (std::size_t r = 0; r < K.rows(); ++r) {
    std::vector<Mat> mats;
    for (int v = 0; v < nv; ++v) {
      Mat fv(N.dim_at(v), M.dim_at(v), F);
      for (std::size_t i = 0; i < fv.rows(); ++i)
        for (std::size_t j = 0; j < fv.cols(); ++j)
          fv.at(i, j) = K.at(r, off[v] + i * M.dim_at(v) + j);
      mats.push_back(std::move(fv));
    }
    out.emplace_back(M, N, std::move(mats));
  }
  return out;
}

std::size_t Submodule::dim() const {
  std::size_t n = 0;
  for (const RowSpace& s : at) n += s.dim();
  return n;
}

Submodule zero_submodule(const Module& M) {
  Submodule S;
  for (int v = 0; v < M.num_vertices(); ++v) S.at.emplace_back(M.dim_at(v));
  return S;
}

Submodule full_submodule(const Module& M) {
  Submodule S;
  const Field& F = M.field();
  for (int v = 0; v < M.num_vertices(); ++v)
    S.at.push_back(RowSpace::from_rows(Mat::identity(M.dim_at(v), F), F));
  return S;
}

Submodule meet(const Submodule& S, const Submodule& T, const Field& F) {
  Submodule R;
  for (std::size_t v = 0; v < S.at.size(); ++v)
    R.at.push_back(S.at[v].intersect(T.at[v], F));
  return R;
}

Submodule join(const Submodule& S, const Submodule& T, const Field& F) {
  Submodule R;
  for (std::size_t v = 0; v < S.at.size(); ++v) R.at.push_back(S.at[v].sum(T.at[v], F));
  return R;
}

bool contains(const Submodule& S, const Submodule& T, const Field& F) {
  for (std::size_t v = 0; v < S.at.size(); ++v)
    if (!S.at[v].contains(T.at[v], F)) return false;
  return true;
}

bool submodule_eq(const Submodule& S, const Submodule& T, const Field& F) {
  return contains(S, T, F) && contains(T, S, F);
}

bool is_arrow_stable(const Module& M, const Submodule& S) {
  const Presentation& P = M.algebra().presentation();
  const Field& F = M.field();
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    const Mat& B = S.at[ar.src].basis();
    for (std::size_t r = 0; r < B.rows(); ++r) {
      std::vector<Scalar> y = apply(M.action(static_cast<int>(a)), B.row(r), F);
      if (!S.at[ar.tgt].contains(y, F)) return false;
    }
  }
  return true;
}

Submodule generated_submodule(
    const Module& M, const std::vector<std::pair<int, std::vector<Scalar>>>& gens) {
  const AlgebraBasis& A = M.algebra();
  const Field& F = M.field();
  int nv = M.num_vertices();
  std::vector<std::vector<std::vector<Scalar>>> rows(nv);
  for (const auto& [v, vec] : gens) {
    if (vec.size() != M.dim_at(v))
      throw AlgebraError("generator does not match the vertex dimension");
    for (int k = 0; k < A.dim(); ++k) {
      const PathNF& p = A.path(k);
      if (p.src != v) continue;
      rows[p.tgt].push_back(apply(M.path_matrix(k), vec, F));
    }
  }
  Submodule S;
  for (int w = 0; w < nv; ++w) {
    Mat m(rows[w].size(), M.dim_at(w), F);
    for (std::size_t i = 0; i < rows[w].size(); ++i) m.set_row(i, rows[w][i]);
    S.at.push_back(RowSpace::from_rows(m, F));
  }
  return S;
}

Submodule radical_of(const Module& M) {
  const Presentation& P = M.algebra().presentation();
  const Field& F = M.field();
  int nv = M.num_vertices();
  std::vector<std::vector<std::vector<Scalar>>> rows(nv);
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    const Mat& T = M.action(static_cast<int>(a));
    for (std::size_t j = 0; j < T.cols(); ++j) {
      std::vector<Scalar> col(T.rows(), F.zero());
      for (std::size_t i = 0; i < T.rows(); ++i) col[i] = T.at(i, j);
      rows[ar.tgt].push_back(std::move(col));
    }
  }
  Submodule S;
  for (int w = 0; w < nv; ++w) {
    Mat m(rows[w].size(), M.dim_at(w), F);
    for (std::size_t i = 0; i < rows[w].size(); ++i) m.set_row(i, rows[w][i]);
    S.at.push_back(RowSpace::from_rows(m, F));
  }
  return S;
}

Submodule socle_of(const Module& M) {
  const Presentation& P = M.algebra().presentation();
  const Field& F = M.field();
  int nv = M.num_vertices();
  Submodule S;
  for (int u = 0; u < nv; ++u) {
    std::size_t rows = 0;
    for (const Arrow& ar : P.arrows)
      if (ar.src == u) rows += M.dim_at(ar.tgt);
    Mat stack(rows, M.dim_at(u), F);
    std::size_t r0 = 0;
    for (std::size_t a = 0; a < P.arrows.size(); ++a) {
      const Arrow& ar = P.arrows[a];
      if (ar.src != u) continue;
      const Mat& T = M.action(static_cast<int>(a));
      for (std::size_t i = 0; i < T.rows(); ++i)
        for (std::size_t j = 0; j < T.cols(); ++j) stack.at(r0 + i, j) = T.at(i, j);
      r0 += T.rows();
    }
    S.at.push_back(RowSpace::from_rows(kernel_basis(stack, F), F));
  }
  return S;
}

Submodule socle_component(const Module& M, int v) {
  Submodule soc = socle_of(M);
  Submodule S = zero_submodule(M);
  S.at[v] = soc.at[v];
  return S;
}

Submodule kernel_of(const ModuleMap& f) {
  const Field& F = f.src().field();
  Submodule S;
  for (int v = 0; v < f.src().num_vertices(); ++v)
    S.at.push_back(RowSpace::from_rows(kernel_basis(f.at(v), F), F));
  return S;
}

Submodule image_of(const ModuleMap& f) {
  const Field& F = f.src().field();
  Submodule S;
  for (int v = 0; v < f.src().num_vertices(); ++v)
    S.at.push_back(RowSpace::from_rows(transpose(f.at(v), F), F));
  return S;
}

Submodule trace_submodule(const Module& N, const Module& M) {
  const Field& F = M.field();
  Submodule S = zero_submodule(M);
  for (const ModuleMap& f : hom_modules(N, M)) S = join(S, image_of(f), F);
  return S;
}

Module submodule_module(const Module& M, const Submodule& S, ModuleMap* inclusion) {
  const AlgebraBasis& A = M.algebra();
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  int nv = A.num_vertices();
  std::vector<std::size_t> dims(nv);
  for (int v = 0; v < nv; ++v) dims[v] = S.at[v].dim();
  std::vector<Mat> act;
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    Mat T(dims[ar.tgt], dims[ar.src], F);
    const Mat& B = S.at[ar.src].basis();
    for (std::size_t j = 0; j < B.rows(); ++j) {
      std::vector<Scalar> y = apply(M.action(static_cast<int>(a)), B.row(j), F);
      std::optional<std::vector<Scalar>> c = S.at[ar.tgt].coordinates(y, F);
      if (!c) throw AlgebraError("subspace is not arrow stable");
      for (std::size_t i = 0; i < T.rows(); ++i) T.at(i, j) = (*c)[i];
    }
    act.push_back(std::move(T));
  }
  Module sub(A, std::move(dims), std::move(act));
  if (inclusion) {
    std::vector<Mat> mats;
    for (int v = 0; v < nv; ++v) mats.push_back(transpose(S.at[v].basis(), F));
    *inclusion = ModuleMap(sub, M, std::move(mats));
  }
  return sub;
}

Module quotient_module(const Module& M, const Submodule& S, ModuleMap* projection) {
  const AlgebraBasis& A = M.algebra();
  const Presentation& P = A.presentation();
  const Field& F = A.field();
  int nv = A.num_vertices();
  std::vector<std::vector<std::size_t>> comp(nv);
  std::vector<Mat> proj(nv);
  std::vector<std::size_t> dims(nv);
  for (int v = 0; v < nv; ++v) {
    comp[v] = complement_columns(S.at[v]);
    dims[v] = comp[v].size();
    proj[v] = Mat(dims[v], M.dim_at(v), F);
    for (std::size_t t = 0; t < M.dim_at(v); ++t) {
      std::vector<Scalar> e(M.dim_at(v), F.zero());
      e[t] = F.one();
      reduce_against(S.at[v], e, F);
      for (std::size_t i = 0; i < dims[v]; ++i) proj[v].at(i, t) = e[comp[v][i]];
    }
  }
  std::vector<Mat> act;
  for (std::size_t a = 0; a < P.arrows.size(); ++a) {
    const Arrow& ar = P.arrows[a];
    Mat section(M.dim_at(ar.src), dims[ar.src], F);
    for (std::size_t i = 0; i < dims[ar.src]; ++i)
      section.at(comp[ar.src][i], i) = F.one();
    act.push_back(mat_mul(proj[ar.tgt],
                          mat_mul(M.action(static_cast<int>(a)), section, F), F));
  }
  Module quo(A, std::move(dims), std::move(act));
  if (projection) *projection = ModuleMap(M, quo, std::move(proj));
  return quo;
}

Module dual_module(const Module& M, const AlgebraBasis& Aop) {
  const Presentation& P = M.algebra().presentation();
  const Presentation& Pop = Aop.presentation();
  if (Pop.vertices != P.vertices || Pop.arrows.size() != P.arrows.size())
    throw AlgebraError("dual needs the opposite presentation");
  for (std::size_t a = 0; a < P.arrows.size(); ++a)
    if (Pop.arrows[a].src != P.arrows[a].tgt || Pop.arrows[a].tgt != P.arrows[a].src)
      throw AlgebraError("dual needs the opposite presentation");
  const Field& F = M.field();
  std::vector<std::size_t> dims = M.dims();
  std::vector<Mat> act;
  for (std::size_t a = 0; a < P.arrows.size(); ++a)
    act.push_back(transpose(M.action(static_cast<int>(a)), F));
  return Module(Aop, std::move(dims), std::move(act));
}

bool is_projective_module(const Module& M) {
  const AlgebraBasis& A = M.algebra();
  Submodule rad = radical_of(M);
  std::size_t cover = 0;
  for (int v = 0; v < M.num_vertices(); ++v) {
    std::size_t top = M.dim_at(v) - rad.at[v].dim();
    std::size_t pdim = 0;
    for (int w = 0; w < M.num_vertices(); ++w) pdim += A.piece_dim(v, w);
    cover += top * pdim;
  }
  return cover == M.total_dim();
}

ResolutionTrace min_resolution(const Module& M0, int cutoff) {
  const AlgebraBasis& A = M0.algebra();
  const Field& F = A.field();
  int nv = A.num_vertices();
  ResolutionTrace tr;

  Module cur = M0;
  std::vector<RowSpace> inc;      // cur's basis inside the previous cover
  std::vector<int> prev_verts;    // summand vertices of that cover

  for (int k = 0;; ++k) {
    if (cur.total_dim() == 0) {
      tr.finite = true;
      tr.length = k - 1;
      break;
    }
    if (k > cutoff) {
      tr.truncated = true;
      break;
    }

    // Cover generators: coordinate vectors complementing the radical.
    Submodule rad = radical_of(cur);
    std::vector<int> verts;
    std::vector<std::pair<int, std::size_t>> genpos;
    for (int v = 0; v < nv; ++v)
      for (std::size_t c : complement_columns(rad.at[v])) {
        verts.push_back(v);
        genpos.emplace_back(v, c);
      }
    tr.covers.push_back(verts);

    if (k > 0) {
      // Generators sit inside P_{k-1}; their slices over the summands of
      // P_{k-1} are the differential components.
      std::vector<std::vector<AlgebraElement>> blk(
          prev_verts.size(), std::vector<AlgebraElement>(verts.size()));
      for (std::size_t s = 0; s < verts.size(); ++s) {
        auto [u, c] = genpos[s];
        std::size_t col = 0;
        for (std::size_t t = 0; t < prev_verts.size(); ++t) {
          const std::vector<int>& pc = A.piece(prev_verts[t], u);
          AlgebraElement z(A);
          for (std::size_t i = 0; i < pc.size(); ++i)
            z.coeff(pc[i]) = inc[u].basis().at(c, col + i);
          blk[t][s] = std::move(z);
          col += pc.size();
        }
      }
      tr.diffs.push_back(std::move(blk));
    }

    // Cover map P_k -> cur: each summand evaluates paths at its generator.
    Module P = Module::projective_sum(A, verts);
    std::vector<std::unique_ptr<Mat>> pmcache(A.dim());
    std::vector<Mat> phi;
    for (int w = 0; w < nv; ++w) phi.emplace_back(cur.dim_at(w), P.dim_at(w), F);
    for (int w = 0; w < nv; ++w) {
      std::size_t col = 0;
      for (std::size_t j = 0; j < verts.size(); ++j) {
        auto [u, c] = genpos[j];
        (void)u;
        for (int pidx : A.piece(verts[j], w)) {
          if (!pmcache[pidx]) pmcache[pidx] = std::make_unique<Mat>(cur.path_matrix(pidx));
          for (std::size_t i = 0; i < cur.dim_at(w); ++i)
            phi[w].at(i, col) = pmcache[pidx]->at(i, c);
          ++col;
        }
      }
    }

    // Syzygy: kernel of the cover, with its inherited module structure.
    std::vector<RowSpace> spaces;
    std::vector<std::size_t> kd(nv);
    for (int w = 0; w < nv; ++w) {
      spaces.push_back(RowSpace::from_rows(kernel_basis(phi[w], F), F));
      kd[w] = spaces[w].dim();
    }
    const Presentation& Pr = A.presentation();
    std::vector<Mat> nact;
    for (std::size_t a = 0; a < Pr.arrows.size(); ++a) {
      const Arrow& ar = Pr.arrows[a];
      Mat T(kd[ar.tgt], kd[ar.src], F);
      const Mat& B = spaces[ar.src].basis();
      for (std::size_t j = 0; j < B.rows(); ++j) {
        std::vector<Scalar> y = apply(P.action(static_cast<int>(a)), B.row(j), F);
        std::optional<std::vector<Scalar>> cds = spaces[ar.tgt].coordinates(y, F);
        if (!cds) throw AlgebraError("syzygy is not arrow stable");
        for (std::size_t i = 0; i < T.rows(); ++i) T.at(i, j) = (*cds)[i];
      }
      nact.push_back(std::move(T));
    }

    inc = std::move(spaces);
    prev_verts = std::move(verts);
    cur = Module(A, std::vector<std::size_t>(kd.begin(), kd.end()), std::move(nact));
  }
  return tr;
}

}  // namespace qperf
