#include "qperf/complex.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <utility>

namespace qperf {

const std::vector<int> PerfectComplex::kNoSummands{};
const PerfectComplex::Blocks PerfectComplex::kNoBlocks{};

namespace {

using Blocks = PerfectComplex::Blocks;

Blocks make_blocks(const AlgebraBasis& A, std::size_t rows, std::size_t cols) {
  return Blocks(rows, std::vector<AlgebraElement>(cols, AlgebraElement(A)));
}

// Position of every basis path inside its piece listing.
std::vector<int> piece_positions(const AlgebraBasis& A) {
  std::vector<int> pos(A.dim(), -1);
  int nv = A.num_vertices();
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) {
      const std::vector<int>& pc = A.piece(i, j);
      for (std::size_t k = 0; k < pc.size(); ++k) pos[pc[k]] = static_cast<int>(k);
    }
  return pos;
}

// z = c e_v + radical with c != 0 is a unit of e_v A e_v; returns the inverse.
AlgebraElement local_inverse(const AlgebraBasis& A, const AlgebraElement& z, int v) {
  const Field& F = A.field();
  const std::vector<int>& pb = A.piece(v, v);
  std::size_t n = pb.size();
  Mat Mz(n, n, F);
  for (std::size_t j = 0; j < n; ++j) {
    AlgebraElement prod = mul(z, AlgebraElement::from_path(A, pb[j]));
    for (std::size_t i = 0; i < n; ++i) Mz.at(i, j) = prod.coeff(pb[i]);
  }
  std::vector<Scalar> rhs(n, F.zero());
  for (std::size_t i = 0; i < n; ++i)
    if (pb[i] == A.unit_index(v)) rhs[i] = F.one();
  std::optional<std::vector<Scalar>> x = solve(Mz, rhs, F);
  if (!x) throw AlgebraError("entry is not invertible in the local algebra");
  AlgebraElement zi(A);
  for (std::size_t j = 0; j < n; ++j) zi.coeff(pb[j]) = (*x)[j];
  return zi;
}

}  // namespace

PerfectComplex::PerfectComplex(const AlgebraBasis& A, int lo,
                               std::vector<std::vector<int>> summands,
                               std::vector<Blocks> diff)
    : A_(&A), lo_(lo), summands_(std::move(summands)), diff_(std::move(diff)) {
  if (summands_.empty()) {
    if (!diff_.empty()) throw AlgebraError("differential without summands");
    lo_ = 0;
    return;
  }
  if (diff_.size() + 1 != summands_.size())
    throw AlgebraError("complex needs one differential per adjacent pair");
  int nv = A.num_vertices();
  for (const std::vector<int>& deg : summands_)
    for (int v : deg)
      if (v < 0 || v >= nv) throw AlgebraError("summand vertex out of range");
  for (std::size_t i = 0; i < diff_.size(); ++i) {
    if (diff_[i].size() != summands_[i + 1].size())
      throw AlgebraError("differential has the wrong number of rows");
    for (std::vector<AlgebraElement>& row : diff_[i]) {
      if (row.size() != summands_[i].size())
        throw AlgebraError("differential has the wrong number of columns");
      for (AlgebraElement& z : row)
        if (!z.attached()) z = AlgebraElement(A);
    }
  }
  trim();
}

void PerfectComplex::trim() {
  while (!summands_.empty() && summands_.front().empty()) {
    summands_.erase(summands_.begin());
    if (!diff_.empty()) diff_.erase(diff_.begin());
    ++lo_;
  }
  while (!summands_.empty() && summands_.back().empty()) {
    summands_.pop_back();
    if (!diff_.empty()) diff_.pop_back();
  }
  if (summands_.empty()) {
    diff_.clear();
    lo_ = 0;
  }
}

PerfectComplex PerfectComplex::zero(const AlgebraBasis& A) {
  return PerfectComplex(A, 0, {}, {});
}

PerfectComplex PerfectComplex::stalk(const AlgebraBasis& A, int v, int degree) {
  return PerfectComplex(A, degree, {{v}}, {});
}

const std::vector<int>& PerfectComplex::summands_at(int n) const {
  int i = n - lo_;
  if (i < 0 || i >= static_cast<int>(summands_.size())) return kNoSummands;
  return summands_[i];
}

const PerfectComplex::Blocks& PerfectComplex::diff_at(int n) const {
  int i = n - lo_;
  if (i < 0 || i >= static_cast<int>(diff_.size())) return kNoBlocks;
  return diff_[i];
}

int PerfectComplex::total_summands() const {
  int n = 0;
  for (const std::vector<int>& deg : summands_) n += static_cast<int>(deg.size());
  return n;
}

std::map<std::pair<int, int>, int> PerfectComplex::multiplicities() const {
  std::map<std::pair<int, int>, int> m;
  for (std::size_t i = 0; i < summands_.size(); ++i)
    for (int v : summands_[i]) ++m[{lo_ + static_cast<int>(i), v}];
  return m;
}

std::vector<std::int64_t> PerfectComplex::k0_class() const {
  std::vector<std::int64_t> cls(A_->num_vertices(), 0);
  for (std::size_t i = 0; i < summands_.size(); ++i) {
    int deg = lo_ + static_cast<int>(i);
    std::int64_t sign = (deg % 2 == 0) ? 1 : -1;
    for (int v : summands_[i]) cls[v] += sign;
  }
  return cls;
}

void PerfectComplex::validate() const {
  if (!attached()) throw AlgebraError("unattached complex");
  for (std::size_t i = 0; i < diff_.size(); ++i)
    for (std::size_t s = 0; s < diff_[i].size(); ++s)
      for (std::size_t t = 0; t < diff_[i][s].size(); ++t)
        if (!diff_[i][s][t].in_piece(summands_[i + 1][s], summands_[i][t]))
          throw AlgebraError("differential entry outside its piece");
  // d(n+1) . d(n) = 0 blockwise.
  for (std::size_t i = 0; i + 1 < diff_.size(); ++i)
    for (std::size_t t = 0; t < summands_[i].size(); ++t)
      for (std::size_t s = 0; s < summands_[i + 2].size(); ++s) {
        AlgebraElement acc(*A_);
        for (std::size_t m = 0; m < summands_[i + 1].size(); ++m)
          acc.add_in(mul(diff_[i][m][t], diff_[i + 1][s][m]));
        if (!acc.is_zero()) throw AlgebraError("differential does not square to zero");
      }
}

ChainMap identity_chain_map(const PerfectComplex& X) {
  const AlgebraBasis& A = X.algebra();
  ChainMap f;
  f.src = X;
  f.dst = X;
  f.degree = 0;
  f.lo = X.lo();
  for (int n = X.lo(); n <= X.hi(); ++n) {
    const std::vector<int>& xs = X.summands_at(n);
    Blocks b = make_blocks(A, xs.size(), xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t)
      b[t][t] = AlgebraElement::unit(A, xs[t]);
    f.blocks.push_back(std::move(b));
  }
  if (X.is_zero()) f.lo = 0;
  return f;
}

namespace {

const Blocks* chain_block(const ChainMap& f, int i) {
  int k = i - f.lo;
  if (k < 0 || k >= static_cast<int>(f.blocks.size())) return nullptr;
  return &f.blocks[k];
}

}  // namespace

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  const AlgebraBasis& A = f.src.algebra();
  ChainMap out;
  out.src = f.src;
  out.dst = g.dst;
  out.degree = f.degree + g.degree;
  out.lo = 0;
  if (f.src.is_zero() || g.dst.is_zero()) return out;
  int i0 = std::max(f.src.lo(), g.dst.lo() - out.degree);
  int i1 = std::min(f.src.hi(), g.dst.hi() - out.degree);
  if (i0 > i1) return out;
  out.lo = i0;
  for (int i = i0; i <= i1; ++i) {
    const std::vector<int>& xs = f.src.summands_at(i);
    const std::vector<int>& ms = f.dst.summands_at(i + f.degree);
    const std::vector<int>& zs = g.dst.summands_at(i + out.degree);
    Blocks b = make_blocks(A, zs.size(), xs.size());
    const Blocks* fb = chain_block(f, i);
    const Blocks* gb = chain_block(g, i + f.degree);
    if (fb && gb && !ms.empty())
      for (std::size_t s = 0; s < zs.size(); ++s)
        for (std::size_t t = 0; t < xs.size(); ++t)
          for (std::size_t m = 0; m < ms.size(); ++m)
            b[s][t].add_in(mul((*fb)[m][t], (*gb)[s][m]));
    out.blocks.push_back(std::move(b));
  }
  return out;
}

bool chain_map_ok(const ChainMap& f) {
  const AlgebraBasis& A = f.src.algebra();
  const Field& F = A.field();
  Scalar sign = (f.degree % 2 == 0) ? F.one() : F.from_int(-1);
  int lo = std::min(f.src.lo(), f.dst.lo() - f.degree) - 1;
  int hi = std::max(f.src.hi(), f.dst.hi() - f.degree) + 1;
  if (f.src.is_zero() || f.dst.is_zero()) return true;
  for (int i = lo; i <= hi; ++i) {
    const std::vector<int>& xs = f.src.summands_at(i);
    const std::vector<int>& ys1 = f.dst.summands_at(i + f.degree + 1);
    if (xs.empty() || ys1.empty()) continue;
    for (std::size_t s = 0; s < ys1.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t) {
        AlgebraElement acc(A);
        const Blocks* fb = chain_block(f, i);
        const Blocks& dY = f.dst.diff_at(i + f.degree);
        if (fb && !dY.empty())
          for (std::size_t m = 0; m < f.dst.summands_at(i + f.degree).size(); ++m)
            acc.add_in(mul((*fb)[m][t], dY[s][m]));
        const Blocks* fb1 = chain_block(f, i + 1);
        const Blocks& dX = f.src.diff_at(i);
        if (fb1 && !dX.empty()) {
          for (std::size_t m = 0; m < f.src.summands_at(i + 1).size(); ++m) {
            AlgebraElement term = mul(dX[m][t], (*fb1)[s][m]);
            term.scale_in(sign);
            acc.sub_in(term);
          }
        }
        if (!acc.is_zero()) return false;
      }
  }
  return true;
}

PerfectComplex shift(const PerfectComplex& X, int k) {
  if (X.is_zero()) return X;
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  std::vector<std::vector<int>> summands;
  std::vector<Blocks> diff;
  for (int n = X.lo(); n <= X.hi(); ++n) summands.push_back(X.summands_at(n));
  for (int n = X.lo(); n < X.hi(); ++n) {
    Blocks b = X.diff_at(n);
    if (k % 2 != 0)
      for (auto& row : b)
        for (AlgebraElement& z : row) z.scale_in(F.from_int(-1));
    diff.push_back(std::move(b));
  }
  return PerfectComplex(A, X.lo() - k, std::move(summands), std::move(diff));
}

PerfectComplex sum_complex(const PerfectComplex& X, const PerfectComplex& Y) {
  if (X.is_zero()) return Y;
  if (Y.is_zero()) return X;
  const AlgebraBasis& A = X.algebra();
  int lo = std::min(X.lo(), Y.lo());
  int hi = std::max(X.hi(), Y.hi());
  std::vector<std::vector<int>> summands;
  std::vector<Blocks> diff;
  for (int n = lo; n <= hi; ++n) {
    std::vector<int> deg = X.summands_at(n);
    const std::vector<int>& ys = Y.summands_at(n);
    deg.insert(deg.end(), ys.begin(), ys.end());
    summands.push_back(std::move(deg));
  }
  for (int n = lo; n < hi; ++n) {
    std::size_t xr = X.summands_at(n + 1).size(), xc = X.summands_at(n).size();
    std::size_t yr = Y.summands_at(n + 1).size(), yc = Y.summands_at(n).size();
    Blocks b = make_blocks(A, xr + yr, xc + yc);
    const Blocks& dx = X.diff_at(n);
    for (std::size_t s = 0; s < dx.size(); ++s)
      for (std::size_t t = 0; t < dx[s].size(); ++t) b[s][t] = dx[s][t];
    const Blocks& dy = Y.diff_at(n);
    for (std::size_t s = 0; s < dy.size(); ++s)
      for (std::size_t t = 0; t < dy[s].size(); ++t) b[xr + s][xc + t] = dy[s][t];
    diff.push_back(std::move(b));
  }
  return PerfectComplex(A, lo, std::move(summands), std::move(diff));
}

PerfectComplex cone(const ChainMap& f) {
  if (f.degree != 0) throw AlgebraError("cone needs a degree-zero chain map");
  const PerfectComplex& X = f.src;
  const PerfectComplex& Y = f.dst;
  if (X.is_zero()) return Y;
  if (Y.is_zero()) return shift(X, 1);
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  int lo = std::min(Y.lo(), X.lo() - 1);
  int hi = std::max(Y.hi(), X.hi() - 1);
  std::vector<std::vector<int>> summands;
  std::vector<Blocks> diff;
  for (int n = lo; n <= hi; ++n) {
    std::vector<int> deg = Y.summands_at(n);
    const std::vector<int>& xs = X.summands_at(n + 1);
    deg.insert(deg.end(), xs.begin(), xs.end());
    summands.push_back(std::move(deg));
  }
  for (int n = lo; n < hi; ++n) {
    std::size_t yr = Y.summands_at(n + 1).size(), yc = Y.summands_at(n).size();
    std::size_t xr = X.summands_at(n + 2).size(), xc = X.summands_at(n + 1).size();
    Blocks b = make_blocks(A, yr + xr, yc + xc);
    const Blocks& dy = Y.diff_at(n);
    for (std::size_t s = 0; s < dy.size(); ++s)
      for (std::size_t t = 0; t < dy[s].size(); ++t) b[s][t] = dy[s][t];
    const Blocks* fb = chain_block(f, n + 1);
    if (fb)
      for (std::size_t s = 0; s < yr; ++s)
        for (std::size_t t = 0; t < xc; ++t) b[s][yc + t] = (*fb)[s][t];
    const Blocks& dx = X.diff_at(n + 1);
    for (std::size_t s = 0; s < dx.size(); ++s)
      for (std::size_t t = 0; t < dx[s].size(); ++t) {
        AlgebraElement z = dx[s][t];
        z.scale_in(F.from_int(-1));
        b[yr + s][yc + t] = std::move(z);
      }
    diff.push_back(std::move(b));
  }
  return PerfectComplex(A, lo, std::move(summands), std::move(diff));
}

namespace {

/* Coordinate layout for the blocks of a degree-n map X -> Y: one slot per
   basis path of piece(w_s, u_t) per block. */
struct Layout {
  int i0 = 0, i1 = -1;
  std::vector<std::vector<std::vector<std::size_t>>> off;
  std::size_t total = 0;

  bool covers(int i) const { return i >= i0 && i <= i1; }
  std::size_t at(int i, std::size_t s, std::size_t t) const {
    return off[i - i0][s][t];
  }
};

Layout make_layout(const PerfectComplex& X, const PerfectComplex& Y, int n) {
  Layout L;
  if (X.is_zero() || Y.is_zero()) return L;
  const AlgebraBasis& A = X.algebra();
  L.i0 = std::max(X.lo(), Y.lo() - n);
  L.i1 = std::min(X.hi(), Y.hi() - n);
  for (int i = L.i0; i <= L.i1; ++i) {
    const std::vector<int>& xs = X.summands_at(i);
    const std::vector<int>& ys = Y.summands_at(i + n);
    std::vector<std::vector<std::size_t>> o(ys.size(),
                                            std::vector<std::size_t>(xs.size(), 0));
    for (std::size_t s = 0; s < ys.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t) {
        o[s][t] = L.total;
        L.total += A.piece(ys[s], xs[t]).size();
      }
    L.off.push_back(std::move(o));
  }
  return L;
}

ChainMap unpack_chain(const PerfectComplex& X, const PerfectComplex& Y, int n,
                      const Layout& L, const std::vector<Scalar>& v) {
  const AlgebraBasis& A = X.algebra();
  ChainMap f;
  f.src = X;
  f.dst = Y;
  f.degree = n;
  f.lo = L.i0;
  for (int i = L.i0; i <= L.i1; ++i) {
    const std::vector<int>& xs = X.summands_at(i);
    const std::vector<int>& ys = Y.summands_at(i + n);
    Blocks b = make_blocks(A, ys.size(), xs.size());
    for (std::size_t s = 0; s < ys.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t) {
        const std::vector<int>& pc = A.piece(ys[s], xs[t]);
        for (std::size_t k = 0; k < pc.size(); ++k)
          b[s][t].coeff(pc[k]) = v[L.at(i, s, t) + k];
      }
    f.blocks.push_back(std::move(b));
  }
  return f;
}

}  // namespace

HomResult hom_K(const PerfectComplex& X, const PerfectComplex& Y, int n,
                bool with_reps) {
  HomResult out;
  if (X.is_zero() || Y.is_zero()) return out;
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  std::vector<int> ppos = piece_positions(A);
  Scalar sign = (n % 2 == 0) ? F.one() : F.from_int(-1);

  Layout L = make_layout(X, Y, n);
  Layout EQ = make_layout(X, Y, n + 1);  // same block shape as the equations

  // Chain condition: dY . f = (-1)^n f . dX, one equation block per
  // (degree, target summand of Y^{i+n+1}, source summand of X^i).
  Mat M(EQ.total, L.total, F);
  for (int i = EQ.i0; i <= EQ.i1; ++i) {
    const std::vector<int>& xs = X.summands_at(i);
    const std::vector<int>& ys1 = Y.summands_at(i + n + 1);
    if (xs.empty() || ys1.empty()) continue;
    const std::vector<int>& ys = Y.summands_at(i + n);
    const Blocks& dY = Y.diff_at(i + n);
    if (L.covers(i) && !ys.empty() && !dY.empty()) {
      for (std::size_t t = 0; t < xs.size(); ++t)
        for (std::size_t m = 0; m < ys.size(); ++m) {
          const std::vector<int>& pc = A.piece(ys[m], xs[t]);
          for (std::size_t pp = 0; pp < pc.size(); ++pp) {
            AlgebraElement p = AlgebraElement::from_path(A, pc[pp]);
            std::size_t col = L.at(i, m, t) + pp;
            for (std::size_t s = 0; s < ys1.size(); ++s) {
              if (dY[s][m].is_zero()) continue;
              AlgebraElement prod = mul(p, dY[s][m]);
              for (int k = 0; k < A.dim(); ++k) {
                if (F.is_zero(prod.coeff(k))) continue;
                std::size_t row = EQ.at(i, s, t) + ppos[k];
                M.at(row, col) = F.add(M.at(row, col), prod.coeff(k));
              }
            }
          }
        }
    }
    const std::vector<int>& xs1 = X.summands_at(i + 1);
    const Blocks& dX = X.diff_at(i);
    if (L.covers(i + 1) && !xs1.empty() && !dX.empty()) {
      for (std::size_t t = 0; t < xs.size(); ++t)
        for (std::size_t m = 0; m < xs1.size(); ++m) {
          if (dX[m][t].is_zero()) continue;
          for (std::size_t s = 0; s < ys1.size(); ++s) {
            const std::vector<int>& pc = A.piece(ys1[s], xs1[m]);
            for (std::size_t pp = 0; pp < pc.size(); ++pp) {
              AlgebraElement prod = mul(dX[m][t], AlgebraElement::from_path(A, pc[pp]));
              prod.scale_in(sign);
              std::size_t col = L.at(i + 1, s, m) + pp;
              for (int k = 0; k < A.dim(); ++k) {
                if (F.is_zero(prod.coeff(k))) continue;
                std::size_t row = EQ.at(i, s, t) + ppos[k];
                M.at(row, col) = F.sub(M.at(row, col), prod.coeff(k));
              }
            }
          }
        }
    }
  }
  Mat K = kernel_basis(M, F);

  // Null-homotopic image: f = dY . h + (-1)^n h . dX over elementary h.
  Layout HL = make_layout(X, Y, n - 1);
  std::vector<std::vector<Scalar>> image_rows;
  for (int i = HL.i0; i <= HL.i1; ++i) {
    const std::vector<int>& xs = X.summands_at(i);
    const std::vector<int>& ys0 = Y.summands_at(i + n - 1);
    for (std::size_t s = 0; s < ys0.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t) {
        const std::vector<int>& pc = A.piece(ys0[s], xs[t]);
        for (int pidx : pc) {
          AlgebraElement h = AlgebraElement::from_path(A, pidx);
          std::vector<Scalar> v(L.total, F.zero());
          bool touched = false;
          const Blocks& dY = Y.diff_at(i + n - 1);
          if (!dY.empty() && L.covers(i)) {
            const std::vector<int>& ys = Y.summands_at(i + n);
            for (std::size_t s2 = 0; s2 < ys.size(); ++s2) {
              if (dY[s2][s].is_zero()) continue;
              AlgebraElement prod = mul(h, dY[s2][s]);
              for (int k = 0; k < A.dim(); ++k) {
                if (F.is_zero(prod.coeff(k))) continue;
                v[L.at(i, s2, t) + ppos[k]] =
                    F.add(v[L.at(i, s2, t) + ppos[k]], prod.coeff(k));
                touched = true;
              }
            }
          }
          const Blocks& dX = X.diff_at(i - 1);
          if (!dX.empty() && L.covers(i - 1)) {
            const std::vector<int>& xs0 = X.summands_at(i - 1);
            for (std::size_t t2 = 0; t2 < xs0.size(); ++t2) {
              if (dX[t][t2].is_zero()) continue;
              AlgebraElement prod = mul(dX[t][t2], h);
              prod.scale_in(sign);
              for (int k = 0; k < A.dim(); ++k) {
                if (F.is_zero(prod.coeff(k))) continue;
                v[L.at(i - 1, s, t2) + ppos[k]] =
                    F.add(v[L.at(i - 1, s, t2) + ppos[k]], prod.coeff(k));
                touched = true;
              }
            }
          }
          if (touched) image_rows.push_back(std::move(v));
        }
      }
  }
  Mat im(image_rows.size(), L.total, F);
  for (std::size_t r = 0; r < image_rows.size(); ++r) im.set_row(r, image_rows[r]);
  RowSpace H = RowSpace::from_rows(im, F);

  out.dim = K.rows() - H.dim();
  if (with_reps && out.dim > 0) {
    RowSpace span = H;
    for (std::size_t r = 0; r < K.rows() && out.reps.size() < out.dim; ++r) {
      std::vector<Scalar> v = K.row(r);
      if (span.contains(v, F)) continue;
      out.reps.push_back(unpack_chain(X, Y, n, L, v));
      Mat one(1, L.total, F);
      one.set_row(0, v);
      span = span.sum(RowSpace::from_rows(one, F), F);
    }
  }
  return out;
}

namespace {

// Looks for a differential entry with an invertible component: same vertex
// on both ends and a nonzero unit coefficient.
struct Pivot {
  std::size_t i, s, t;
};

std::optional<Pivot> find_pivot(const AlgebraBasis& A,
                                const std::vector<std::vector<int>>& summ,
                                const std::vector<Blocks>& dd) {
  const Field& F = A.field();
  for (std::size_t i = 0; i < dd.size(); ++i)
    for (std::size_t s = 0; s < dd[i].size(); ++s)
      for (std::size_t t = 0; t < dd[i][s].size(); ++t) {
        int u = summ[i][t], w = summ[i + 1][s];
        if (u != w) continue;
        if (!F.is_zero(dd[i][s][t].coeff(A.unit_index(u)))) return Pivot{i, s, t};
      }
  return std::nullopt;
}

}  // namespace

MinimizeResult minimize(const PerfectComplex& X) {
  MinimizeResult out;
  if (X.is_zero()) {
    out.complex = X;
    out.was_minimal = true;
    return out;
  }
  const AlgebraBasis& A = X.algebra();
  std::vector<std::vector<int>> summ;
  std::vector<Blocks> dd;
  for (int n = X.lo(); n <= X.hi(); ++n) summ.push_back(X.summands_at(n));
  for (int n = X.lo(); n < X.hi(); ++n) dd.push_back(X.diff_at(n));

  bool first = true;
  out.was_minimal = true;
  while (true) {
    std::optional<Pivot> pv = find_pivot(A, summ, dd);
    if (!pv) break;
    if (first) out.was_minimal = false;
    first = false;
    std::size_t i = pv->i, s = pv->s, t = pv->t;
    int v = summ[i][t];
    AlgebraElement z = dd[i][s][t];
    AlgebraElement zi = local_inverse(A, z, v);

    // Column operations clear row s; the incoming differential follows.
    for (std::size_t t2 = 0; t2 < summ[i].size(); ++t2) {
      if (t2 == t || dd[i][s][t2].is_zero()) continue;
      AlgebraElement c = mul(dd[i][s][t2], zi);
      c.scale_in(A.field().from_int(-1));
      for (std::size_t s2 = 0; s2 < dd[i].size(); ++s2)
        dd[i][s2][t2].add_in(mul(c, dd[i][s2][t]));
      if (i > 0)
        for (std::size_t r = 0; r < dd[i - 1][t].size(); ++r)
          dd[i - 1][t][r].sub_in(mul(dd[i - 1][t2][r], c));
    }
    // Row operations clear column t; the outgoing differential follows.
    for (std::size_t s2 = 0; s2 < dd[i].size(); ++s2) {
      if (s2 == s || dd[i][s2][t].is_zero()) continue;
      AlgebraElement c = mul(zi, dd[i][s2][t]);
      c.scale_in(A.field().from_int(-1));
      for (std::size_t t2 = 0; t2 < summ[i].size(); ++t2)
        dd[i][s2][t2].add_in(mul(dd[i][s][t2], c));
      if (i + 1 < dd.size())
        for (std::size_t r = 0; r < dd[i + 1].size(); ++r)
          dd[i + 1][r][s].sub_in(mul(c, dd[i + 1][r][s2]));
    }
    // d^2 = 0 forces the remaining incidences of the pair to vanish.
    if (i > 0)
      for (std::size_t r = 0; r < dd[i - 1][t].size(); ++r)
        if (!dd[i - 1][t][r].is_zero())
          throw AlgebraError("stale incidence into the contracted summand");
    if (i + 1 < dd.size())
      for (std::size_t r = 0; r < dd[i + 1].size(); ++r)
        if (!dd[i + 1][r][s].is_zero())
          throw AlgebraError("stale incidence out of the contracted summand");

    // Delete summand t in degree i and summand s in degree i+1.
    summ[i].erase(summ[i].begin() + static_cast<std::ptrdiff_t>(t));
    summ[i + 1].erase(summ[i + 1].begin() + static_cast<std::ptrdiff_t>(s));
    dd[i].erase(dd[i].begin() + static_cast<std::ptrdiff_t>(s));
    for (auto& row : dd[i]) row.erase(row.begin() + static_cast<std::ptrdiff_t>(t));
    if (i > 0) dd[i - 1].erase(dd[i - 1].begin() + static_cast<std::ptrdiff_t>(t));
    if (i + 1 < dd.size())
      for (auto& row : dd[i + 1])
        row.erase(row.begin() + static_cast<std::ptrdiff_t>(s));
  }
  out.complex = PerfectComplex(A, X.lo(), std::move(summ), std::move(dd));
  return out;
}

bool is_minimal(const PerfectComplex& X) {
  if (X.is_zero()) return true;
  const AlgebraBasis& A = X.algebra();
  std::vector<std::vector<int>> summ;
  std::vector<Blocks> dd;
  for (int n = X.lo(); n <= X.hi(); ++n) summ.push_back(X.summands_at(n));
  for (int n = X.lo(); n < X.hi(); ++n) dd.push_back(X.diff_at(n));
  return !find_pivot(A, summ, dd).has_value();
}

int length_of(const PerfectComplex& X) {
  PerfectComplex M = minimize(X).complex;
  if (M.is_zero()) return 0;
  return M.hi() - M.lo() + 1;
}

namespace {

// The right-multiplication module map realizing a block matrix between
// direct sums of projectives.
ModuleMap block_map(const AlgebraBasis& A, const std::vector<int>& src_verts,
                    const std::vector<int>& dst_verts, const Blocks& blocks) {
  const Field& F = A.field();
  int nv = A.num_vertices();
  Module S = Module::projective_sum(A, src_verts);
  Module D = Module::projective_sum(A, dst_verts);
  std::vector<int> ppos = piece_positions(A);
  std::vector<Mat> mats;
  for (int x = 0; x < nv; ++x) {
    Mat fx(D.dim_at(x), S.dim_at(x), F);
    std::size_t col = 0;
    for (std::size_t t = 0; t < src_verts.size(); ++t) {
      for (int pidx : A.piece(src_verts[t], x)) {
        AlgebraElement p = AlgebraElement::from_path(A, pidx);
        std::size_t row0 = 0;
        for (std::size_t s = 0; s < dst_verts.size(); ++s) {
          const AlgebraElement& z = blocks[s][t];
          if (!z.is_zero()) {
            AlgebraElement img = mul(p, z);
            for (int k : A.piece(dst_verts[s], x))
              if (!F.is_zero(img.coeff(k)))
                fx.at(row0 + ppos[k], col) = img.coeff(k);
          }
          row0 += A.piece(dst_verts[s], x).size();
        }
        ++col;
      }
    }
    mats.push_back(std::move(fx));
  }
  return ModuleMap(std::move(S), std::move(D), std::move(mats));
}

}  // namespace

Module homology_at(const PerfectComplex& X, int n) {
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  const std::vector<int>& cur = X.summands_at(n);
  if (cur.empty()) return Module::zero(A);
  ModuleMap dn = block_map(A, cur, X.summands_at(n + 1), X.diff_at(n));
  ModuleMap dp = block_map(A, X.summands_at(n - 1), cur, X.diff_at(n - 1));
  Submodule Z = kernel_of(dn);
  Submodule B = image_of(dp);
  Module Zmod = submodule_module(dn.src(), Z, nullptr);
  // Express the boundaries inside the cycle coordinates.
  Submodule BinZ;
  for (int v = 0; v < A.num_vertices(); ++v) {
    const Mat& rows = B.at[v].basis();
    Mat coords(rows.rows(), Z.at[v].dim(), F);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      std::optional<std::vector<Scalar>> c = Z.at[v].coordinates(rows.row(r), F);
      if (!c) throw AlgebraError("boundary outside the cycles");
      coords.set_row(r, *c);
    }
    BinZ.at.push_back(RowSpace::from_rows(coords, F));
  }
  return quotient_module(Zmod, BinZ, nullptr);
}

bool is_exceptional(const PerfectComplex& X) {
  PerfectComplex M = minimize(X).complex;
  if (M.is_zero()) return true;
  int l = M.hi() - M.lo() + 1;
  for (int m = 1; m < l; ++m) {
    if (hom_K(M, M, m).dim != 0) return false;
    if (hom_K(M, M, -m).dim != 0) return false;
  }
  return true;
}

namespace {

std::vector<Scalar> flatten_chain(const ChainMap& f, const Layout& L,
                                  const Field& F) {
  const AlgebraBasis& A = f.src.algebra();
  std::vector<Scalar> v(L.total, F.zero());
  for (int i = L.i0; i <= L.i1; ++i) {
    const Blocks* b = chain_block(f, i);
    if (!b) continue;
    const std::vector<int>& xs = f.src.summands_at(i);
    const std::vector<int>& ys = f.dst.summands_at(i + f.degree);
    for (std::size_t s = 0; s < ys.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t) {
        const std::vector<int>& pc = A.piece(ys[s], xs[t]);
        for (std::size_t k = 0; k < pc.size(); ++k)
          v[L.at(i, s, t) + k] = (*b)[s][t].coeff(pc[k]);
      }
  }
  return v;
}

}  // namespace

bool is_indecomposable(const PerfectComplex& X) {
  PerfectComplex M = minimize(X).complex;
  if (M.is_zero()) return false;
  const AlgebraBasis& A = M.algebra();
  const Field& F = A.field();
  HomResult E = hom_K(M, M, 0, true);
  std::size_t e = E.dim;
  if (e == 0) return false;
  if (F.is_prime() && F.modulus() <= static_cast<std::int64_t>(e))
    throw AlgebraError("endomorphism radical needs characteristic above " +
                       std::to_string(e));

  // Class coordinates: solve against representatives plus homotopies.
  Layout L = make_layout(M, M, 0);
  Layout HL = make_layout(M, M, -1);
  std::vector<std::vector<Scalar>> hom_vecs;
  {
    // Rebuild the homotopy image rows exactly as hom_K does.
    std::vector<int> ppos = piece_positions(A);
    for (int i = HL.i0; i <= HL.i1; ++i) {
      const std::vector<int>& xs = M.summands_at(i);
      const std::vector<int>& ys0 = M.summands_at(i - 1);
      for (std::size_t s = 0; s < ys0.size(); ++s)
        for (std::size_t t = 0; t < xs.size(); ++t)
          for (int pidx : A.piece(ys0[s], xs[t])) {
            AlgebraElement h = AlgebraElement::from_path(A, pidx);
            std::vector<Scalar> v(L.total, F.zero());
            const Blocks& dY = M.diff_at(i - 1);
            if (!dY.empty() && L.covers(i)) {
              const std::vector<int>& ys = M.summands_at(i);
              for (std::size_t s2 = 0; s2 < ys.size(); ++s2) {
                if (dY[s2][s].is_zero()) continue;
                AlgebraElement prod = mul(h, dY[s2][s]);
                for (int k = 0; k < A.dim(); ++k)
                  if (!F.is_zero(prod.coeff(k)))
                    v[L.at(i, s2, t) + ppos[k]] =
                        F.add(v[L.at(i, s2, t) + ppos[k]], prod.coeff(k));
              }
            }
            const Blocks& dX = M.diff_at(i - 1);
            if (!dX.empty() && L.covers(i - 1)) {
              const std::vector<int>& xs0 = M.summands_at(i - 1);
              for (std::size_t t2 = 0; t2 < xs0.size(); ++t2) {
                if (dX[t][t2].is_zero()) continue;
                AlgebraElement prod = mul(dX[t][t2], h);
                for (int k = 0; k < A.dim(); ++k)
                  if (!F.is_zero(prod.coeff(k)))
                    v[L.at(i - 1, s, t2) + ppos[k]] =
                        F.add(v[L.at(i - 1, s, t2) + ppos[k]], prod.coeff(k));
              }
            }
            hom_vecs.push_back(std::move(v));
          }
    }
  }
  RowSpace H(L.total);
  {
    Mat im(hom_vecs.size(), L.total, F);
    for (std::size_t r = 0; r < hom_vecs.size(); ++r) im.set_row(r, hom_vecs[r]);
    H = RowSpace::from_rows(im, F);
  }
  std::size_t hd = H.dim();
  Mat C(L.total, e + hd, F);
  std::vector<std::vector<Scalar>> rep_vec;
  for (std::size_t j = 0; j < e; ++j) {
    rep_vec.push_back(flatten_chain(E.reps[j], L, F));
    for (std::size_t i = 0; i < L.total; ++i) C.at(i, j) = rep_vec[j][i];
  }
  for (std::size_t j = 0; j < hd; ++j)
    for (std::size_t i = 0; i < L.total; ++i) C.at(i, e + j) = H.basis().at(j, i);
  auto class_coords = [&](const ChainMap& f) {
    std::vector<Scalar> v = flatten_chain(f, L, F);
    std::optional<std::vector<Scalar>> y = solve(C, v, F);
    if (!y) throw AlgebraError("endomorphism outside the hom space");
    return std::vector<Scalar>(y->begin(), y->begin() + static_cast<std::ptrdiff_t>(e));
  };

  // Left multiplication matrices, then the trace form.
  std::vector<Mat> left(e, Mat(e, e, F));
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) {
      std::vector<Scalar> c = class_coords(compose(E.reps[i], E.reps[j]));
      for (std::size_t k = 0; k < e; ++k) left[i].at(k, j) = c[k];
    }
  Mat G(e, e, F);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) {
      Mat prod = mat_mul(left[i], left[j], F);
      Scalar tr = F.zero();
      for (std::size_t k = 0; k < e; ++k) tr = F.add(tr, prod.at(k, k));
      G.at(i, j) = tr;
    }
  return rank_of(G, F) == 1;
}

HomClasses hom_classes(const PerfectComplex& X, const PerfectComplex& Y, int n) {
  HomClasses out;
  out.src = X;
  out.dst = Y;
  out.degree = n;
  HomResult base = hom_K(X, Y, n, true);
  out.dim = base.dim;
  out.reps = std::move(base.reps);
  if (X.is_zero() || Y.is_zero()) return out;
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  std::vector<int> ppos = piece_positions(A);
  Scalar sign = (n % 2 == 0) ? F.one() : F.from_int(-1);

  Layout L = make_layout(X, Y, n);
  Layout HL = make_layout(X, Y, n - 1);
  std::vector<std::vector<Scalar>> hom_vecs;
  for (int i = HL.i0; i <= HL.i1; ++i) {
    const std::vector<int>& xs = X.summands_at(i);
    const std::vector<int>& ys0 = Y.summands_at(i + n - 1);
    for (std::size_t s = 0; s < ys0.size(); ++s)
      for (std::size_t t = 0; t < xs.size(); ++t)
        for (int pidx : A.piece(ys0[s], xs[t])) {
          AlgebraElement h = AlgebraElement::from_path(A, pidx);
          std::vector<Scalar> v(L.total, F.zero());
          const Blocks& dY = Y.diff_at(i + n - 1);
          if (!dY.empty() && L.covers(i)) {
            const std::vector<int>& ys = Y.summands_at(i + n);
            for (std::size_t s2 = 0; s2 < ys.size(); ++s2) {
              if (dY[s2][s].is_zero()) continue;
              AlgebraElement prod = mul(h, dY[s2][s]);
              for (int k = 0; k < A.dim(); ++k)
                if (!F.is_zero(prod.coeff(k)))
                  v[L.at(i, s2, t) + ppos[k]] =
                      F.add(v[L.at(i, s2, t) + ppos[k]], prod.coeff(k));
            }
          }
          const Blocks& dX = X.diff_at(i - 1);
          if (!dX.empty() && L.covers(i - 1)) {
            const std::vector<int>& xs0 = X.summands_at(i - 1);
            for (std::size_t t2 = 0; t2 < xs0.size(); ++t2) {
              if (dX[t][t2].is_zero()) continue;
              AlgebraElement prod = mul(dX[t][t2], h);
              prod.scale_in(sign);
              for (int k = 0; k < A.dim(); ++k)
                if (!F.is_zero(prod.coeff(k)))
                  v[L.at(i - 1, s, t2) + ppos[k]] =
                      F.add(v[L.at(i - 1, s, t2) + ppos[k]], prod.coeff(k));
            }
          }
          hom_vecs.push_back(std::move(v));
        }
  }
  Mat im(hom_vecs.size(), L.total, F);
  for (std::size_t r = 0; r < hom_vecs.size(); ++r) im.set_row(r, hom_vecs[r]);
  RowSpace H = RowSpace::from_rows(im, F);

  std::size_t e = out.dim, hd = H.dim();
  out.solver = Mat(L.total, e + hd, F);
  for (std::size_t j = 0; j < e; ++j) {
    std::vector<Scalar> v = flatten_chain(out.reps[j], L, F);
    for (std::size_t i = 0; i < L.total; ++i) out.solver.at(i, j) = v[i];
  }
  for (std::size_t j = 0; j < hd; ++j)
    for (std::size_t i = 0; i < L.total; ++i)
      out.solver.at(i, e + j) = H.basis().at(j, i);
  return out;
}

std::vector<Scalar> class_coordinates(const HomClasses& H, const ChainMap& f) {
  if (H.dim == 0) return {};
  const Field& F = H.src.field();
  Layout L = make_layout(H.src, H.dst, H.degree);
  std::vector<Scalar> v = flatten_chain(f, L, F);
  std::optional<std::vector<Scalar>> y = solve(H.solver, v, F);
  if (!y) throw AlgebraError("chain map outside the hom space");
  return std::vector<Scalar>(y->begin(),
                             y->begin() + static_cast<std::ptrdiff_t>(H.dim));
}

namespace {

bool scalar_part_invertible(const ChainMap& f) {
  const AlgebraBasis& A = f.src.algebra();
  const Field& F = A.field();
  for (int i = std::min(f.src.lo(), f.dst.lo());
       i <= std::max(f.src.hi(), f.dst.hi()); ++i) {
    const std::vector<int>& xs = f.src.summands_at(i);
    const std::vector<int>& ys = f.dst.summands_at(i);
    if (xs.size() != ys.size()) return false;
    if (xs.empty()) continue;
    for (int v = 0; v < A.num_vertices(); ++v) {
      std::vector<std::size_t> cols, rows;
      for (std::size_t t = 0; t < xs.size(); ++t)
        if (xs[t] == v) cols.push_back(t);
      for (std::size_t s = 0; s < ys.size(); ++s)
        if (ys[s] == v) rows.push_back(s);
      if (cols.size() != rows.size()) return false;
      if (cols.empty()) continue;
      Mat S(rows.size(), cols.size(), F);
      const Blocks* b = chain_block(f, i);
      if (!b) return false;
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
          S.at(r, c) = (*b)[rows[r]][cols[c]].coeff(A.unit_index(v));
      if (rank_of(S, F) != rows.size()) return false;
    }
  }
  return true;
}

void chain_add_scaled(ChainMap& acc, const ChainMap& f, const Scalar& c) {
  for (std::size_t i = 0; i < acc.blocks.size(); ++i)
    for (std::size_t s = 0; s < acc.blocks[i].size(); ++s)
      for (std::size_t t = 0; t < acc.blocks[i][s].size(); ++t) {
        AlgebraElement z = f.blocks[i][s][t];
        z.scale_in(c);
        acc.blocks[i][s][t].add_in(z);
      }
}

}  // namespace

bool iso_K(const PerfectComplex& X, const PerfectComplex& Y, std::uint64_t seed) {
  PerfectComplex MX = minimize(X).complex;
  PerfectComplex MY = minimize(Y).complex;
  if (MX.is_zero() && MY.is_zero()) return true;
  if (MX.is_zero() || MY.is_zero()) return false;
  if (MX.multiplicities() != MY.multiplicities()) return false;
  const Field& F = MX.field();
  HomResult hom = hom_K(MX, MY, 0, true);
  if (hom.dim == 0) return false;

  for (const ChainMap& f : hom.reps)
    if (scalar_part_invertible(f)) return true;
  ChainMap acc = hom.reps[0];
  for (std::size_t k = 1; k < hom.reps.size(); ++k) {
    chain_add_scaled(acc, hom.reps[k], F.one());
    if (scalar_part_invertible(acc)) return true;
  }
  std::mt19937_64 rng(seed);
  for (int iter = 0; iter < 32; ++iter) {
    ChainMap rnd = hom.reps[0];
    Scalar c0 = F.sample(rng);
    for (auto& layer : rnd.blocks)
      for (auto& row : layer)
        for (AlgebraElement& z : row) z.scale_in(c0);
    for (std::size_t k = 1; k < hom.reps.size(); ++k)
      chain_add_scaled(rnd, hom.reps[k], F.sample(rng));
    if (scalar_part_invertible(rnd)) return true;
  }
  return false;
}

PerfectComplex resolution_complex(const AlgebraBasis& A, const ResolutionTrace& tr) {
  std::size_t L = tr.covers.size();
  if (L == 0) return PerfectComplex::zero(A);
  std::vector<std::vector<int>> summands;
  std::vector<Blocks> diff;
  for (std::size_t i = 0; i < L; ++i) summands.push_back(tr.covers[L - 1 - i]);
  for (std::size_t i = 0; i + 1 < L; ++i) diff.push_back(tr.diffs[L - 2 - i]);
  return PerfectComplex(A, -static_cast<int>(L - 1), std::move(summands),
                        std::move(diff));
}

nlohmann::json complex_to_json(const PerfectComplex& X) {
  const AlgebraBasis& A = X.algebra();
  const Field& F = A.field();
  nlohmann::json j;
  j["lo"] = X.lo();
  nlohmann::json summands = nlohmann::json::array();
  nlohmann::json diff = nlohmann::json::array();
  if (!X.is_zero()) {
    for (int n = X.lo(); n <= X.hi(); ++n) {
      nlohmann::json deg = nlohmann::json::array();
      for (int v : X.summands_at(n)) deg.push_back(A.presentation().vertices[v]);
      summands.push_back(deg);
    }
    for (int n = X.lo(); n < X.hi(); ++n) {
      const Blocks& b = X.diff_at(n);
      nlohmann::json layer = nlohmann::json::array();
      for (const auto& row : b) {
        nlohmann::json jrow = nlohmann::json::array();
        for (const AlgebraElement& z : row) {
          nlohmann::json terms = nlohmann::json::array();
          for (int k = 0; k < A.dim(); ++k)
            if (!F.is_zero(z.coeff(k)))
              terms.push_back({{"coeff", F.to_string(z.coeff(k))},
                               {"path", A.path_label(k)}});
          jrow.push_back(terms);
        }
        layer.push_back(jrow);
      }
      diff.push_back(layer);
    }
  }
  j["summands"] = summands;
  j["diff"] = diff;
  return j;
}

PerfectComplex complex_from_json(const AlgebraBasis& A, const nlohmann::json& j) {
  const Field& F = A.field();
  std::map<std::string, int> label_to_path;
  for (int k = 0; k < A.dim(); ++k) label_to_path[A.path_label(k)] = k;
  int lo = j.at("lo").get<int>();
  std::vector<std::vector<int>> summands;
  for (const auto& deg : j.at("summands")) {
    std::vector<int> verts;
    for (const auto& lbl : deg) {
      int v = A.presentation().vertex_index(lbl.get<std::string>());
      if (v < 0) throw AlgebraError("unknown vertex label: " + lbl.get<std::string>());
      verts.push_back(v);
    }
    summands.push_back(std::move(verts));
  }
  std::vector<Blocks> diff;
  for (const auto& layer : j.at("diff")) {
    Blocks b;
    for (const auto& jrow : layer) {
      std::vector<AlgebraElement> row;
      for (const auto& terms : jrow) {
        AlgebraElement z(A);
        for (const auto& term : terms) {
          auto it = label_to_path.find(term.at("path").get<std::string>());
          if (it == label_to_path.end())
            throw AlgebraError("unknown path label: " +
                               term.at("path").get<std::string>());
          z.coeff(it->second) = F.from_string(term.at("coeff").get<std::string>());
        }
        row.push_back(std::move(z));
      }
      b.push_back(std::move(row));
    }
    diff.push_back(std::move(b));
  }
  PerfectComplex X(A, lo, std::move(summands), std::move(diff));
  X.validate();
  return X;
}

}  // namespace qperf
