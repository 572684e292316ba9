#include "qperf/algebra.hpp"

#include <algorithm>
#include <numeric>

namespace qperf {

namespace {

constexpr std::size_t kMaxEnumeratedPaths = 200000;

struct RawPath {
  int src, tgt;
  std::vector<int> arrows;
};

}  // namespace

AlgebraBasis AlgebraBasis::compute(Presentation pres, int nilpotency_cap) {
  const Field& F = pres.field;
  const int nv = static_cast<int>(pres.vertices.size());
  if (nv == 0) throw AlgebraError("presentation has no vertices");
  if (nilpotency_cap < 1) throw AlgebraError("nilpotency cap must be positive");

  // Global enumeration of all paths up to the stopping length.
  std::vector<RawPath> paths;
  std::map<std::vector<int>, int> path_of_word;  // nonempty words only
  std::vector<std::vector<int>> by_length;       // path ids per length

  by_length.emplace_back();
  for (int v = 0; v < nv; ++v) {
    by_length[0].push_back(static_cast<int>(paths.size()));
    paths.push_back(RawPath{v, v, {}});
  }

  // reduction[p]: nullopt while unknown; NF paths expand to themselves later.
  // For pivot paths: sparse combo over same-stratum NF path ids.
  struct Reduction {
    bool pivot = false;
    std::vector<std::pair<int, Scalar>> combo;  // over path ids
  };
  std::vector<Reduction> red(paths.size());

  // rref rows of the ideal per length, as (stratum paths, matrix).
  struct IdealBlock {
    std::vector<int> cols;  // path ids, sorted by word
    Mat rows;
  };
  std::vector<std::vector<IdealBlock>> ideal_by_length(1);

  int stop_len = -1;
  for (int l = 1; l <= nilpotency_cap; ++l) {
    // Enumerate length-l paths from all length-(l-1) paths.
    by_length.emplace_back();
    std::map<std::pair<int, int>, std::vector<int>> strata;
    for (int pid : by_length[l - 1]) {
      const RawPath base = paths[pid];
      for (std::size_t ai = 0; ai < pres.arrows.size(); ++ai) {
        if (pres.arrows[ai].src != base.tgt) continue;
        RawPath np;
        np.src = base.src;
        np.tgt = pres.arrows[ai].tgt;
        np.arrows = base.arrows;
        np.arrows.push_back(static_cast<int>(ai));
        int nid = static_cast<int>(paths.size());
        path_of_word.emplace(np.arrows, nid);
        paths.push_back(np);
        red.emplace_back();
        by_length[l].push_back(nid);
        strata[{np.src, np.tgt}].push_back(nid);
      }
    }
    if (paths.size() > kMaxEnumeratedPaths)
      throw AlgebraError("path count exploded before reaching a nilpotency index; "
                         "the quotient is too large or infinite dimensional");
    if (by_length[l].empty()) {
      stop_len = l;
      break;
    }
    for (auto& [key, ids] : strata)
      std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        return paths[a].arrows < paths[b].arrows;
      });

    // Assemble ideal rows per stratum.
    std::map<std::pair<int, int>, std::vector<std::vector<std::pair<int, Scalar>>>>
        rows;  // sparse rows over path ids
    for (const Relation& r : pres.relations) {
      if (r.length != l) continue;
      std::vector<std::pair<int, Scalar>> row;
      for (const RelTerm& t : r.terms) {
        auto it = path_of_word.find(t.arrows);
        if (it == path_of_word.end())
          throw AlgebraError("relation term does not match an enumerated path");
        row.emplace_back(it->second, t.coeff);
      }
      rows[{r.src, r.tgt}].push_back(std::move(row));
    }
    if (l - 1 >= 1) {
      for (const IdealBlock& blk : ideal_by_length[l - 1]) {
        for (std::size_t ri = 0; ri < blk.rows.rows(); ++ri) {
          // Left extension: append an arrow acting after the whole row.
          for (std::size_t ai = 0; ai < pres.arrows.size(); ++ai) {
            const Arrow& a = pres.arrows[ai];
            bool left_ok = false, right_ok = false;
            for (int pid : blk.cols) {
              if (pres.arrows[ai].src == paths[pid].tgt) left_ok = true;
              if (pres.arrows[ai].tgt == paths[pid].src) right_ok = true;
              break;  // strata share src/tgt
            }
            if (left_ok) {
              std::vector<std::pair<int, Scalar>> row;
              for (std::size_t c = 0; c < blk.cols.size(); ++c) {
                if (F.is_zero(blk.rows.at(ri, c))) continue;
                std::vector<int> w = paths[blk.cols[c]].arrows;
                w.push_back(static_cast<int>(ai));
                row.emplace_back(path_of_word.at(w), blk.rows.at(ri, c));
              }
              if (!row.empty())
                rows[{paths[row.front().first].src, a.tgt}].push_back(std::move(row));
            }
            if (right_ok) {
              std::vector<std::pair<int, Scalar>> row;
              for (std::size_t c = 0; c < blk.cols.size(); ++c) {
                if (F.is_zero(blk.rows.at(ri, c))) continue;
                std::vector<int> w;
                w.push_back(static_cast<int>(ai));
                w.insert(w.end(), paths[blk.cols[c]].arrows.begin(),
                         paths[blk.cols[c]].arrows.end());
                row.emplace_back(path_of_word.at(w), blk.rows.at(ri, c));
              }
              if (!row.empty())
                rows[{a.src, paths[row.front().first].tgt}].push_back(std::move(row));
            }
          }
        }
      }
    }

    // Row-reduce each stratum; non-pivot paths survive as normal forms.
    ideal_by_length.emplace_back();
    std::size_t survivors = 0;
    for (auto& [key, ids] : strata) {
      auto rit = rows.find(key);
      if (rit == rows.end() || rit->second.empty()) {
        survivors += ids.size();
        continue;
      }
      std::map<int, std::size_t> col_of;
      for (std::size_t c = 0; c < ids.size(); ++c) col_of[ids[c]] = c;
      Mat m(rit->second.size(), ids.size(), F);
      for (std::size_t r = 0; r < rit->second.size(); ++r)
        for (auto& [pid, coef] : rit->second[r]) {
          std::size_t c = col_of.at(pid);
          m.at(r, c) = F.add(m.at(r, c), coef);
        }
      std::vector<std::size_t> pivots = rref_in_place(m, F);
      std::vector<bool> is_pivot(ids.size(), false);
      for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        Reduction& rd = red[ids[pivots[r]]];
        rd.pivot = true;
        for (std::size_t c = 0; c < ids.size(); ++c) {
          if (c == pivots[r] || F.is_zero(m.at(r, c))) continue;
          rd.combo.emplace_back(ids[c], F.neg(m.at(r, c)));
        }
      }
      survivors += ids.size() - pivots.size();
      IdealBlock blk;
      blk.cols = ids;
      blk.rows = Mat(pivots.size(), ids.size(), F);
      for (std::size_t r = 0; r < pivots.size(); ++r)
        blk.rows.set_row(r, m.row(r));
      ideal_by_length[l].push_back(std::move(blk));
    }
    if (survivors == 0) {
      stop_len = l;
      break;
    }
  }
  if (stop_len < 0)
    throw AlgebraError("no nilpotency index found within the cap of " +
                       std::to_string(nilpotency_cap));

  AlgebraBasis A;
  A.pres_ = std::move(pres);
  A.nilpotency_ = stop_len;
  A.connected_ = A.pres_.is_connected();

  // Canonical basis order: (length, src, tgt, word).
  std::vector<int> nf_paths;
  for (int l = 0; l < stop_len; ++l)
    for (int pid : by_length[l])
      if (!red[pid].pivot) nf_paths.push_back(pid);
  std::sort(nf_paths.begin(), nf_paths.end(), [&](int a, int b) {
    const RawPath &pa = paths[a], &pb = paths[b];
    auto ka = std::tuple(static_cast<int>(pa.arrows.size()), pa.src, pa.tgt);
    auto kb = std::tuple(static_cast<int>(pb.arrows.size()), pb.src, pb.tgt);
    if (ka != kb) return ka < kb;
    return pa.arrows < pb.arrows;
  });
  std::vector<int> basis_index(paths.size(), -1);
  for (std::size_t k = 0; k < nf_paths.size(); ++k) {
    basis_index[nf_paths[k]] = static_cast<int>(k);
    const RawPath& rp = paths[nf_paths[k]];
    PathNF nf;
    nf.src = rp.src;
    nf.tgt = rp.tgt;
    nf.length = static_cast<int>(rp.arrows.size());
    nf.arrows = rp.arrows;
    A.basis_.push_back(std::move(nf));
  }
  A.index_pieces();

  // Reduction of any enumerated path to a combination of basis paths.
  std::vector<SparseVec> full_red(paths.size());
  for (int l = 0; l < stop_len; ++l)
    for (int pid : by_length[l]) {
      if (!red[pid].pivot) {
        full_red[pid] = SparseVec{{basis_index[pid], F.one()}};
        continue;
      }
      SparseVec v;
      for (auto& [qid, coef] : red[pid].combo)
        v.emplace_back(basis_index[qid], coef);
      std::sort(v.begin(), v.end());
      full_red[pid] = std::move(v);
    }

  // Structure constants by concatenation and reduction.
  const std::size_t d = A.basis_.size();
  A.mult_.assign(d * d, SparseVec{});
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      const PathNF &pp = A.basis_[p], &qq = A.basis_[q];
      if (pp.src != qq.tgt) continue;  // p*q with q acting first
      int total = pp.length + qq.length;
      if (total >= stop_len && total > 0) continue;  // lies in rad^N = 0
      if (qq.length == 0) {
        A.mult_[p * d + q] = SparseVec{{static_cast<int>(p), F.one()}};
        continue;
      }
      if (pp.length == 0) {
        A.mult_[p * d + q] = SparseVec{{static_cast<int>(q), F.one()}};
        continue;
      }
      std::vector<int> w = qq.arrows;
      w.insert(w.end(), pp.arrows.begin(), pp.arrows.end());
      A.mult_[p * d + q] = full_red[path_of_word.at(w)];
    }

  A.fill_opposite_map();
  return A;
}

void AlgebraBasis::index_pieces() {
  const int nv = num_vertices();
  unit_index_.assign(nv, -1);
  pieces_.assign(nv, std::vector<std::vector<int>>(nv));
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const PathNF& p = basis_[k];
    pieces_[p.src][p.tgt].push_back(static_cast<int>(k));
    if (p.length == 0) unit_index_[p.src] = static_cast<int>(k);
  }
}

std::vector<int> AlgebraBasis::piece_radical(int i, int j, int minlen) const {
  std::vector<int> out;
  for (int k : pieces_[i][j])
    if (basis_[k].length >= minlen) out.push_back(k);
  return out;
}

std::string AlgebraBasis::path_label(int k) const {
  const PathNF& p = basis_[k];
  if (p.arrows.empty()) return "e_" + pres_.vertices[p.src];
  std::string s;
  for (std::size_t i = p.arrows.size(); i-- > 0;) {
    s += pres_.arrows[p.arrows[i]].label;
    if (i > 0) s += "*";
  }
  return s;
}

void AlgebraBasis::fill_opposite_map() {
  // Position of each reversed path in the opposite algebra's canonical order.
  std::vector<int> order(basis_.size());
  std::iota(order.begin(), order.end(), 0);
  auto rev_key = [&](int k) {
    const PathNF& p = basis_[k];
    std::vector<int> rev(p.arrows.rbegin(), p.arrows.rend());
    return std::tuple(p.length, p.tgt, p.src, rev);
  };
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rev_key(a) < rev_key(b); });
  op_index_.assign(basis_.size(), -1);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    op_index_[order[pos]] = static_cast<int>(pos);
}

AlgebraBasis AlgebraBasis::opposite() const {
  AlgebraBasis B;
  B.pres_ = reversed_presentation(pres_);
  B.nilpotency_ = nilpotency_;
  B.connected_ = connected_;
  B.basis_.resize(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const PathNF& p = basis_[k];
    PathNF q;
    q.src = p.tgt;
    q.tgt = p.src;
    q.length = p.length;
    q.arrows.assign(p.arrows.rbegin(), p.arrows.rend());
    B.basis_[op_index_[k]] = std::move(q);
  }
  B.index_pieces();
  const std::size_t d = basis_.size();
  B.mult_.assign(d * d, SparseVec{});
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      // rev(p) * rev(q) in the opposite equals rev(q * p) here.
      const SparseVec& v = mult_[q * d + p];
      SparseVec w;
      for (auto& [k, c] : v) w.emplace_back(op_index_[k], c);
      std::sort(w.begin(), w.end());
      B.mult_[static_cast<std::size_t>(op_index_[p]) * d + op_index_[q]] = std::move(w);
    }
  B.fill_opposite_map();
  return B;
}

AlgebraElement AlgebraElement::unit(const AlgebraBasis& A, int v) {
  AlgebraElement e(A);
  e.c_[A.unit_index(v)] = A.field().one();
  return e;
}

AlgebraElement AlgebraElement::from_path(const AlgebraBasis& A, int k) {
  AlgebraElement e(A);
  e.c_[k] = A.field().one();
  return e;
}

bool AlgebraElement::is_zero() const {
  if (!A_) return true;
  const Field& F = A_->field();
  for (const Scalar& s : c_)
    if (!F.is_zero(s)) return false;
  return true;
}

AlgebraElement& AlgebraElement::add_in(const AlgebraElement& o) {
  const Field& F = A_->field();
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = F.add(c_[k], o.c_[k]);
  return *this;
}

AlgebraElement& AlgebraElement::sub_in(const AlgebraElement& o) {
  const Field& F = A_->field();
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] = F.sub(c_[k], o.c_[k]);
  return *this;
}

AlgebraElement& AlgebraElement::scale_in(const Scalar& s) {
  const Field& F = A_->field();
  for (Scalar& v : c_) v = F.mul(v, s);
  return *this;
}

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  return r.add_in(b);
}

AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  return r.sub_in(b);
}

AlgebraElement scale(const AlgebraElement& a, const Scalar& s) {
  AlgebraElement r = a;
  return r.scale_in(s);
}

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  const AlgebraBasis& A = *a.A_;
  const Field& F = A.field();
  AlgebraElement r(A);
  for (int p = 0; p < A.dim(); ++p) {
    if (F.is_zero(a.c_[p])) continue;
    for (int q = 0; q < A.dim(); ++q) {
      if (F.is_zero(b.c_[q])) continue;
      Scalar f = F.mul(a.c_[p], b.c_[q]);
      for (auto& [k, c] : A.basis_product(p, q))
        r.c_[k] = F.add(r.c_[k], F.mul(f, c));
    }
  }
  return r;
}

bool eq(const AlgebraElement& a, const AlgebraElement& b) {
  const Field& F = a.A_->field();
  for (std::size_t k = 0; k < a.c_.size(); ++k)
    if (!F.eq(a.c_[k], b.c_[k])) return false;
  return true;
}

bool AlgebraElement::in_piece(int i, int j) const {
  const Field& F = A_->field();
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (F.is_zero(c_[k])) continue;
    const PathNF& p = A_->path(static_cast<int>(k));
    if (p.src != i || p.tgt != j) return false;
  }
  return true;
}

std::string AlgebraElement::to_string() const {
  if (!A_ || is_zero()) return "0";
  const Field& F = A_->field();
  std::string s;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (F.is_zero(c_[k])) continue;
    if (!s.empty()) s += " + ";
    std::string cs = F.to_string(c_[k]);
    if (cs != "1") s += cs + "·";
    s += A_->path_label(static_cast<int>(k));
  }
  return s;
}

AlgebraElement eval_word(const AlgebraBasis& A, const std::vector<int>& word) {
  if (word.empty()) throw AlgebraError("cannot evaluate an empty word");
  const Presentation& p = A.presentation();
  AlgebraElement v = AlgebraElement::unit(A, p.arrows[word[0]].src);
  for (int ai : word) {
    // find the arrow's basis element
    int idx = -1;
    for (int k : A.piece(p.arrows[ai].src, p.arrows[ai].tgt))
      if (A.path(k).length == 1 && A.path(k).arrows[0] == ai) {
        idx = k;
        break;
      }
    if (idx < 0) return AlgebraElement(A);  // arrow reduced to zero: impossible for admissible
    v = mul(AlgebraElement::from_path(A, idx), v);
    if (v.is_zero()) return v;
  }
  return v;
}

AlgebraElement eval_relation(const AlgebraBasis& A, const Relation& rel) {
  AlgebraElement acc(A);
  for (const RelTerm& t : rel.terms)
    acc.add_in(scale(eval_word(A, t.arrows), t.coeff));
  return acc;
}

CartanData cartan_coxeter(const AlgebraBasis& A) {
  const int n = A.num_vertices();
  CartanData out;
  out.cartan.assign(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.cartan[i][j] = A.piece_dim(j, i);  // vertex-i part of the projective at j

  Field Q = Field::rationals();
  Mat C(n, n, Q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) C.at(i, j) = Q.from_int(out.cartan[i][j]);

  // determinant via char poly: det = (-1)^n * constant coefficient
  std::vector<Scalar> cp = char_poly(C, Q);
  BigRat c0 = std::get<BigRat>(cp[0]);
  BigRat det = (n % 2 == 0) ? c0 : BigRat(-c0);
  out.det = static_cast<std::int64_t>(numerator(det));
  out.invertible_over_q = det != 0;
  out.unimodular = (det == 1 || det == -1);
  if (!out.invertible_over_q) return out;

  Mat Cinv = *inverse(C, Q);
  Mat phi = mat_scale(mat_mul(transpose(Cinv, Q), C, Q), Q.from_int(-1), Q);
  out.coxeter.assign(n, std::vector<BigRat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.coxeter[i][j] = std::get<BigRat>(phi.at(i, j));
  std::vector<Scalar> pcp = char_poly(phi, Q);
  out.char_poly_integral = true;
  for (const Scalar& s : pcp) {
    out.char_poly_ascending.push_back(std::get<BigRat>(s));
    if (denominator(out.char_poly_ascending.back()) != 1)
      out.char_poly_integral = false;
  }
  return out;
}

}  // namespace qperf
