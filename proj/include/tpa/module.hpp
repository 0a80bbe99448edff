#pragma once
// Finite-dimensional left modules over a truncated path algebra, in the two
// interchangeable encodings:
//
//   * ModuleRep  — a representation: one K-space per vertex plus one matrix
//     per arrow (shape dim(tgt) x dim(src), column-vector convention).
//   * ModulePres — a projective presentation P/C with P = ⊕_r Λ e_{slot(r)}
//     and C an admissible (radical-contained) submodule given by generators.
//
// Conversions in both directions return the explicit intertwiners (cover,
// section) so that results can be transported between encodings and verified.
//
// Global coordinates of a ModuleRep are vertex-major: all coordinates of the
// first declared vertex, then the second, and so on.

#include "algebra.hpp"
#include "linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tpa {

// ---------------------------------------------------------------------------
// ModuleRep
// ---------------------------------------------------------------------------
template <class K>
class ModuleRep {
public:
  ModuleRep() : alg_(nullptr) {}

  ModuleRep(const TruncatedAlgebra& A, std::vector<std::size_t> vdims,
            std::vector<Mat<K>> amats)
      : alg_(&A), vdims_(std::move(vdims)), amats_(std::move(amats)) {
    const Quiver& q = A.quiver();
    if (vdims_.size() != q.n_vertices())
      throw std::invalid_argument("ModuleRep: dimension vector has " +
                                  std::to_string(vdims_.size()) +
                                  " entries, quiver has " +
                                  std::to_string(q.n_vertices()) + " vertices");
    if (amats_.size() != q.n_arrows())
      throw std::invalid_argument("ModuleRep: expected one matrix per arrow");
    offs_.assign(vdims_.size() + 1, 0);
    for (std::size_t i = 0; i < vdims_.size(); ++i)
      offs_[i + 1] = offs_[i] + vdims_[i];
    for (std::size_t a = 0; a < amats_.size(); ++a) {
      std::size_t s = q.vertex_index(q.arrow(a).src);
      std::size_t t = q.vertex_index(q.arrow(a).tgt);
      if (amats_[a].rows() != vdims_[t] || amats_[a].cols() != vdims_[s])
        throw std::invalid_argument("ModuleRep: matrix for arrow '" +
                                    q.arrow(a).name + "' must be " +
                                    std::to_string(vdims_[t]) + "x" +
                                    std::to_string(vdims_[s]));
    }
  }

  static ModuleRep zero_module(const TruncatedAlgebra& A) {
    const Quiver& q = A.quiver();
    std::vector<std::size_t> d(q.n_vertices(), 0);
    std::vector<Mat<K>> m(q.n_arrows(), Mat<K>(0, 0));
    return ModuleRep(A, std::move(d), std::move(m));
  }

  const TruncatedAlgebra& algebra() const { return *alg_; }
  const Quiver& quiver() const { return alg_->quiver(); }

  std::size_t dim() const { return offs_.back(); }
  std::size_t vdim(std::size_t vertex_idx) const { return vdims_.at(vertex_idx); }
  std::size_t vdim_of(int vertex_id) const {
    return vdims_.at(quiver().vertex_index(vertex_id));
  }
  const std::vector<std::size_t>& vdims() const { return vdims_; }
  std::size_t offset(std::size_t vertex_idx) const { return offs_.at(vertex_idx); }
  const Mat<K>& arrow_matrix(std::size_t a) const { return amats_.at(a); }

  // Vertex index owning a global coordinate.
  std::size_t vertex_of_coord(std::size_t g) const {
    for (std::size_t vi = 0; vi + 1 < offs_.size(); ++vi)
      if (g < offs_[vi + 1]) return vi;
    throw std::out_of_range("ModuleRep: coordinate out of range");
  }

  // y = a . x on global vectors.
  std::vector<K> act_arrow(std::size_t a, const std::vector<K>& x) const {
    const Quiver& q = quiver();
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    std::vector<K> y(dim(), K::zero());
    const Mat<K>& m = amats_[a];
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero() && !x[offs_[s] + j].is_zero())
          y[offs_[t] + i] += m(i, j) * x[offs_[s] + j];
    return y;
  }

  // Sparse variant; x must be supported at the arrow's source block (other
  // coordinates are ignored by the source-block slice).
  SVec<K> act_arrow_sparse(std::size_t a, const SVec<K>& x) const {
    const Quiver& q = quiver();
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    const Mat<K>& m = amats_[a];
    std::vector<K> y(m.rows(), K::zero());
    for (const auto& [g, val] : x) {
      if (g < offs_[s] || g >= offs_[s + 1]) continue;
      std::size_t j = g - offs_[s];
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (!m(i, j).is_zero()) y[i] += m(i, j) * val;
    }
    SVec<K> out;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!y[i].is_zero()) out.emplace_back(offs_[t] + i, y[i]);
    return out;
  }

  std::vector<K> act_path(const QPath& p, const std::vector<K>& x) const {
    std::vector<K> y = x;
    for (std::size_t ai : p.arrows) y = act_arrow(ai, y);
    if (p.arrows.empty()) {
      // e_v acts as the projection onto the v block.
      std::size_t vi = quiver().vertex_index(p.start);
      std::vector<K> z(dim(), K::zero());
      for (std::size_t j = 0; j < vdims_[vi]; ++j) z[offs_[vi] + j] = x[offs_[vi] + j];
      return z;
    }
    return y;
  }

  // Throws InvariantError unless J^{L+1} acts as zero.
  void validate() const {
    std::vector<SVec<K>> cur;
    for (std::size_t g = 0; g < dim(); ++g) cur.push_back(svec_unit<K>(g));
    for (std::size_t step = 0; step <= alg_->L(); ++step) {
      RowSpace<K> next;
      const Quiver& q = quiver();
      for (const auto& row : cur)
        for (std::size_t a = 0; a < q.n_arrows(); ++a) {
          SVec<K> img = act_arrow_sparse(a, row);
          if (!img.empty()) next.insert(img);
        }
      cur = next.rows();
      if (cur.empty()) return;
    }
    throw InvariantError("representation does not satisfy the truncation: "
                         "paths of length " + std::to_string(alg_->L() + 1) +
                         " act non-trivially");
  }

private:
  const TruncatedAlgebra* alg_;
  std::vector<std::size_t> vdims_;
  std::vector<Mat<K>> amats_;
  std::vector<std::size_t> offs_;
};

// ---------------------------------------------------------------------------
// Graded row spaces and sub/quotient constructions.
// ---------------------------------------------------------------------------

// Splits a global vector into its vertex-homogeneous pieces.
template <class K>
std::vector<SVec<K>> graded_pieces(const ModuleRep<K>& M, const SVec<K>& v) {
  std::map<std::size_t, SVec<K>> by_vertex;
  for (const auto& [g, val] : v) by_vertex[M.vertex_of_coord(g)].emplace_back(g, val);
  std::vector<SVec<K>> out;
  for (auto& [vi, piece] : by_vertex) out.push_back(std::move(piece));
  return out;
}

// Span of the given vectors closed under the arrow action; rows stay
// vertex-homogeneous.
template <class K>
RowSpace<K> submodule_closure(const ModuleRep<K>& M,
                              const std::vector<SVec<K>>& gens) {
  RowSpace<K> W;
  std::queue<SVec<K>> work;
  for (const auto& g : gens)
    for (auto& piece : graded_pieces(M, g)) work.push(piece);
  const Quiver& q = M.quiver();
  while (!work.empty()) {
    SVec<K> x = std::move(work.front());
    work.pop();
    if (x.empty() || !W.insert(x)) continue;
    int v = q.vertex_id(M.vertex_of_coord(x.front().first));
    for (std::size_t a : q.arrows_from(v)) {
      SVec<K> img = M.act_arrow_sparse(a, x);
      if (!img.empty()) work.push(img);
    }
  }
  return W;
}

// Radical J.M as a row space (already closed under the action).
template <class K>
RowSpace<K> radical_rowspace(const ModuleRep<K>& M) {
  RowSpace<K> W;
  const Quiver& q = M.quiver();
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    for (std::size_t j = 0; j < M.vdim(s); ++j) {
      SVec<K> img = M.act_arrow_sparse(a, svec_unit<K>(M.offset(s) + j));
      if (!img.empty()) W.insert(img);
    }
  }
  return W;
}

template <class K>
struct SubQuot {
  ModuleRep<K> rep;
  Mat<K> map;  // inclusion (dim M x dim sub) or projection (dim quot x dim M)
};

namespace detail {
// Rows of a graded row space grouped by vertex, as dense local vectors in
// ascending-pivot order; checks homogeneity.
template <class K>
std::vector<std::vector<std::vector<K>>> rows_by_vertex(const ModuleRep<K>& M,
                                                        const RowSpace<K>& W) {
  std::vector<std::vector<std::pair<std::size_t, SVec<K>>>> grouped(
      M.quiver().n_vertices());
  for (const auto& row : W.rows()) {
    std::size_t vi = M.vertex_of_coord(row.front().first);
    for (const auto& [g, val] : row)
      if (M.vertex_of_coord(g) != vi)
        throw InvariantError("row space is not vertex-homogeneous");
    grouped[vi].emplace_back(row.front().first, row);
  }
  std::vector<std::vector<std::vector<K>>> out(grouped.size());
  for (std::size_t vi = 0; vi < grouped.size(); ++vi) {
    std::sort(grouped[vi].begin(), grouped[vi].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [piv, row] : grouped[vi]) {
      std::vector<K> loc(M.vdim(vi), K::zero());
      for (const auto& [g, val] : row) loc[g - M.offset(vi)] = val;
      out[vi].push_back(std::move(loc));
    }
  }
  return out;
}
}  // namespace detail

// The submodule spanned by a closed graded row space, with its inclusion.
template <class K>
SubQuot<K> sub_rep(const ModuleRep<K>& M, const RowSpace<K>& W) {
  const TruncatedAlgebra& A = M.algebra();
  const Quiver& q = M.quiver();
  auto rows = detail::rows_by_vertex(M, W);
  std::vector<std::size_t> sdims(q.n_vertices());
  for (std::size_t vi = 0; vi < rows.size(); ++vi) sdims[vi] = rows[vi].size();
  // Local pivot positions for coordinate extraction: the rows are fully
  // reduced, so the coefficient of row i in any member is its value at
  // row i's pivot.
  std::vector<std::vector<std::size_t>> piv(q.n_vertices());
  for (std::size_t vi = 0; vi < rows.size(); ++vi)
    for (const auto& r : rows[vi]) {
      std::size_t p = 0;
      while (r[p].is_zero()) ++p;
      piv[vi].push_back(p);
    }
  auto coords_at = [&](std::size_t vi, const std::vector<K>& y) {
    std::vector<K> c(rows[vi].size(), K::zero());
    for (std::size_t i = 0; i < rows[vi].size(); ++i) c[i] = y[piv[vi][i]];
    std::vector<K> check(y.size(), K::zero());
    for (std::size_t i = 0; i < rows[vi].size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j)
        check[j] += c[i] * rows[vi][i][j];
    if (check != y)
      throw InvariantError("sub_rep: the row space is not arrow-closed");
    return c;
  };
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(sdims[t], sdims[s]);
    for (std::size_t j = 0; j < sdims[s]; ++j) {
      std::vector<K> y = M.arrow_matrix(a).apply(rows[s][j]);
      std::vector<K> c = coords_at(t, y);
      for (std::size_t i = 0; i < sdims[t]; ++i) m(i, j) = c[i];
    }
    amats.push_back(std::move(m));
  }
  SubQuot<K> out{ModuleRep<K>(A, sdims, std::move(amats)), Mat<K>(M.dim(), 0)};
  // Inclusion columns: the basis rows embedded globally, vertex-major.
  std::vector<std::vector<K>> cols;
  for (std::size_t vi = 0; vi < rows.size(); ++vi)
    for (const auto& r : rows[vi]) {
      std::vector<K> g(M.dim(), K::zero());
      for (std::size_t j = 0; j < r.size(); ++j) g[M.offset(vi) + j] = r[j];
      cols.push_back(std::move(g));
    }
  out.map = cols.empty() ? Mat<K>(M.dim(), 0) : Mat<K>::from_columns(cols);
  return out;
}

// The quotient of M by a closed graded row space, with its projection.
template <class K>
SubQuot<K> quotient_rep(const ModuleRep<K>& M, const RowSpace<K>& W) {
  const TruncatedAlgebra& A = M.algebra();
  const Quiver& q = M.quiver();
  // Quotient basis: classes of the non-pivot standard coordinates.
  std::vector<std::size_t> qcoords;  // global coordinates, ascending
  std::vector<std::size_t> qdims(q.n_vertices(), 0);
  std::map<std::size_t, std::size_t> qpos;  // global coord -> quotient coord
  for (std::size_t g = 0; g < M.dim(); ++g) {
    if (W.has_pivot(g)) continue;
    qpos[g] = qcoords.size();
    qcoords.push_back(g);
    qdims[M.vertex_of_coord(g)]++;
  }
  auto project = [&](const SVec<K>& x) {
    SVec<K> r = W.reduce(x);
    std::vector<K> out(qcoords.size(), K::zero());
    for (const auto& [g, val] : r) out[qpos.at(g)] = val;
    return out;
  };
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(qdims[t], qdims[s]);
    std::size_t base_t = 0, base_s = 0;
    for (std::size_t vi = 0; vi < t; ++vi) base_t += qdims[vi];
    for (std::size_t vi = 0; vi < s; ++vi) base_s += qdims[vi];
    std::size_t col = 0;
    for (std::size_t g : qcoords) {
      if (M.vertex_of_coord(g) != s) continue;
      std::vector<K> y = project(M.act_arrow_sparse(a, svec_unit<K>(g)));
      for (std::size_t i = 0; i < qdims[t]; ++i) m(i, col) = y[base_t + i];
      ++col;
    }
    amats.push_back(std::move(m));
  }
  SubQuot<K> out{ModuleRep<K>(A, qdims, std::move(amats)),
                 Mat<K>(qcoords.size(), M.dim())};
  for (std::size_t g = 0; g < M.dim(); ++g) {
    std::vector<K> y = project(svec_unit<K>(g));
    for (std::size_t i = 0; i < qcoords.size(); ++i) out.map(i, g) = y[i];
  }
  return out;
}

template <class K>
SubQuot<K> top_rep(const ModuleRep<K>& M) {
  return quotient_rep(M, radical_rowspace(M));
}

// Per-vertex socle dimensions (socle = joint kernel of the arrows leaving
// each vertex).
template <class K>
std::vector<std::size_t> socle_dims(const ModuleRep<K>& M) {
  const Quiver& q = M.quiver();
  std::vector<std::size_t> out(q.n_vertices(), 0);
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    int v = q.vertex_id(vi);
    const auto& arrs = q.arrows_from(v);
    if (arrs.empty()) { out[vi] = M.vdim(vi); continue; }
    std::size_t rows = 0;
    for (std::size_t a : arrs) rows += M.arrow_matrix(a).rows();
    Mat<K> st(rows, M.vdim(vi));
    std::size_t r0 = 0;
    for (std::size_t a : arrs) {
      const Mat<K>& m = M.arrow_matrix(a);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) st(r0 + i, j) = m(i, j);
      r0 += m.rows();
    }
    out[vi] = M.vdim(vi) - st.rank();
  }
  return out;
}

// Dimension vectors of the radical layers J^l M / J^{l+1} M, by vertex index;
// the list stops before the first all-zero layer.
template <class K>
std::vector<std::vector<std::size_t>> radical_layering(const ModuleRep<K>& M) {
  const Quiver& q = M.quiver();
  auto vertex_ranks = [&](const RowSpace<K>& W) {
    std::vector<std::size_t> r(q.n_vertices(), 0);
    for (std::size_t p : W.pivots()) r[M.vertex_of_coord(p)]++;
    return r;
  };
  std::vector<std::vector<std::size_t>> layer_dims;
  // J^0 M = M.
  std::vector<std::size_t> prev(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) prev[vi] = M.vdim(vi);
  std::vector<SVec<K>> cur;
  for (std::size_t g = 0; g < M.dim(); ++g) cur.push_back(svec_unit<K>(g));
  while (true) {
    RowSpace<K> next;
    for (const auto& row : cur)
      for (std::size_t a = 0; a < q.n_arrows(); ++a) {
        SVec<K> img = M.act_arrow_sparse(a, row);
        if (!img.empty()) next.insert(img);
      }
    std::vector<std::size_t> nr = vertex_ranks(next);
    std::vector<std::size_t> layer(q.n_vertices());
    bool any = false;
    for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
      layer[vi] = prev[vi] - nr[vi];
      if (layer[vi]) any = true;
    }
    if (any || layer_dims.empty()) layer_dims.push_back(layer);
    if (next.rank() == 0) break;
    prev = nr;
    cur = next.rows();
  }
  return layer_dims;
}

// epsilon M: the span of the components at non-precyclic vertices (a
// submodule, since arrows leaving non-precyclic vertices stay non-precyclic).
template <class K>
RowSpace<K> eps_rowspace(const ModuleRep<K>& M) {
  const auto& cls = M.algebra().classification();
  const Quiver& q = M.quiver();
  RowSpace<K> W;
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    if (cls.is_precyclic(q.vertex_id(vi))) continue;
    for (std::size_t j = 0; j < M.vdim(vi); ++j)
      W.insert(svec_unit<K>(M.offset(vi) + j));
  }
  return W;
}

template <class K>
SubQuot<K> eps_submodule(const ModuleRep<K>& M) {
  return sub_rep(M, eps_rowspace(M));
}

// The functor F: M -> M / (epsilon J M).
template <class K>
SubQuot<K> eps_truncate(const ModuleRep<K>& M) {
  const auto& cls = M.algebra().classification();
  const Quiver& q = M.quiver();
  RowSpace<K> J = radical_rowspace(M);
  RowSpace<K> W;
  for (const auto& row : J.rows()) {
    int v = q.vertex_id(M.vertex_of_coord(row.front().first));
    if (!cls.is_precyclic(v)) W.insert(row);
  }
  return quotient_rep(M, W);
}

// ---------------------------------------------------------------------------
// Direct sums.
// ---------------------------------------------------------------------------
template <class K>
struct SumRep {
  ModuleRep<K> rep;
  std::vector<Mat<K>> inj;   // dim(sum) x dim(part)
  std::vector<Mat<K>> proj;  // dim(part) x dim(sum)
};

template <class K>
SumRep<K> direct_sum(const TruncatedAlgebra& A,
                     const std::vector<const ModuleRep<K>*>& parts) {
  const Quiver& q = A.quiver();
  std::size_t n = q.n_vertices();
  std::vector<std::size_t> dims(n, 0);
  for (const auto* p : parts)
    for (std::size_t vi = 0; vi < n; ++vi) dims[vi] += p->vdim(vi);
  // Within each vertex block, part 0 first, then part 1, ...
  std::vector<std::size_t> offs(n + 1, 0);
  for (std::size_t vi = 0; vi < n; ++vi) offs[vi + 1] = offs[vi] + dims[vi];
  // start of part k inside vertex block vi
  std::vector<std::vector<std::size_t>> part_base(parts.size(),
                                                  std::vector<std::size_t>(n, 0));
  for (std::size_t vi = 0; vi < n; ++vi) {
    std::size_t acc = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      part_base[k][vi] = acc;
      acc += parts[k]->vdim(vi);
    }
  }
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(dims[t], dims[s]);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const Mat<K>& pm = parts[k]->arrow_matrix(a);
      for (std::size_t i = 0; i < pm.rows(); ++i)
        for (std::size_t j = 0; j < pm.cols(); ++j)
          m(part_base[k][t] + i, part_base[k][s] + j) = pm(i, j);
    }
    amats.push_back(std::move(m));
  }
  SumRep<K> out;
  out.rep = ModuleRep<K>(A, dims, std::move(amats));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    Mat<K> in(out.rep.dim(), parts[k]->dim());
    Mat<K> pr(parts[k]->dim(), out.rep.dim());
    for (std::size_t vi = 0; vi < n; ++vi)
      for (std::size_t j = 0; j < parts[k]->vdim(vi); ++j) {
        std::size_t big = offs[vi] + part_base[k][vi] + j;
        std::size_t small = parts[k]->offset(vi) + j;
        in(big, small) = K::one();
        pr(small, big) = K::one();
      }
    out.inj.push_back(std::move(in));
    out.proj.push_back(std::move(pr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard constructions: simples, interval modules Lambda(v, l) (hence the
// indecomposable projectives), and the injective envelopes E(S_i).
// ---------------------------------------------------------------------------
template <class K>
ModuleRep<K> simple_rep(const TruncatedAlgebra& A, int vertex_id) {
  const Quiver& q = A.quiver();
  std::vector<std::size_t> dims(q.n_vertices(), 0);
  dims[q.vertex_index(vertex_id)] = 1;
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    amats.emplace_back(dims[t], dims[s]);
  }
  return ModuleRep<K>(A, std::move(dims), std::move(amats));
}

// Lambda(v, l): the interval module e_v Lambda / J^{L-l+1} e_v Lambda viewed
// as a left module -- basis = paths from v of length <= L - l, arrows acting
// by left composition with truncation at L - l.  l = 0 gives Lambda e_v.
// labels (optional out): for each global coordinate, the pair (vertex id of
// the coordinate, path from v it represents).
template <class K>
ModuleRep<K> interval_rep(const TruncatedAlgebra& A, int v, std::size_t ell,
                          std::vector<std::pair<int, QPath>>* labels = nullptr) {
  const Quiver& q = A.quiver();
  if (ell > A.L())
    throw std::invalid_argument("interval_rep: l exceeds the truncation bound");
  std::size_t cap = A.L() - ell;
  std::vector<QPath> paths = enumerate_paths_any_end(q, v, 0, cap);
  std::vector<std::vector<QPath>> by_vertex(q.n_vertices());
  for (const auto& p : paths) by_vertex[q.vertex_index(p.end(q))].push_back(p);
  std::vector<std::size_t> dims(q.n_vertices());
  std::vector<std::map<QPath, std::size_t>> pos(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    dims[vi] = by_vertex[vi].size();
    for (std::size_t j = 0; j < by_vertex[vi].size(); ++j)
      pos[vi][by_vertex[vi][j]] = j;
  }
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(dims[t], dims[s]);
    for (std::size_t j = 0; j < dims[s]; ++j) {
      QPath ext = by_vertex[s][j];
      if (ext.length() + 1 > cap) continue;
      ext.arrows.push_back(a);
      m(pos[t].at(ext), j) = K::one();
    }
    amats.push_back(std::move(m));
  }
  if (labels) {
    labels->clear();
    for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
      for (const auto& p : by_vertex[vi]) labels->emplace_back(q.vertex_id(vi), p);
  }
  return ModuleRep<K>(A, std::move(dims), std::move(amats));
}

template <class K>
ModuleRep<K> projective_rep(const TruncatedAlgebra& A, int v,
                            std::vector<std::pair<int, QPath>>* labels = nullptr) {
  return interval_rep<K>(A, v, 0, labels);
}

// E(S_i) = D(e_i Lambda): basis = duals q* of the paths q ending at i,
// graded by start(q); an arrow acts by stripping itself off the front.
// labels (optional out): per global coordinate, (vertex id, the path q).
template <class K>
ModuleRep<K> injective_env_rep(const TruncatedAlgebra& A, int i,
                               std::vector<std::pair<int, QPath>>* labels = nullptr) {
  const Quiver& q = A.quiver();
  std::vector<std::vector<QPath>> by_vertex(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    by_vertex[vi] = enumerate_paths(q, q.vertex_id(vi), i, 0, A.L());
  std::vector<std::size_t> dims(q.n_vertices());
  std::vector<std::map<QPath, std::size_t>> pos(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    dims[vi] = by_vertex[vi].size();
    for (std::size_t j = 0; j < by_vertex[vi].size(); ++j)
      pos[vi][by_vertex[vi][j]] = j;
  }
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(dims[t], dims[s]);
    for (std::size_t j = 0; j < dims[s]; ++j) {
      const QPath& p = by_vertex[s][j];
      if (p.arrows.empty() || p.arrows.front() != a) continue;
      QPath rest;
      rest.start = q.arrow(a).tgt;
      rest.arrows.assign(p.arrows.begin() + 1, p.arrows.end());
      m(pos[t].at(rest), j) = K::one();
    }
    amats.push_back(std::move(m));
  }
  if (labels) {
    labels->clear();
    for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
      for (const auto& p : by_vertex[vi]) labels->emplace_back(q.vertex_id(vi), p);
  }
  return ModuleRep<K>(A, std::move(dims), std::move(amats));
}

// ---------------------------------------------------------------------------
// Homomorphism spaces.
// ---------------------------------------------------------------------------

// Basis of Hom(X, Y), each element a global dim(Y) x dim(X) matrix
// (block-diagonal across vertices).  Canonical: the kernel basis of the
// intertwining system in the vertex-major unknown order.
template <class K>
std::vector<Mat<K>> hom_space(const ModuleRep<K>& X, const ModuleRep<K>& Y) {
  const Quiver& q = X.quiver();
  std::size_t nunk = 0;
  std::vector<std::size_t> ubase(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    ubase[vi] = nunk;
    nunk += Y.vdim(vi) * X.vdim(vi);
  }
  std::size_t neq = 0;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    neq += Y.vdim(t) * X.vdim(s);
  }
  Mat<K> sys(neq, nunk);
  std::size_t row = 0;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    const Mat<K>& Xa = X.arrow_matrix(a);
    const Mat<K>& Ya = Y.arrow_matrix(a);
    for (std::size_t r = 0; r < Y.vdim(t); ++r)
      for (std::size_t c = 0; c < X.vdim(s); ++c) {
        // (F_t Xa)(r,c) - (Ya F_s)(r,c) = 0
        for (std::size_t k = 0; k < X.vdim(t); ++k)
          sys(row, ubase[t] + r * X.vdim(t) + k) += Xa(k, c);
        for (std::size_t k = 0; k < Y.vdim(s); ++k)
          sys(row, ubase[s] + k * X.vdim(s) + c) -= Ya(r, k);
        ++row;
      }
  }
  std::vector<Mat<K>> basis;
  for (const auto& sol : sys.kernel_basis()) {
    Mat<K> F(Y.dim(), X.dim());
    for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
      for (std::size_t r = 0; r < Y.vdim(vi); ++r)
        for (std::size_t c = 0; c < X.vdim(vi); ++c)
          F(Y.offset(vi) + r, X.offset(vi) + c) =
              sol[ubase[vi] + r * X.vdim(vi) + c];
    basis.push_back(std::move(F));
  }
  return basis;
}

template <class K>
std::size_t hom_dim(const ModuleRep<K>& X, const ModuleRep<K>& Y) {
  return hom_space(X, Y).size();
}

template <class K>
bool is_module_hom(const ModuleRep<K>& X, const ModuleRep<K>& Y,
                   const Mat<K>& F) {
  const Quiver& q = X.quiver();
  if (F.rows() != Y.dim() || F.cols() != X.dim()) return false;
  // Graded: off-diagonal vertex blocks vanish.
  for (std::size_t r = 0; r < F.rows(); ++r)
    for (std::size_t c = 0; c < F.cols(); ++c)
      if (!F(r, c).is_zero() &&
          Y.vertex_of_coord(r) != X.vertex_of_coord(c))
        return false;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    // Compare F . (a . x) with a . (F x) on global standard vectors.
    for (std::size_t g = 0; g < X.dim(); ++g) {
      std::vector<K> x(X.dim(), K::zero());
      x[g] = K::one();
      std::vector<K> lhs = F.apply(X.act_arrow(a, x));
      std::vector<K> rhs = Y.act_arrow(a, F.apply(x));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

// Isomorphism test: equal dimension vectors plus an invertible homomorphism.
// Searches the hom space deterministically (basis elements, then seeded
// random combinations); modules over a field where an iso exists make some
// combination invertible, and 96 exact random trials leave failure odds
// negligible while never producing a false positive.
template <class K>
std::optional<Mat<K>> find_isomorphism(const ModuleRep<K>& X,
                                       const ModuleRep<K>& Y,
                                       std::uint64_t seed = 12345) {
  if (X.vdims() != Y.vdims()) return std::nullopt;
  if (X.dim() == 0) return Mat<K>(0, 0);
  std::vector<Mat<K>> H = hom_space(X, Y);
  if (H.empty()) return std::nullopt;
  for (const auto& F : H)
    if (F.is_invertible()) return F;
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 96; ++trial) {
    Mat<K> F(Y.dim(), X.dim());
    for (const auto& B : H) {
      long c = long(rng() % 19) - 9;
      if (c == 0) continue;
      F = F + B.scaled(K(c));
    }
    if (F.is_invertible()) return F;
  }
  return std::nullopt;
}

template <class K>
bool modules_isomorphic(const ModuleRep<K>& X, const ModuleRep<K>& Y,
                        std::uint64_t seed = 12345) {
  return find_isomorphism(X, Y, seed).has_value();
}

// ---------------------------------------------------------------------------
// ModulePres: projective presentations P/C.
// ---------------------------------------------------------------------------
template <class K>
class ModulePres {
public:
  struct PB {
    std::size_t slot;  // index into slots()
    std::size_t path;  // index into algebra().basis()
  };

  ModulePres() : alg_(nullptr), C_(false) {}

  ModulePres(const TruncatedAlgebra& A, std::vector<int> slots,
             const std::vector<SVec<K>>& relation_gens = {})
      : alg_(&A), slots_(std::move(slots)), C_(false) {
    const Quiver& q = A.quiver();
    for (int v : slots_) q.vertex_index(v);  // throws on unknown vertex
    build_basis_();
    // Validate, split into end-vertex-homogeneous pieces, close under the
    // arrow action.
    std::queue<SVec<K>> work;
    for (const auto& gen : gens_check_split_(relation_gens)) work.push(gen);
    while (!work.empty()) {
      SVec<K> x = std::move(work.front());
      work.pop();
      if (x.empty() || !C_.insert(x)) continue;
      int v = coord_end_vertex(x.front().first);
      for (std::size_t a : q.arrows_from(v)) {
        SVec<K> img = act_arrow(a, x);
        if (!img.empty()) work.push(img);
      }
    }
    for (std::size_t p : C_.pivots())
      if (coord_len(p) == 0)
        throw InvariantError("relation submodule escapes the radical");
    gens_ = relation_gens;
  }

  const TruncatedAlgebra& algebra() const { return *alg_; }
  const Quiver& quiver() const { return alg_->quiver(); }
  const std::vector<int>& slots() const { return slots_; }
  const std::vector<PB>& pbasis() const { return pbasis_; }
  const RowSpace<K>& C() const { return C_; }
  const std::vector<SVec<K>>& generators() const { return gens_; }

  std::size_t dimP() const { return pbasis_.size(); }
  std::size_t dim() const { return dimP() - C_.rank(); }

  std::size_t coord(std::size_t slot, std::size_t path_idx) const {
    auto it = cpos_.find({slot, path_idx});
    if (it == cpos_.end())
      throw std::invalid_argument("ModulePres: no such coordinate");
    return it->second;
  }
  std::size_t coord_len(std::size_t c) const {
    return alg_->path(pbasis_[c].path).length();
  }
  int coord_end_vertex(std::size_t c) const {
    return alg_->path(pbasis_[c].path).end(quiver());
  }
  std::string coord_label(std::size_t c) const {
    return alg_->path_str(pbasis_[c].path) + "@" +
           std::to_string(pbasis_[c].slot + 1);
  }

  // a . coordinate, as a coordinate (nullopt when truncation kills it).
  std::optional<std::size_t> act_arrow_coord(std::size_t a, std::size_t c) const {
    auto img = alg_->arrow_after(a, pbasis_[c].path);
    if (!img) return std::nullopt;
    return coord(pbasis_[c].slot, *img);
  }

  SVec<K> act_arrow(std::size_t a, const SVec<K>& x) const {
    SVec<K> out;
    for (const auto& [c, val] : x) {
      auto img = act_arrow_coord(a, c);
      if (img) svec_axpy(out, val, svec_unit<K>(*img));
    }
    return out;
  }

  SVec<K> act_path(const QPath& p, const SVec<K>& x) const {
    if (p.arrows.empty()) {
      // e_v keeps the coordinates whose path ends at v.
      SVec<K> y;
      for (const auto& [c, val] : x)
        if (coord_end_vertex(c) == p.start) y.emplace_back(c, val);
      return y;
    }
    SVec<K> y = x;
    for (std::size_t ai : p.arrows) y = act_arrow(ai, y);
    return y;
  }

  // Canonical representative of the class of unit(c) modulo C.
  SVec<K> residual(std::size_t c) const { return C_.reduce(svec_unit<K>(c)); }

  // P / (epsilon C): keep only the relation rows at precyclic end vertices.
  ModulePres eps_pres() const {
    const auto& cls = alg_->classification();
    std::vector<SVec<K>> gens;
    for (const auto& row : C_.rows())
      if (!cls.is_precyclic(coord_end_vertex(row.front().first)))
        gens.push_back(row);
    return ModulePres(*alg_, slots_, gens);
  }

  // P / (C + epsilon J P): the presentation of F(M) = M / (epsilon J M).
  ModulePres f_pres() const {
    const auto& cls = alg_->classification();
    std::vector<SVec<K>> gens = C_.rows();
    for (std::size_t c = 0; c < dimP(); ++c)
      if (coord_len(c) >= 1 && !cls.is_precyclic(coord_end_vertex(c)))
        gens.push_back(svec_unit<K>(c));
    return ModulePres(*alg_, slots_, gens);
  }

private:
  void build_basis_() {
    // Order: length-major, then slot, then the algebra's arrow-lex order.
    const auto& basis = alg_->basis();
    for (std::size_t len = 0; len <= alg_->L(); ++len) {
      for (std::size_t r = 0; r < slots_.size(); ++r) {
        for (std::size_t pi = 0; pi < basis.size(); ++pi) {
          if (basis[pi].length() != len || basis[pi].start != slots_[r]) continue;
          cpos_[{r, pi}] = pbasis_.size();
          pbasis_.push_back({r, pi});
        }
      }
    }
  }

  std::vector<SVec<K>> gens_check_split_(const std::vector<SVec<K>>& gens) const {
    std::vector<SVec<K>> out;
    for (const auto& g : gens) {
      std::map<int, SVec<K>> pieces;
      for (const auto& [c, val] : g) {
        if (c >= dimP())
          throw std::invalid_argument("ModulePres: relation coordinate out of range");
        if (coord_len(c) == 0)
          throw std::invalid_argument(
              "ModulePres: relation involves a slot generator (relations must "
              "lie in the radical of P)");
        pieces[coord_end_vertex(c)].emplace_back(c, val);
      }
      for (auto& [v, piece] : pieces) {
        std::sort(piece.begin(), piece.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.push_back(std::move(piece));
      }
    }
    return out;
  }

  const TruncatedAlgebra* alg_;
  std::vector<int> slots_;
  std::vector<PB> pbasis_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> cpos_;
  RowSpace<K> C_;
  std::vector<SVec<K>> gens_;
};

// ---------------------------------------------------------------------------
// Conversions between the encodings.
// ---------------------------------------------------------------------------
template <class K>
struct PresToRep {
  ModuleRep<K> rep;
  Mat<K> cover;                       // dim M x dim P, the projection P -> M
  Mat<K> section;                     // dim P x dim M, linear; cover*section = 1
  std::vector<std::size_t> mcoords;   // P coordinates chosen as the M basis
};

template <class K>
PresToRep<K> pres_to_rep(const ModulePres<K>& pres) {
  const TruncatedAlgebra& A = pres.algebra();
  const Quiver& q = A.quiver();
  // Basis of M: classes of the non-pivot coordinates, vertex-major.
  std::vector<std::size_t> mcoords;
  std::vector<std::size_t> dims(q.n_vertices(), 0);
  std::map<std::size_t, std::size_t> mpos;  // P coord -> global M coord
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    int v = q.vertex_id(vi);
    for (std::size_t c = 0; c < pres.dimP(); ++c) {
      if (pres.coord_end_vertex(c) != v || pres.C().has_pivot(c)) continue;
      mpos[c] = mcoords.size();
      mcoords.push_back(c);
      dims[vi]++;
    }
  }
  auto to_m = [&](const SVec<K>& r) {
    std::vector<K> out(mcoords.size(), K::zero());
    for (const auto& [c, val] : r) out[mpos.at(c)] = val;
    return out;
  };
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t s = q.vertex_index(q.arrow(a).src);
    std::size_t t = q.vertex_index(q.arrow(a).tgt);
    Mat<K> m(dims[t], dims[s]);
    std::size_t col = 0;
    for (std::size_t c : mcoords) {
      if (pres.coord_end_vertex(c) != q.arrow(a).src) continue;
      auto img = pres.act_arrow_coord(a, c);
      if (img) {
        std::vector<K> y = to_m(pres.residual(*img));
        std::size_t base = 0;
        for (std::size_t vi = 0; vi < t; ++vi) base += dims[vi];
        for (std::size_t i = 0; i < dims[t]; ++i) m(i, col) = y[base + i];
      }
      ++col;
    }
    amats.push_back(std::move(m));
  }
  PresToRep<K> out;
  out.rep = ModuleRep<K>(A, dims, std::move(amats));
  out.mcoords = mcoords;
  out.cover = Mat<K>(mcoords.size(), pres.dimP());
  for (std::size_t c = 0; c < pres.dimP(); ++c) {
    std::vector<K> y = to_m(pres.residual(c));
    for (std::size_t i = 0; i < mcoords.size(); ++i) out.cover(i, c) = y[i];
  }
  out.section = Mat<K>(pres.dimP(), mcoords.size());
  for (std::size_t i = 0; i < mcoords.size(); ++i)
    out.section(mcoords[i], i) = K::one();
  return out;
}

template <class K>
struct RepToPres {
  ModulePres<K> pres;
  Mat<K> cover;  // dim M x dim P: the projective cover P -> M
};

template <class K>
RepToPres<K> pres_of_rep(const ModuleRep<K>& M) {
  const TruncatedAlgebra& A = M.algebra();
  const Quiver& q = A.quiver();
  // Standard-basis lifts of a basis of M / JM, in vertex-major order.
  RowSpace<K> ext = radical_rowspace(M);
  std::vector<int> slots;
  std::vector<std::size_t> tops;  // global M coordinates
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    for (std::size_t j = 0; j < M.vdim(vi); ++j) {
      std::size_t g = M.offset(vi) + j;
      if (ext.insert(svec_unit<K>(g))) {
        slots.push_back(q.vertex_id(vi));
        tops.push_back(g);
      }
    }
  ModulePres<K> free(A, slots);  // P with no relations yet
  // Phi: P -> M, coordinate (r, p) -> p . z_r.
  Mat<K> phi(M.dim(), free.dimP());
  for (std::size_t c = 0; c < free.dimP(); ++c) {
    const auto& pb = free.pbasis()[c];
    std::vector<K> z(M.dim(), K::zero());
    z[tops[pb.slot]] = K::one();
    std::vector<K> y = M.act_path(A.path(pb.path), z);
    for (std::size_t i = 0; i < M.dim(); ++i) phi(i, c) = y[i];
  }
  // Kernel, block by end vertex (kept graded by construction).
  std::vector<SVec<K>> gens;
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    int v = q.vertex_id(vi);
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < free.dimP(); ++c)
      if (free.coord_end_vertex(c) == v) cols.push_back(c);
    if (cols.empty()) continue;
    Mat<K> blk(M.vdim(vi), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < M.vdim(vi); ++i)
        blk(i, j) = phi(M.offset(vi) + i, cols[j]);
    for (const auto& kv : blk.kernel_basis()) {
      SVec<K> g;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (!kv[j].is_zero()) g.emplace_back(cols[j], kv[j]);
      std::sort(g.begin(), g.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      gens.push_back(std::move(g));
    }
  }
  RepToPres<K> out{ModulePres<K>(A, slots, gens), std::move(phi)};
  if (out.pres.dim() != M.dim())
    throw InvariantError("pres_of_rep: dimension mismatch after presenting");
  return out;
}

// ---------------------------------------------------------------------------
// Skeleta and critical paths.
// ---------------------------------------------------------------------------
struct Skeleton {
  std::vector<std::vector<std::size_t>> layers;  // P coordinates per layer
  std::set<std::size_t> members;
  std::vector<std::size_t> all;  // flattened, layer-major
};

// A path skeleton of M = P/C: layer l holds coordinates p z_r with
// length(p) = l whose classes induce a basis of J^l M / J^{l+1} M, each an
// arrow extension of a layer-(l-1) member.  Greedy selection in canonical
// coordinate order; pass an RNG to randomize the candidate order inside each
// layer (any order yields a skeleton — Def-equivalent by the exchange
// property — which the randomized-consistency tests exercise).
template <class K>
Skeleton compute_skeleton(const ModulePres<K>& pres,
                          std::mt19937_64* shuffle_rng = nullptr) {
  const Quiver& q = pres.quiver();
  // rank of span{ residual(c) : len(c) >= l } for each l.
  std::size_t L = pres.algebra().L();
  std::vector<std::size_t> jrank(L + 2, 0);
  for (std::size_t l = 0; l <= L + 1; ++l) {
    RowSpace<K> W;
    for (std::size_t c = 0; c < pres.dimP(); ++c)
      if (pres.coord_len(c) >= l) W.insert(pres.residual(c));
    jrank[l] = W.rank();
  }
  Skeleton sk;
  std::vector<std::size_t> prev;
  for (std::size_t l = 0; l <= L; ++l) {
    std::vector<std::size_t> cands;
    if (l == 0) {
      for (std::size_t c = 0; c < pres.dimP(); ++c)
        if (pres.coord_len(c) == 0) cands.push_back(c);
    } else {
      for (std::size_t s : prev)
        for (std::size_t a : q.arrows_from(pres.coord_end_vertex(s))) {
          auto c = pres.act_arrow_coord(a, s);
          if (c) cands.push_back(*c);
        }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    }
    if (shuffle_rng) std::shuffle(cands.begin(), cands.end(), *shuffle_rng);
    RowSpace<K> W;
    for (std::size_t c = 0; c < pres.dimP(); ++c)
      if (pres.coord_len(c) >= l + 1) W.insert(pres.residual(c));
    std::vector<std::size_t> layer;
    for (std::size_t c : cands)
      if (W.insert(pres.residual(c))) layer.push_back(c);
    if (!shuffle_rng) std::sort(layer.begin(), layer.end());
    if (layer.size() != jrank[l] - jrank[l + 1])
      throw InvariantError("skeleton layer has the wrong size");
    if (layer.empty()) break;
    for (std::size_t c : layer) {
      sk.members.insert(c);
      sk.all.push_back(c);
    }
    sk.layers.push_back(std::move(layer));
    prev = sk.layers.back();
  }
  return sk;
}

// sigma-critical coordinates: alive arrow extensions of skeleton members that
// are not themselves in the skeleton.  Canonical ascending order.
template <class K>
std::vector<std::size_t> critical_coords(const ModulePres<K>& pres,
                                         const Skeleton& sk) {
  const Quiver& q = pres.quiver();
  std::vector<std::size_t> crit;
  for (std::size_t s : sk.all)
    for (std::size_t a : q.arrows_from(pres.coord_end_vertex(s))) {
      auto c = pres.act_arrow_coord(a, s);
      if (c && !sk.members.count(*c)) crit.push_back(*c);
    }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
  return crit;
}

// ---------------------------------------------------------------------------
// Layered graph of a module (graph of a skeleton): nodes are the skeleton
// paths, edges show the arrow action expanded over the skeleton basis.
// ---------------------------------------------------------------------------
struct LayeredGraph {
  struct Node {
    std::string label;
    int vertex;
    std::size_t layer;
  };
  struct Edge {
    std::size_t from, to;
    std::string arrow;
    std::string coef;  // "1" marks a plain edge
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> pool_notes;  // non-tree expansions, flagged
  bool is_tree = false;
};

template <class K>
LayeredGraph layered_graph(const ModulePres<K>& pres) {
  const Quiver& q = pres.quiver();
  Skeleton sk = compute_skeleton(pres);
  LayeredGraph g;
  std::map<std::size_t, std::size_t> node_of;  // P coord -> node index
  RowSpace<K> basis(true);
  for (std::size_t l = 0; l < sk.layers.size(); ++l)
    for (std::size_t c : sk.layers[l]) {
      node_of[c] = g.nodes.size();
      g.nodes.push_back({pres.coord_label(c),
                         pres.coord_end_vertex(c), l});
      if (!basis.insert(pres.residual(c)))
        throw InvariantError("skeleton classes are dependent");
    }
  std::vector<std::size_t> incoming(g.nodes.size(), 0);
  for (std::size_t c : sk.all) {
    std::size_t from = node_of.at(c);
    for (std::size_t a : q.arrows_from(pres.coord_end_vertex(c))) {
      auto img = pres.act_arrow_coord(a, c);
      if (!img) continue;
      SVec<K> r = pres.residual(*img);
      if (r.empty()) continue;
      auto expansion = basis.coords_in_generators(r);
      if (!expansion)
        throw InvariantError("arrow image escapes the skeleton span");
      std::size_t terms = 0;
      bool unit = true;
      for (std::size_t i = 0; i < expansion->size(); ++i) {
        const K& cf = (*expansion)[i];
        if (cf.is_zero()) continue;
        ++terms;
        if (!(cf == K::one())) unit = false;
        g.edges.push_back({from, i, q.arrow(a).name, cf.str()});
        incoming[i]++;
      }
      if (terms > 1 || !unit) {
        std::string note = q.arrow(a).name + "*(" + pres.coord_label(c) + ") =";
        bool first = true;
        for (std::size_t i = 0; i < expansion->size(); ++i) {
          const K& cf = (*expansion)[i];
          if (cf.is_zero()) continue;
          note += std::string(first ? " " : " + ") + cf.str() + "*(" +
                  g.nodes[i].label + ")";
          first = false;
        }
        g.pool_notes.push_back(note);
      }
    }
  }
  // Tree = no pools, no closed edge paths (undirected), connected.
  g.is_tree = g.pool_notes.empty();
  {
    std::vector<std::size_t> parent(g.nodes.size());
    for (std::size_t n = 0; n < parent.size(); ++n) parent[n] = n;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = g.nodes.size();
    for (const auto& e : g.edges) {
      std::size_t a = find(e.from), b = find(e.to);
      if (a == b) {
        g.is_tree = false;  // closed edge path
      } else {
        parent[a] = b;
        --components;
      }
    }
    if (g.nodes.size() > 0 && components != 1) g.is_tree = false;
  }
  return g;
}

inline std::string graph_text(const LayeredGraph& g) {
  std::ostringstream out;
  std::size_t nlayers = 0;
  for (const auto& n : g.nodes) nlayers = std::max(nlayers, n.layer + 1);
  for (std::size_t l = 0; l < nlayers; ++l) {
    out << "layer " << l << ":";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i].layer == l)
        out << "  [" << i << "] " << g.nodes[i].label << " (v" << g.nodes[i].vertex
            << ")";
    out << "\n";
  }
  for (const auto& e : g.edges) {
    out << "edge [" << e.from << "] --" << e.arrow << "--> [" << e.to << "]";
    if (e.coef != "1") out << "  coef " << e.coef;
    out << "\n";
  }
  for (const auto& note : g.pool_notes) out << "pooled (flagged): " << note << "\n";
  out << "tree: " << (g.is_tree ? "yes" : "no") << "\n";
  return out.str();
}

inline std::string graph_dot(const LayeredGraph& g) {
  std::ostringstream out;
  out << "digraph skeleton {\n  rankdir=TB;\n  node [shape=box];\n";
  std::size_t nlayers = 0;
  for (const auto& n : g.nodes) nlayers = std::max(nlayers, n.layer + 1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out << "  n" << i << " [label=\"" << g.nodes[i].label << "\\nv"
        << g.nodes[i].vertex << "\"];\n";
  for (std::size_t l = 0; l < nlayers; ++l) {
    out << "  { rank=same;";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i].layer == l) out << " n" << i << ";";
    out << " }\n";
  }
  for (const auto& e : g.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.arrow;
    if (e.coef != "1") out << " (" << e.coef << ")";
    out << "\"";
    if (e.coef != "1") out << ", style=dashed";
    out << "];\n";
  }
  for (const auto& note : g.pool_notes) out << "  // pooled: " << note << "\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Module file IO.
//
// Text, presentation form:
//   slots: [2, 4]
//   relation: 1*(a45*a24@1) - 1*(a45@2)
// Text, representation form:
//   rep:
//   vertex 5: 1
//   arrow a56: 1
// (arrow entries row-major, dim(tgt) x dim(src); absent vertices/arrows are
// zero).  JSON mirrors both shapes; see module_to_json.
// ---------------------------------------------------------------------------
template <class K>
struct ModuleFile {
  std::optional<ModulePres<K>> pres;
  std::optional<ModuleRep<K>> rep;
  bool is_pres() const { return pres.has_value(); }
};

namespace detail {

inline QPath parse_path_expr(const Quiver& q, const std::string& s, int lineno) {
  if (s.rfind("e_", 0) == 0) {
    bool arrow_named_so = false;
    for (const auto& a : q.arrows())
      if (a.name == s) arrow_named_so = true;
    if (!arrow_named_so) {
      int v = 0;
      try {
        v = std::stoi(s.substr(2));
      } catch (...) {
        throw ParseError(lineno, 1, "bad trivial path '" + s + "'");
      }
      if (!q.has_vertex(v))
        throw ParseError(lineno, 1, "trivial path at unknown vertex " + s.substr(2));
      QPath p;
      p.start = v;
      return p;
    }
  }
  // "b*a" means a then b: split and reverse into traversal order.
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t star = s.find('*', pos);
    if (star == std::string::npos) {
      names.push_back(s.substr(pos));
      break;
    }
    names.push_back(s.substr(pos, star - pos));
    pos = star + 1;
  }
  std::reverse(names.begin(), names.end());
  QPath p;
  bool first = true;
  int at = 0;
  for (const auto& name : names) {
    bool found = false;
    for (std::size_t a = 0; a < q.n_arrows(); ++a) {
      if (q.arrow(a).name != name) continue;
      if (first) {
        p.start = q.arrow(a).src;
        at = p.start;
        first = false;
      }
      if (q.arrow(a).src != at)
        throw ParseError(lineno, 1, "path '" + s + "' is not composable at '" +
                                        name + "'");
      p.arrows.push_back(a);
      at = q.arrow(a).tgt;
      found = true;
      break;
    }
    if (!found)
      throw ParseError(lineno, 1, "unknown arrow '" + name + "' in path '" + s + "'");
  }
  return p;
}

inline std::string strip_ws(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\r') out += c;
  return out;
}

struct RelTerm {
  std::string coef;  // textual; empty = 1
  std::string path;
  std::size_t slot;  // 1-based
};

inline std::vector<std::pair<int, RelTerm>> split_relation(const std::string& body,
                                                           int lineno) {
  std::string s = strip_ws(body);
  std::vector<std::pair<int, RelTerm>> out;  // sign, term
  std::size_t pos = 0;
  int sign = +1;
  while (pos < s.size()) {
    if (s[pos] == '+') { sign = +1; ++pos; continue; }
    if (s[pos] == '-') { sign = -1; ++pos; continue; }
    // term: [coef*] ( path @ slot )
    std::size_t open = s.find('(', pos);
    if (open == std::string::npos)
      throw ParseError(lineno, int(pos) + 1,
                       "expected '(path@slot)' in relation term");
    std::string coef = s.substr(pos, open - pos);
    if (!coef.empty()) {
      if (coef.back() != '*')
        throw ParseError(lineno, int(pos) + 1,
                         "expected 'coefficient*(path@slot)'");
      coef.pop_back();
    }
    std::size_t close = s.find(')', open);
    if (close == std::string::npos)
      throw ParseError(lineno, int(open) + 1, "unclosed '(' in relation term");
    std::string inner = s.substr(open + 1, close - open - 1);
    std::size_t at = inner.rfind('@');
    if (at == std::string::npos)
      throw ParseError(lineno, int(open) + 1, "missing '@slot' in relation term");
    RelTerm t;
    t.coef = coef;
    t.path = inner.substr(0, at);
    try {
      long sl = std::stol(inner.substr(at + 1));
      if (sl < 1) throw std::out_of_range("");
      t.slot = std::size_t(sl);
    } catch (...) {
      throw ParseError(lineno, int(open) + 1, "bad slot index in relation term");
    }
    out.emplace_back(sign, t);
    pos = close + 1;
    sign = +1;
  }
  if (out.empty())
    throw ParseError(lineno, 1, "empty relation");
  return out;
}

}  // namespace detail

template <class K>
SVec<K> relation_from_terms(const TruncatedAlgebra& A,
                            const std::vector<int>& slots,
                            const ModulePres<K>& skeleton_pres,
                            const std::vector<std::pair<int, detail::RelTerm>>& terms,
                            int lineno) {
  SVec<K> rel;
  for (const auto& [sign, t] : terms) {
    if (t.slot > slots.size())
      throw ParseError(lineno, 1, "slot " + std::to_string(t.slot) +
                                      " out of range (only " +
                                      std::to_string(slots.size()) + " slots)");
    QPath p = detail::parse_path_expr(A.quiver(), t.path, lineno);
    if (p.start != slots[t.slot - 1])
      throw ParseError(lineno, 1, "path '" + t.path + "' does not start at the "
                                      "vertex of slot " + std::to_string(t.slot));
    auto pi = A.index_of(p);
    if (!pi)
      throw ParseError(lineno, 1, "path '" + t.path +
                                      "' vanishes under the truncation");
    K c = K::one();
    if (!t.coef.empty()) {
      try {
        c = K::parse(t.coef);
      } catch (...) {
        throw ParseError(lineno, 1, "bad coefficient '" + t.coef + "'");
      }
    }
    if (sign < 0) c = -c;
    svec_axpy(rel, c, svec_unit<K>(skeleton_pres.coord(t.slot - 1, *pi)));
  }
  return rel;
}

template <class K>
ModuleFile<K> parse_module_text(const std::string& text,
                                const TruncatedAlgebra& A) {
  const Quiver& q = A.quiver();
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  std::optional<std::vector<int>> slots;
  std::vector<std::vector<std::pair<int, detail::RelTerm>>> relations;
  std::vector<int> rel_lines;
  bool rep_mode = false;
  std::map<int, std::size_t> rep_dims;
  std::map<std::string, std::pair<std::vector<K>, int>> rep_entries;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(lineno, 1, "expected '<keyword>: ...'");
    std::string head = detail::trim(line.substr(0, colon));
    std::string rest = detail::trim(line.substr(colon + 1));
    if (head == "slots") {
      std::string body = detail::strip_ws(rest);
      if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw ParseError(lineno, 1, "expected 'slots: [v1, v2, ...]'");
      std::vector<int> sl;
      std::string inner = body.substr(1, body.size() - 2);
      std::size_t pos = 0;
      while (pos < inner.size()) {
        std::size_t comma = inner.find(',', pos);
        std::string tok = inner.substr(pos, comma == std::string::npos
                                                ? std::string::npos
                                                : comma - pos);
        try {
          sl.push_back(std::stoi(tok));
        } catch (...) {
          throw ParseError(lineno, 1, "bad slot vertex '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      for (int v : sl)
        if (!q.has_vertex(v))
          throw ParseError(lineno, 1, "slot vertex " + std::to_string(v) +
                                          " is not in the quiver");
      slots = sl;
    } else if (head == "relation") {
      relations.push_back(detail::split_relation(rest, lineno));
      rel_lines.push_back(lineno);
    } else if (head == "rep") {
      rep_mode = true;
    } else if (head.rfind("vertex ", 0) == 0) {
      if (!rep_mode) throw ParseError(lineno, 1, "'vertex' outside a rep block");
      int v = 0;
      try {
        v = std::stoi(detail::trim(head.substr(7)));
      } catch (...) {
        throw ParseError(lineno, 1, "bad vertex id");
      }
      if (!q.has_vertex(v))
        throw ParseError(lineno, 1, "unknown vertex " + std::to_string(v));
      try {
        long d = std::stol(rest);
        if (d < 0) throw std::out_of_range("");
        rep_dims[v] = std::size_t(d);
      } catch (...) {
        throw ParseError(lineno, 1, "bad dimension '" + rest + "'");
      }
    } else if (head.rfind("arrow ", 0) == 0) {
      if (!rep_mode) throw ParseError(lineno, 1, "'arrow' outside a rep block");
      std::string name = detail::trim(head.substr(6));
      std::vector<K> entries;
      std::istringstream es(rest);
      std::string tok;
      while (es >> tok) {
        try {
          entries.push_back(K::parse(tok));
        } catch (...) {
          throw ParseError(lineno, 1, "bad matrix entry '" + tok + "'");
        }
      }
      rep_entries[name] = {entries, lineno};
    } else {
      throw ParseError(lineno, 1, "unknown keyword '" + head + "'");
    }
  }

  ModuleFile<K> out;
  if (rep_mode) {
    if (slots || !relations.empty())
      throw ParseError(lineno, 1, "a module file is either a presentation or a "
                                  "rep block, not both");
    std::vector<std::size_t> dims(q.n_vertices(), 0);
    for (const auto& [v, d] : rep_dims) dims[q.vertex_index(v)] = d;
    std::vector<Mat<K>> amats;
    std::set<std::string> seen;
    for (std::size_t a = 0; a < q.n_arrows(); ++a) {
      std::size_t s = q.vertex_index(q.arrow(a).src);
      std::size_t t = q.vertex_index(q.arrow(a).tgt);
      Mat<K> m(dims[t], dims[s]);
      auto it = rep_entries.find(q.arrow(a).name);
      if (it != rep_entries.end()) {
        seen.insert(q.arrow(a).name);
        const auto& [entries, ln] = it->second;
        if (entries.size() != dims[t] * dims[s])
          throw ParseError(ln, 1, "arrow '" + q.arrow(a).name + "' needs " +
                                      std::to_string(dims[t] * dims[s]) +
                                      " entries, got " +
                                      std::to_string(entries.size()));
        for (std::size_t i = 0; i < dims[t]; ++i)
          for (std::size_t j = 0; j < dims[s]; ++j)
            m(i, j) = entries[i * dims[s] + j];
      }
      amats.push_back(std::move(m));
    }
    for (const auto& [name, e] : rep_entries)
      if (!seen.count(name))
        throw ParseError(e.second, 1, "unknown arrow '" + name + "'");
    out.rep = ModuleRep<K>(A, std::move(dims), std::move(amats));
    out.rep->validate();
    return out;
  }
  if (!slots)
    throw ParseError(lineno ? lineno : 1, 1,
                     "module file needs a 'slots:' line or a 'rep:' block");
  ModulePres<K> skel(A, *slots);  // relation-free, for coordinate lookup
  std::vector<SVec<K>> gens;
  for (std::size_t r = 0; r < relations.size(); ++r)
    gens.push_back(
        relation_from_terms<K>(A, *slots, skel, relations[r], rel_lines[r]));
  try {
    out.pres = ModulePres<K>(A, *slots, gens);
  } catch (const std::invalid_argument& e) {
    throw ParseError(rel_lines.empty() ? 1 : rel_lines.front(), 1, e.what());
  }
  return out;
}

template <class K>
ModuleFile<K> parse_module_json(const std::string& text,
                                const TruncatedAlgebra& A) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, int(e.byte), std::string("JSON: ") + e.what());
  }
  auto as_str = [](const nlohmann::json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer()) return std::to_string(x.get<long long>());
    throw ParseError(1, 1, "JSON: expected a string or integer scalar");
  };
  ModuleFile<K> out;
  try {
    if (j.contains("rep")) {
      const auto& r = j.at("rep");
      const Quiver& q = A.quiver();
      std::vector<std::size_t> dims(q.n_vertices(), 0);
      for (auto it = r.at("dims").begin(); it != r.at("dims").end(); ++it)
        dims[q.vertex_index(std::stoi(it.key()))] = it.value().get<std::size_t>();
      std::vector<Mat<K>> amats;
      for (std::size_t a = 0; a < q.n_arrows(); ++a) {
        std::size_t s = q.vertex_index(q.arrow(a).src);
        std::size_t t = q.vertex_index(q.arrow(a).tgt);
        Mat<K> m(dims[t], dims[s]);
        if (r.contains("arrows") && r.at("arrows").contains(q.arrow(a).name)) {
          const auto& rows = r.at("arrows").at(q.arrow(a).name);
          if (rows.size() != dims[t])
            throw ParseError(1, 1, "JSON: arrow '" + q.arrow(a).name +
                                       "' has the wrong number of rows");
          for (std::size_t i = 0; i < dims[t]; ++i) {
            if (rows[i].size() != dims[s])
              throw ParseError(1, 1, "JSON: arrow '" + q.arrow(a).name +
                                         "' has a ragged row");
            for (std::size_t jj = 0; jj < dims[s]; ++jj)
              m(i, jj) = K::parse(as_str(rows[i][jj]));
          }
        }
        amats.push_back(std::move(m));
      }
      if (r.contains("arrows"))
        for (auto it = r.at("arrows").begin(); it != r.at("arrows").end(); ++it) {
          bool known = false;
          for (const auto& a : q.arrows())
            if (a.name == it.key()) known = true;
          if (!known) throw ParseError(1, 1, "JSON: unknown arrow '" + it.key() + "'");
        }
      out.rep = ModuleRep<K>(A, std::move(dims), std::move(amats));
      out.rep->validate();
      return out;
    }
    std::vector<int> slots;
    for (const auto& v : j.at("slots")) slots.push_back(v.get<int>());
    ModulePres<K> skel(A, slots);
    std::vector<SVec<K>> gens;
    if (j.contains("relations"))
      for (const auto& rel : j.at("relations")) {
        std::vector<std::pair<int, detail::RelTerm>> terms;
        for (const auto& t : rel) {
          detail::RelTerm rt;
          rt.coef = t.contains("c") ? as_str(t.at("c")) : "";
          rt.path = t.at("path").get<std::string>();
          rt.slot = t.at("slot").get<std::size_t>();
          terms.emplace_back(+1, rt);
        }
        gens.push_back(relation_from_terms<K>(A, slots, skel, terms, 1));
      }
    out.pres = ModulePres<K>(A, slots, gens);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, 1, std::string("JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, 1, e.what());
  }
  return out;
}

template <class K>
ModuleFile<K> parse_module(const std::string& text, const TruncatedAlgebra& A) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
    if (ch == '{') return parse_module_json<K>(text, A);
    break;
  }
  return parse_module_text<K>(text, A);
}

// Canonical serialization of a presentation: the echelon rows of C.
template <class K>
std::string module_to_text(const ModulePres<K>& pres) {
  std::ostringstream out;
  out << "slots: [";
  for (std::size_t r = 0; r < pres.slots().size(); ++r)
    out << (r ? ", " : "") << pres.slots()[r];
  out << "]\n";
  for (const auto& row : pres.C().rows()) {
    out << "relation:";
    bool first = true;
    for (const auto& [c, val] : row) {
      std::string cs = val.str();
      bool neg = !cs.empty() && cs[0] == '-';
      std::string mag = neg ? cs.substr(1) : cs;
      if (first) out << " " << (neg ? "-" : "") << mag;
      else out << (neg ? " - " : " + ") << mag;
      out << "*(" << pres.coord_label(c) << ")";
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

template <class K>
std::string module_to_text(const ModuleRep<K>& M) {
  const Quiver& q = M.quiver();
  std::ostringstream out;
  out << "rep:\n";
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    if (M.vdim(vi) > 0)
      out << "vertex " << q.vertex_id(vi) << ": " << M.vdim(vi) << "\n";
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    const Mat<K>& m = M.arrow_matrix(a);
    if (m.is_zero() || m.rows() == 0 || m.cols() == 0) continue;
    out << "arrow " << q.arrow(a).name << ":";
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out << " " << m(i, j).str();
    out << "\n";
  }
  return out.str();
}

template <class K>
std::string module_to_json(const ModulePres<K>& pres) {
  nlohmann::ordered_json j;
  j["slots"] = pres.slots();
  j["relations"] = nlohmann::ordered_json::array();
  for (const auto& row : pres.C().rows()) {
    nlohmann::ordered_json rel = nlohmann::ordered_json::array();
    for (const auto& [c, val] : row)
      rel.push_back({{"c", val.str()},
                     {"path", pres.algebra().path_str(pres.pbasis()[c].path)},
                     {"slot", pres.pbasis()[c].slot + 1}});
    j["relations"].push_back(rel);
  }
  return j.dump(2) + "\n";
}

template <class K>
std::string module_to_json(const ModuleRep<K>& M) {
  const Quiver& q = M.quiver();
  nlohmann::ordered_json dims = nlohmann::ordered_json::object();
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    if (M.vdim(vi) > 0)
      dims[std::to_string(q.vertex_id(vi))] = M.vdim(vi);
  nlohmann::ordered_json arrows = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    const Mat<K>& m = M.arrow_matrix(a);
    if (m.is_zero() || m.rows() == 0 || m.cols() == 0) continue;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t jj = 0; jj < m.cols(); ++jj) row.push_back(m(i, jj).str());
      rows.push_back(row);
    }
    arrows[q.arrow(a).name] = rows;
  }
  nlohmann::ordered_json j;
  j["rep"] = {{"dims", dims}, {"arrows", arrows}};
  return j.dump(2) + "\n";
}

}  // namespace tpa
