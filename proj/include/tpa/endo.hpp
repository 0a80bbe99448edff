#pragma once
// The endomorphism algebra of the strong tilting module, realized as a
// structure-constant algebra, together with the duality functors
// Hom(-, T) in both directions and the section-8 style reports.
//
// Conventions.  For summands T_1..T_n we form A = End(T) with the plain
// composition product x * y = x o y ("first y, then x").  The tilted
// algebra is its opposite.  Left modules over `aend` are exactly right
// modules over the tilted algebra `tilde`; all right-module computations
// run through AModule over `aend`.  Reports always state which of the two
// quivers (of `tilde` or of its opposite) is displayed.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdalgebra.hpp"
#include "homology.hpp"
#include "tilting.hpp"

namespace tpa {

// ---------------------------------------------------------------------------
// Bundle
// ---------------------------------------------------------------------------

template <class K>
struct TiltedAlgebraBundle {
  const TruncatedAlgebra* base = nullptr;  // the ground algebra
  std::vector<ModuleRep<K>> parts;         // summands, fixed order
  std::vector<int> vertex;                 // vertex id per summand
  std::vector<bool> part_precyclic;        // marker per summand
  std::size_t m = 0;                       // number of precyclic summands
  std::size_t pdim_T = 0;                  // projective dimension of the sum
  SumRep<K> total;                         // direct sum with inj/proj maps

  FDAlgebra<K> aend;   // End(T), product = composition
  FDAlgebra<K> tilde;  // the tilted algebra = aend.opposite()

  // hom[i][j] = basis of Hom(parts[i], parts[j]) as (dim T_j x dim T_i)
  // matrices; the algebra basis element off[i][j] + k is hom[i][j][k].
  std::vector<std::vector<std::vector<Mat<K>>>> hom;
  std::vector<std::vector<std::size_t>> off;

  SVec<K> eps_tilde;                // sum of idempotents at non-precyclic summands
  bool no_precyclic_source = false; // the two-sided strongness hypothesis

  std::size_t n_summands() const { return parts.size(); }
  std::size_t hom_dim(std::size_t i, std::size_t j) const {
    return hom[i][j].size();
  }
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {
template <class K>
RowSpace<K> tracked_span(const std::vector<Mat<K>>& mats, const char* what) {
  RowSpace<K> span(/*track_generators=*/true);
  for (const auto& f : mats)
    if (!span.insert(flatten_mat(f)))
      throw InvariantError(std::string(what) + ": basis is not independent");
  return span;
}

template <class K>
std::vector<K> coords_or_throw(const RowSpace<K>& span, const Mat<K>& m,
                               const char* what) {
  auto c = span.coords_in_generators(flatten_mat(m));
  if (!c) throw InvariantError(std::string(what) + ": element escapes the span");
  return *c;
}
}  // namespace detail

// Generic: the endomorphism algebra of a direct sum of pairwise
// non-isomorphic representations, one per listed vertex.
template <class K>
TiltedAlgebraBundle<K> endomorphism_algebra(const TruncatedAlgebra& A,
                                            std::vector<ModuleRep<K>> parts,
                                            std::vector<int> vertex_ids,
                                            std::size_t pdim_of_sum = 0) {
  if (parts.size() != vertex_ids.size() || parts.empty())
    throw std::invalid_argument("endomorphism_algebra: need one vertex per part");
  const VertexClassification& cls = A.classification();

  TiltedAlgebraBundle<K> B;
  B.base = &A;
  B.parts = std::move(parts);
  B.vertex = std::move(vertex_ids);
  B.pdim_T = pdim_of_sum;
  B.no_precyclic_source = cls.precyclic_sources.empty();
  const std::size_t n = B.parts.size();
  for (int v : B.vertex) {
    B.part_precyclic.push_back(cls.is_precyclic(v));
    if (cls.is_precyclic(v)) ++B.m;
  }
  {
    std::vector<const ModuleRep<K>*> ptrs;
    for (const auto& p : B.parts) ptrs.push_back(&p);
    B.total = direct_sum(A, ptrs);
  }

  // Hom blocks and basis layout.
  B.hom.assign(n, std::vector<std::vector<Mat<K>>>(n));
  B.off.assign(n, std::vector<std::size_t>(n, 0));
  std::size_t D = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      B.hom[i][j] = hom_space(B.parts[i], B.parts[j]);
      B.off[i][j] = D;
      D += B.hom[i][j].size();
    }

  std::vector<std::vector<RowSpace<K>>> span(n, std::vector<RowSpace<K>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      span[i][j] = detail::tracked_span(B.hom[i][j], "endomorphism_algebra");

  std::vector<std::string> labels(D);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < B.hom[i][j].size(); ++k)
        labels[B.off[i][j] + k] = "h" + std::to_string(B.vertex[i]) + "_" +
                                  std::to_string(B.vertex[j]) + "_" +
                                  std::to_string(k);

  // Structure constants: basis (i->j, k) times basis (s->t, l) composes to
  // hom[i][j][k] o hom[s][t][l], defined when t == i, landing in block (s, j).
  std::vector<std::vector<SVec<K>>> mult(D, std::vector<SVec<K>>(D));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < B.hom[i][j].size(); ++k) {
        std::size_t a = B.off[i][j] + k;
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t l = 0; l < B.hom[s][i].size(); ++l) {
            std::size_t b = B.off[s][i] + l;
            Mat<K> h = B.hom[i][j][k] * B.hom[s][i][l];
            std::vector<K> c =
                detail::coords_or_throw(span[s][j], h, "endomorphism_algebra");
            SVec<K> sv;
            for (std::size_t r = 0; r < c.size(); ++r)
              if (!c[r].is_zero()) sv.push_back({B.off[s][j] + r, c[r]});
            mult[a][b] = std::move(sv);
          }
      }

  // Idempotents: the identity of each End(T_i) block; unit is their sum.
  std::vector<std::pair<int, SVec<K>>> idems;
  SVec<K> unit;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<K> c = detail::coords_or_throw(
        span[i][i], Mat<K>::identity(B.parts[i].dim()), "endomorphism_algebra");
    SVec<K> e;
    for (std::size_t r = 0; r < c.size(); ++r)
      if (!c[r].is_zero()) e.push_back({B.off[i][i] + r, c[r]});
    svec_axpy(unit, K::one(), e);
    idems.emplace_back(B.vertex[i], std::move(e));
  }

  B.aend = FDAlgebra<K>(std::move(labels), std::move(mult), std::move(unit),
                        std::move(idems));
  B.aend.verify();
  B.tilde = B.aend.opposite();

  for (std::size_t i = 0; i < n; ++i)
    if (!B.part_precyclic[i])
      svec_axpy(B.eps_tilde, K::one(), B.aend.idempotent(B.vertex[i]));
  return B;
}

template <class K>
TiltedAlgebraBundle<K> endomorphism_algebra(const StrongTilting<K>& T) {
  std::vector<ModuleRep<K>> parts;
  std::vector<int> verts;
  for (const auto& s : T.summands) {
    parts.push_back(s.rep);
    verts.push_back(s.vertex);
  }
  TiltedAlgebraBundle<K> B =
      endomorphism_algebra<K>(*T.alg, std::move(parts), std::move(verts), T.pdim);
  if (B.m != T.m)
    throw InvariantError("endomorphism_algebra: precyclic summand count mismatch");
  return B;
}

// ---------------------------------------------------------------------------
// T as a left End(T)-module (evaluation) = the right module T over tilde.
// ---------------------------------------------------------------------------

template <class K>
AModule<K> tilting_bimodule(const TiltedAlgebraBundle<K>& B) {
  const std::size_t n = B.n_summands();
  std::vector<Mat<K>> act;
  act.reserve(B.aend.dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < B.hom[i][j].size(); ++k)
        act.push_back(B.total.inj[j] * B.hom[i][j][k] * B.total.proj[i]);
  AModule<K> M(B.aend, B.total.rep.dim(), std::move(act));
  if (!(M.act_of(B.aend.unit()) == Mat<K>::identity(M.dim())))
    throw InvariantError("tilting_bimodule: unit does not act as identity");
  return M;
}

// The right projective over tilde attached to a summand vertex.
template <class K>
CyclicProjective<K> right_projective(const TiltedAlgebraBundle<K>& B, int vid) {
  return algebra_projective(B.aend, vid);
}

// The simple right module over tilde at a summand vertex.
template <class K>
AModule<K> simple_tilde(const TiltedAlgebraBundle<K>& B, int vid) {
  CyclicProjective<K> P = algebra_projective(B.aend, vid);
  return P.mod.quotient(P.mod.radical_sub());
}

// ---------------------------------------------------------------------------
// Duality, left to right:  M  |->  Hom(M, T)  as a left End(T)-module.
// ---------------------------------------------------------------------------

template <class K>
struct DualizedLeft {
  AModule<K> mod;                         // left module over bundle.aend
  std::vector<std::vector<Mat<K>>> comp;  // comp[j] = basis of Hom(M, T_j)
  std::vector<std::size_t> off;           // block offsets inside mod coords
};

template <class K>
DualizedLeft<K> dualize_left(const TiltedAlgebraBundle<K>& B,
                             const ModuleRep<K>& M) {
  const std::size_t n = B.n_summands();
  DualizedLeft<K> out;
  out.comp.resize(n);
  out.off.assign(n, 0);
  std::size_t W = 0;
  for (std::size_t j = 0; j < n; ++j) {
    out.comp[j] = hom_space(M, B.parts[j]);
    out.off[j] = W;
    W += out.comp[j].size();
  }
  std::vector<RowSpace<K>> span(n);
  for (std::size_t j = 0; j < n; ++j)
    span[j] = detail::tracked_span(out.comp[j], "dualize_left");

  std::vector<Mat<K>> act(B.aend.dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < B.hom[i][j].size(); ++k) {
        Mat<K> a(W, W);
        for (std::size_t c = 0; c < out.comp[i].size(); ++c) {
          Mat<K> g = B.hom[i][j][k] * out.comp[i][c];
          std::vector<K> coords =
              detail::coords_or_throw(span[j], g, "dualize_left");
          for (std::size_t r = 0; r < coords.size(); ++r)
            a(out.off[j] + r, out.off[i] + c) = coords[r];
        }
        act[B.off[i][j] + k] = std::move(a);
      }
  out.mod = AModule<K>(B.aend, W, std::move(act));
  if (!(out.mod.act_of(B.aend.unit()) == Mat<K>::identity(W)))
    throw InvariantError("dualize_left: unit does not act as identity");
  return out;
}

// ---------------------------------------------------------------------------
// Duality, right to left:  N  |->  Hom_A(N, T)  as a left module over the
// ground algebra, graded by composing with the vertex projections of T.
// ---------------------------------------------------------------------------

template <class K>
struct DualizedRight {
  ModuleRep<K> rep;
  std::vector<Mat<K>> basis;  // intertwiners N -> T, in rep coordinate order
};

template <class K>
DualizedRight<K> dualize_right(const TiltedAlgebraBundle<K>& B,
                               const AModule<K>& N) {
  const TruncatedAlgebra& A = *B.base;
  const Quiver& q = A.quiver();
  const ModuleRep<K>& T = B.total.rep;
  AModule<K> AT = tilting_bimodule(B);
  std::vector<Mat<K>> homs = amodule_hom(N, AT);

  // The full intertwiner space, for the bimodule certificate below.
  RowSpace<K> all;
  for (const auto& F : homs) all.insert(detail::flatten_mat(F));

  // Grade by vertex: phi |-> e_v o phi keeps only the vertex-v rows of T.
  std::vector<std::vector<Mat<K>>> graded(q.n_vertices());
  std::vector<std::size_t> vdims(q.n_vertices(), 0);
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    RowSpace<K> pick;
    for (const auto& F : homs) {
      Mat<K> Fv(T.dim(), N.dim());
      for (std::size_t r = 0; r < T.vdim(vi); ++r)
        for (std::size_t c = 0; c < N.dim(); ++c)
          Fv(T.offset(vi) + r, c) = F(T.offset(vi) + r, c);
      if (!all.contains(detail::flatten_mat(Fv)))
        throw InvariantError(
            "dualize_right: vertex projection leaves the intertwiner space");
      if (pick.insert(detail::flatten_mat(Fv))) graded[vi].push_back(Fv);
    }
    vdims[vi] = graded[vi].size();
  }
  std::size_t sum = 0;
  for (std::size_t d : vdims) sum += d;
  if (sum != homs.size())
    throw InvariantError("dualize_right: grading does not decompose the space");

  std::vector<RowSpace<K>> span(q.n_vertices());
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    span[vi] = detail::tracked_span(graded[vi], "dualize_right");

  // Arrow action: (a . phi)(x) = a . (phi(x)), i.e. compose with the global
  // arrow matrix of T.
  std::vector<Mat<K>> amats;
  for (std::size_t a = 0; a < q.n_arrows(); ++a) {
    std::size_t si = q.vertex_index(q.arrow(a).src);
    std::size_t ti = q.vertex_index(q.arrow(a).tgt);
    Mat<K> Ga(T.dim(), T.dim());
    const Mat<K>& loc = T.arrow_matrix(a);
    for (std::size_t r = 0; r < T.vdim(ti); ++r)
      for (std::size_t c = 0; c < T.vdim(si); ++c)
        Ga(T.offset(ti) + r, T.offset(si) + c) = loc(r, c);
    Mat<K> am(vdims[ti], vdims[si]);
    for (std::size_t c = 0; c < vdims[si]; ++c) {
      Mat<K> img = Ga * graded[si][c];
      std::vector<K> coords =
          detail::coords_or_throw(span[ti], img, "dualize_right");
      for (std::size_t r = 0; r < coords.size(); ++r) am(r, c) = coords[r];
    }
    amats.push_back(std::move(am));
  }

  DualizedRight<K> out;
  out.rep = ModuleRep<K>(A, vdims, amats);
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi)
    for (auto& F : graded[vi]) out.basis.push_back(std::move(F));
  return out;
}

// ---------------------------------------------------------------------------
// The unit  M -> Hom_A(Hom(M, T), T),  m |-> (f |-> f(m)),  materialized.
// ---------------------------------------------------------------------------

template <class K>
struct UnitMap {
  Mat<K> eta;
  bool module_hom = false;
  bool iso = false;
};

template <class K>
UnitMap<K> unit_map(const TiltedAlgebraBundle<K>& B, const ModuleRep<K>& M,
                    const DualizedLeft<K>& DL, const DualizedRight<K>& DR) {
  const std::size_t n = B.n_summands();
  const std::size_t W = DL.mod.dim();
  RowSpace<K> span = detail::tracked_span(DR.basis, "unit_map");
  UnitMap<K> out;
  out.eta = Mat<K>(DR.rep.dim(), M.dim());
  for (std::size_t g = 0; g < M.dim(); ++g) {
    Mat<K> E(B.total.rep.dim(), W);  // the evaluation intertwiner at basis g
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < DL.comp[j].size(); ++c) {
        Mat<K> gl = B.total.inj[j] * DL.comp[j][c];
        for (std::size_t r = 0; r < gl.rows(); ++r)
          E(r, DL.off[j] + c) = gl(r, g);
      }
    std::vector<K> coords = detail::coords_or_throw(span, E, "unit_map");
    for (std::size_t r = 0; r < coords.size(); ++r) out.eta(r, g) = coords[r];
  }
  out.module_hom = is_module_hom(M, DR.rep, out.eta);
  out.iso = out.module_hom && DR.rep.dim() == M.dim() &&
            out.eta.rank() == M.dim();
  return out;
}

template <class K>
struct RoundTrip {
  DualizedLeft<K> left;
  DualizedRight<K> back;
  UnitMap<K> unit;
  bool iso = false;
};

template <class K>
RoundTrip<K> round_trip(const TiltedAlgebraBundle<K>& B, const ModuleRep<K>& M) {
  RoundTrip<K> out;
  out.left = dualize_left(B, M);
  out.back = dualize_right(B, out.left.mod);
  out.unit = unit_map(B, M, out.left, out.back);
  out.iso = out.unit.iso;
  return out;
}

// ---------------------------------------------------------------------------
// Separation over the tilted algebra, with the hypothesis recorded.
// ---------------------------------------------------------------------------

template <class K>
struct SeparationChecked {
  SeparationResult<K> sep;
  bool hypothesis = false;         // no precyclic source
  bool projectivity_asserted = false;
};

template <class K>
SeparationChecked<K> separation_checked(const TiltedAlgebraBundle<K>& B,
                                        const AModule<K>& N) {
  SeparationChecked<K> out;
  out.sep = separation_U(N, B.eps_tilde);
  out.hypothesis = B.no_precyclic_source;
  if (out.hypothesis) {
    if (!out.sep.u_projective)
      throw InvariantError(
          "separation_checked: U is not projective although the algebra has "
          "no precyclic source");
    for (int v : out.sep.u_top_types) {
      bool pre = false;
      for (std::size_t i = 0; i < B.n_summands(); ++i)
        if (B.vertex[i] == v) pre = B.part_precyclic[i];
      if (!pre)
        throw InvariantError(
            "separation_checked: U has a non-precyclic projective summand");
    }
    // All composition factors of N / U(N) live at non-precyclic summands.
    for (const auto& [v, d] : out.sep.quot_dims) {
      if (d == 0) continue;
      for (std::size_t i = 0; i < B.n_summands(); ++i)
        if (B.vertex[i] == v && B.part_precyclic[i])
          throw InvariantError(
              "separation_checked: quotient has a precyclic composition "
              "factor");
    }
    out.projectivity_asserted = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The numeric report: projective dimensions and finitistic dimensions on
// both sides, with the equality chain asserted under the hypothesis.
// ---------------------------------------------------------------------------

struct TiltedReport {
  std::size_t pdim_T_left = 0;    // over the ground algebra
  AModulePdim pdim_T_right;       // over the tilted algebra
  std::size_t findim_left = 0;
  std::vector<std::pair<int, AModulePdim>> simple_pdims;  // non-precyclic j
  std::size_t r_findim = 0;       // max of the finite simple pdims
  bool no_precyclic_source = false;
  bool chain_equal = false;
};

template <class K>
TiltedReport tilted_report(const TiltedAlgebraBundle<K>& B) {
  TiltedReport out;
  out.pdim_T_left = B.pdim_T;
  out.no_precyclic_source = B.no_precyclic_source;
  const std::size_t bound = 2 * B.aend.dim() + 2;
  out.pdim_T_right = amodule_pdim(tilting_bimodule(B), bound);
  out.findim_left = findim<K>(*B.base).findim;
  for (std::size_t i = 0; i < B.n_summands(); ++i) {
    if (B.part_precyclic[i]) continue;
    AModule<K> S = simple_tilde(B, B.vertex[i]);
    AModulePdim p = amodule_pdim(S, bound);
    if (!p.finite)
      throw InvariantError("tilted_report: a non-precyclic simple has no "
                           "finite resolution within the bound");
    out.r_findim = std::max(out.r_findim, p.value);
    out.simple_pdims.emplace_back(B.vertex[i], p);
  }
  if (out.no_precyclic_source) {
    out.chain_equal = out.pdim_T_right.finite &&
                      out.pdim_T_left == out.pdim_T_right.value &&
                      out.pdim_T_left == out.findim_left &&
                      out.pdim_T_left == out.r_findim;
    if (!out.chain_equal)
      throw InvariantError(
          "tilted_report: the equality chain fails although the algebra has "
          "no precyclic source");
  }
  return out;
}

}  // namespace tpa
