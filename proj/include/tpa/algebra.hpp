#pragma once
// The truncated path algebra Lambda = KQ / <all paths of length L+1>.
//
// The input file carries "truncation: t" with t = L+1 >= 1, i.e. paths of
// length >= t vanish; L = t-1 is the longest surviving path length.
// Basis: all paths of length <= L in the canonical order (length, start
// vertex declaration order, arrow sequence).  Multiplication is "after":
// basis_mul(p, q) = p*q = "q first, then p".

#include "quiver.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tpa {

class TruncatedAlgebra {
public:
  TruncatedAlgebra(Quiver q, std::size_t L) : q_(std::move(q)), L_(L) {
    basis_ = all_paths(q_, L_);
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
    for (int v : q_.vertices()) {
      QPath e;
      e.start = v;
      trivial_[v] = index_.at(e);
    }
  }

  static TruncatedAlgebra from_file(const QuiverFile& f) {
    if (f.truncation < 1)
      throw std::invalid_argument(
          "quiver file needs 'truncation: t' with t >= 1 to build the algebra");
    return TruncatedAlgebra(f.quiver, std::size_t(f.truncation) - 1);
  }

  const Quiver& quiver() const { return q_; }
  std::size_t L() const { return L_; }       // max surviving path length
  std::size_t dim() const { return basis_.size(); }
  const std::vector<QPath>& basis() const { return basis_; }
  const QPath& path(std::size_t i) const { return basis_.at(i); }

  std::optional<std::size_t> index_of(const QPath& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t trivial_index(int vertex_id) const { return trivial_.at(vertex_id); }

  // p * q = "p after q"; nullopt when endpoints mismatch or length > L.
  std::optional<std::size_t> basis_mul(std::size_t pi, std::size_t qi) const {
    const QPath& p = basis_[pi];
    const QPath& q = basis_[qi];
    QPath r;
    if (!compose_after(q_, p, q, r)) return std::nullopt;
    if (r.length() > L_) return std::nullopt;
    return index_.at(r);
  }

  // Arrow as a basis index (length-1 path).
  std::size_t arrow_path_index(std::size_t arrow_idx) const {
    QPath p;
    p.start = q_.arrow(arrow_idx).src;
    p.arrows = {arrow_idx};
    return index_.at(p);
  }

  // Left multiplication by arrow a: a * (path q), nullopt if it dies.
  std::optional<std::size_t> arrow_after(std::size_t arrow_idx,
                                         std::size_t qi) const {
    const QPath& q = basis_[qi];
    if (q_.arrow(arrow_idx).src != q.end(q_)) return std::nullopt;
    if (q.length() + 1 > L_) return std::nullopt;
    QPath r = q;
    r.arrows.push_back(arrow_idx);
    return index_.at(r);
  }

  // Paths grouped by length, as index ranges into basis() (canonical order is
  // length-major so each length is contiguous).
  std::pair<std::size_t, std::size_t> length_range(std::size_t len) const {
    std::size_t lo = 0;
    while (lo < basis_.size() && basis_[lo].length() < len) ++lo;
    std::size_t hi = lo;
    while (hi < basis_.size() && basis_[hi].length() == len) ++hi;
    return {lo, hi};
  }

  const VertexClassification& classification() const {
    if (!cls_) cls_ = classify_vertices(q_);
    return *cls_;
  }

  // epsilon = sum of trivial paths at NON-precyclic vertices.
  std::vector<int> eps_vertices() const {
    return classification().non_precyclic;
  }

  std::string path_str(std::size_t i) const { return basis_[i].str(q_); }

private:
  Quiver q_;
  std::size_t L_;
  std::vector<QPath> basis_;
  std::map<QPath, std::size_t> index_;
  std::map<int, std::size_t> trivial_;
  mutable std::optional<VertexClassification> cls_;
};

}  // namespace tpa
