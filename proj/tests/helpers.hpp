#pragma once
// Shared fixtures for the test suites: data-file loading and a couple of
// brute-force oracles kept deliberately independent of the library code.

#include "tpa/endo.hpp"
#include "tpa/testgen.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef TPA_DATA_DIR
#define TPA_DATA_DIR "data"
#endif

namespace tpa::testing {

inline std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string data_file(const std::string& name) {
  return std::string(TPA_DATA_DIR) + "/" + name;
}

inline QuiverFile load_quiver(const std::string& name) {
  return parse_quiver(slurp(data_file(name)));
}

inline TruncatedAlgebra load_algebra(const std::string& name) {
  return TruncatedAlgebra::from_file(load_quiver(name));
}

// Brute-force path counter: #paths of length exactly len from src to tgt,
// by taking powers of the arrow-count matrix (entirely independent of the
// library's path enumeration).
inline std::size_t count_paths_matrix(const Quiver& q, int src, int tgt,
                                      std::size_t len) {
  std::size_t n = q.n_vertices();
  std::vector<std::vector<std::size_t>> a(n, std::vector<std::size_t>(n, 0)),
      p(n, std::vector<std::size_t>(n, 0));
  for (const auto& ar : q.arrows())
    a[q.vertex_index(ar.tgt)][q.vertex_index(ar.src)] += 1;
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  for (std::size_t s = 0; s < len; ++s) {
    std::vector<std::vector<std::size_t>> r(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * p[k][j];
    p = std::move(r);
  }
  return p[q.vertex_index(tgt)][q.vertex_index(src)];
}

// Brute-force precyclic test: DFS from v reaches a vertex that lies on a
// cycle, where "lies on a cycle" is decided by a second, separate DFS.
inline bool brute_on_cycle(const Quiver& q, int v) {
  std::set<int> seen;
  std::vector<int> stack;
  for (auto ai : q.arrows_from(v)) stack.push_back(q.arrow(ai).tgt);
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    if (w == v) return true;
    if (!seen.insert(w).second) continue;
    for (auto ai : q.arrows_from(w)) stack.push_back(q.arrow(ai).tgt);
  }
  return false;
}

inline bool brute_precyclic(const Quiver& q, int v) {
  std::set<int> seen;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    if (!seen.insert(w).second) continue;
    if (brute_on_cycle(q, w)) return true;
    for (auto ai : q.arrows_from(w)) stack.push_back(q.arrow(ai).tgt);
  }
  return false;
}

// Brute-force socle dimension at each vertex: vectors killed by every arrow
// leaving the vertex.
template <class K>
std::vector<std::size_t> brute_socle_dims(const ModuleRep<K>& M) {
  const Quiver& q = M.quiver();
  std::vector<std::size_t> out(q.n_vertices(), 0);
  for (std::size_t vi = 0; vi < q.n_vertices(); ++vi) {
    std::size_t d = M.vdim(vi);
    if (d == 0) continue;
    std::vector<Mat<K>> mats;
    std::size_t rows = 0;
    for (auto ai : q.arrows_from(q.vertex_id(vi))) {
      mats.push_back(M.arrow_matrix(ai));
      rows += mats.back().rows();
    }
    Mat<K> stacked(rows, d);
    std::size_t r0 = 0;
    for (const auto& m : mats) {
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < d; ++j) stacked(r0 + i, j) = m(i, j);
      r0 += m.rows();
    }
    out[vi] = d - stacked.rank();
  }
  return out;
}

}  // namespace tpa::testing
