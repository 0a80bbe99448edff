// tpa/testgen.hpp — seeded random instances for the property suites.
//
// Every generator draws from a caller-owned std::mt19937_64, so a suite is
// reproducible from the single seed it records.  Ranges follow the suite
// contracts: quivers with <= 5 vertices, <= 8 arrows, L <= 3; modules of
// dimension <= 20 built from random projective presentations (which reach
// every isomorphism class and are valid by construction).
#pragma once

#include <random>
#include <vector>

#include "tpa/algebra.hpp"
#include "tpa/module.hpp"
#include "tpa/quiver.hpp"

namespace tpa::testgen {

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + rng() % (hi - lo + 1);
}

// Random quiver: 1..max_v vertices (ids 1..n), 0..max_arrows arrows with
// independent random endpoints (loops and parallel arrows allowed),
// truncation in 2..max_L+1.
inline QuiverFile random_quiver(std::mt19937_64& rng, std::size_t max_v = 5,
                                std::size_t max_arrows = 8,
                                std::size_t max_L = 3) {
  std::size_t n = pick(rng, 1, max_v);
  std::vector<int> vids;
  for (std::size_t i = 1; i <= n; ++i) vids.push_back(int(i));
  std::size_t k = pick(rng, 0, max_arrows);
  std::vector<Arrow> arrows;
  for (std::size_t a = 1; a <= k; ++a) {
    int s = int(pick(rng, 1, n)), t = int(pick(rng, 1, n));
    arrows.push_back({"a" + std::to_string(a), s, t});
  }
  QuiverFile f;
  f.quiver = Quiver(vids, arrows);
  f.truncation = pick(rng, 1, max_L) + 1;
  return f;
}

// Random radical vector of P = free module on `slots`: 1..3 radical
// coordinates with small nonzero coefficients.
template <class K>
SVec<K> random_radical_vec(std::mt19937_64& rng, const ModulePres<K>& pres) {
  std::vector<std::size_t> radical;
  for (std::size_t c = 0; c < pres.dimP(); ++c)
    if (pres.coord_len(c) >= 1) radical.push_back(c);
  SVec<K> v;
  if (radical.empty()) return v;
  std::size_t terms = pick(rng, 1, 3);
  for (std::size_t t = 0; t < terms; ++t) {
    std::size_t c = radical[pick(rng, 0, radical.size() - 1)];
    long coef = long(pick(rng, 1, 4)) - 2;  // -1, 0, 1, 2
    if (coef == 0) coef = 1;
    svec_axpy(v, K(coef), svec_unit<K>(c));
  }
  return v;
}

// Random module presentation over A: 1..3 slots, a few random relations,
// then extra radical generators until dim <= max_dim.
template <class K>
ModulePres<K> random_module(std::mt19937_64& rng, const TruncatedAlgebra& A,
                            std::size_t max_dim = 20) {
  const auto& vids = A.quiver().vertices();
  std::size_t nslots = pick(rng, 1, 3);
  std::vector<int> slots;
  for (std::size_t r = 0; r < nslots; ++r)
    slots.push_back(vids[pick(rng, 0, vids.size() - 1)]);
  ModulePres<K> free(A, slots);
  std::vector<SVec<K>> gens;
  std::size_t nrel = pick(rng, 0, 4);
  for (std::size_t t = 0; t < nrel; ++t) {
    SVec<K> v = random_radical_vec(rng, free);
    if (!v.empty()) gens.push_back(v);
  }
  ModulePres<K> pres(A, slots, gens);
  // Shrink by quotienting out random radical residues until small enough.
  for (std::size_t guard = 0; pres.dim() > max_dim && guard < 200; ++guard) {
    SVec<K> v = random_radical_vec(rng, free);
    if (v.empty() || pres.C().contains(v)) continue;
    gens.push_back(v);
    pres = ModulePres<K>(A, slots, gens);
  }
  return pres;
}

// Random module with finite projective dimension: B(M) of a random module
// (Theorem 4.2's approximation is always in P^{<infinity}).
template <class K>
ModulePres<K> random_finpd_module(std::mt19937_64& rng,
                                  const TruncatedAlgebra& A,
                                  std::size_t max_dim = 20) {
  ModulePres<K> pres = random_module<K>(rng, A, max_dim);
  return pres.eps_pres();
}

}  // namespace tpa::testgen
