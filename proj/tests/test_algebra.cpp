#include <doctest.h>

#include "helpers.hpp"

using namespace tpa;
using namespace tpa::testing;

TEST_SUITE("algebra") {

TEST_CASE("sample algebra dimensions") {
  CHECK(load_algebra("ex91.quiver").dim() == 17);
  CHECK(load_algebra("lambda1.quiver").dim() == 13);
  CHECK(load_algebra("lambda2.quiver").dim() == 23);
}

TEST_CASE("basis is ordered by length; the length filtration is a prefix") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    QuiverFile f = testgen::random_quiver(rng);
    TruncatedAlgebra A = TruncatedAlgebra::from_file(f);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < A.dim(); ++i) {
      CHECK(A.path(i).length() >= prev);
      prev = A.path(i).length();
    }
    std::size_t total = 0;
    for (std::size_t d = 0; d <= A.L(); ++d) {
      auto [lo, hi] = A.length_range(d);
      CHECK(lo == (d == 0 ? 0 : total));
      for (std::size_t i = lo; i < hi; ++i) CHECK(A.path(i).length() == d);
      total = hi;
    }
    CHECK(total == A.dim());
  }
}

TEST_CASE("basis dimension counts paths of each length") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    QuiverFile f = testgen::random_quiver(rng);
    TruncatedAlgebra A = TruncatedAlgebra::from_file(f);
    const Quiver& q = f.quiver;
    for (std::size_t d = 0; d <= A.L(); ++d) {
      auto [lo, hi] = A.length_range(d);
      std::size_t want = 0;
      for (int s : q.vertices())
        for (int g : q.vertices()) want += count_paths_matrix(q, s, g, d);
      CHECK(hi - lo == want);
    }
  }
}

TEST_CASE("trivial paths act as local units") {
  TruncatedAlgebra A = load_algebra("ex91.quiver");
  for (std::size_t p = 0; p < A.dim(); ++p) {
    const QPath& qp = A.path(p);
    auto left = A.basis_mul(A.trivial_index(qp.end(A.quiver())), p);
    auto right = A.basis_mul(p, A.trivial_index(qp.start));
    REQUIRE(left.has_value());
    REQUIRE(right.has_value());
    CHECK(*left == p);
    CHECK(*right == p);
    // the mismatched trivial path annihilates (unless start == end)
    for (int v : A.quiver().vertices()) {
      if (v == qp.end(A.quiver())) continue;
      CHECK(!A.basis_mul(A.trivial_index(v), p).has_value());
    }
  }
}

TEST_CASE("basis multiplication is associative (with truncation as zero)") {
  TruncatedAlgebra A = load_algebra("ex91.quiver");
  for (std::size_t p = 0; p < A.dim(); ++p)
    for (std::size_t q = 0; q < A.dim(); ++q)
      for (std::size_t r = 0; r < A.dim(); ++r) {
        auto pq = A.basis_mul(p, q);
        auto qr = A.basis_mul(q, r);
        auto lhs = pq ? A.basis_mul(*pq, r) : std::nullopt;
        auto rhs = qr ? A.basis_mul(p, *qr) : std::nullopt;
        CHECK(lhs == rhs);
      }
}

TEST_CASE("product of paths concatenates or truncates") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 15; ++t) {
    QuiverFile f = testgen::random_quiver(rng);
    TruncatedAlgebra A = TruncatedAlgebra::from_file(f);
    for (std::size_t p = 0; p < A.dim(); ++p)
      for (std::size_t q = 0; q < A.dim(); ++q) {
        const QPath& pp = A.path(p);
        const QPath& qq = A.path(q);
        auto r = A.basis_mul(p, q);
        bool composable = pp.start == qq.end(A.quiver());
        bool fits = pp.length() + qq.length() <= A.L();
        CHECK(r.has_value() == (composable && fits));
        if (r) {
          CHECK(A.path(*r).length() == pp.length() + qq.length());
          CHECK(A.path(*r).start == qq.start);
          CHECK(A.path(*r).end(A.quiver()) == pp.end(A.quiver()));
        }
      }
  }
}

TEST_CASE("arrow_after matches multiplication by the arrow's path") {
  TruncatedAlgebra A = load_algebra("lambda2.quiver");
  for (std::size_t a = 0; a < A.quiver().n_arrows(); ++a)
    for (std::size_t p = 0; p < A.dim(); ++p)
      CHECK(A.arrow_after(a, p) == A.basis_mul(A.arrow_path_index(a), p));
}

TEST_CASE("path strings parse back to the same basis element") {
  TruncatedAlgebra A = load_algebra("ex91.quiver");
  for (std::size_t p = 0; p < A.dim(); ++p) {
    QPath parsed = detail::parse_path_expr(A.quiver(), A.path_str(p), 1);
    auto idx = A.index_of(parsed);
    REQUIRE(idx.has_value());
    CHECK(*idx == p);
  }
}

TEST_CASE("classification is cached on the algebra") {
  TruncatedAlgebra A = load_algebra("lambda2.quiver");
  CHECK(A.classification().precyclic == std::vector<int>{1, 2, 3});
  CHECK(A.classification().non_precyclic == std::vector<int>{4, 5, 6});
}

}  // TEST_SUITE
