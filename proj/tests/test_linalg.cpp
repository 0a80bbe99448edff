#include <doctest.h>

#include "tpa/field.hpp"
#include "tpa/linalg.hpp"

#include <random>

using namespace tpa;

namespace {

template <class K>
Mat<K> random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(-3, 3);
  Mat<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = K(d(rng));
  return m;
}

template <class K>
void check_rank_nullity() {
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 40; ++t) {
    std::size_t r = 1 + t % 6, c = 1 + (t * 7) % 6;
    Mat<K> m = random_mat<K>(rng, r, c);
    auto ker = m.kernel_basis();
    CHECK(m.rank() + ker.size() == c);
    for (const auto& v : ker) {
      auto y = m.apply(v);
      for (const auto& x : y) CHECK(x.is_zero());
    }
  }
}

template <class K>
void check_solve() {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 40; ++t) {
    std::size_t r = 1 + t % 5, c = 1 + (t * 3) % 5;
    Mat<K> m = random_mat<K>(rng, r, c);
    std::uniform_int_distribution<int> d(-2, 2);
    std::vector<K> x0(c);
    for (auto& x : x0) x = K(d(rng));
    std::vector<K> b = m.apply(x0);
    auto x = m.solve(b);
    REQUIRE(x.has_value());
    std::vector<K> b2 = m.apply(*x);
    for (std::size_t i = 0; i < r; ++i) CHECK((b2[i] - b[i]).is_zero());
  }
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("rank plus nullity over the rationals and a prime field") {
  check_rank_nullity<Rat>();
  Zp::set_modulus(101);
  check_rank_nullity<Zp>();
}

TEST_CASE("solve returns an actual solution when one exists") {
  check_solve<Rat>();
  Zp::set_modulus(97);
  check_solve<Zp>();
}

TEST_CASE("inverse multiplies to the identity") {
  std::mt19937_64 rng(5);
  int found = 0;
  for (int t = 0; t < 60 && found < 12; ++t) {
    std::size_t n = 1 + t % 4;
    Mat<Rat> m = random_mat<Rat>(rng, n, n);
    auto inv = m.inverse();
    if (!inv) {
      CHECK(m.rank() < n);
      continue;
    }
    ++found;
    Mat<Rat> p = m * (*inv);
    Mat<Rat> q = (*inv) * m;
    Mat<Rat> id = Mat<Rat>::identity(n);
    CHECK((p - id).is_zero());
    CHECK((q - id).is_zero());
  }
  CHECK(found >= 12);
}

TEST_CASE("sparse axpy agrees with dense arithmetic") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 6;
    std::vector<Rat> a(n), b(n);
    for (auto& x : a) x = Rat(d(rng));
    for (auto& x : b) x = Rat(d(rng));
    Rat c(d(rng));
    SVec<Rat> sa = svec_from_dense(a);
    svec_axpy(sa, c, svec_from_dense(b));
    std::vector<Rat> dense = svec_to_dense(sa, n);
    for (std::size_t i = 0; i < n; ++i) CHECK((dense[i] - (a[i] + c * b[i])).is_zero());
    // no explicit zeros stored
    for (const auto& [i, v] : sa) CHECK(!v.is_zero());
  }
}

TEST_CASE("row space: rank, reduce, contains") {
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int t = 0; t < 25; ++t) {
    std::size_t n = 8;
    RowSpace<Rat> W;
    std::vector<SVec<Rat>> gens;
    Mat<Rat> m(5, n);
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<Rat> v(n);
      for (auto& x : v) x = Rat(d(rng));
      gens.push_back(svec_from_dense(v));
      W.insert(gens.back());
      for (std::size_t j = 0; j < n; ++j) m(i, j) = v[j];
    }
    CHECK(W.rank() == m.rank());
    for (const auto& g : gens) CHECK(W.contains(g));
    // a random combination lies in the space; its reduction is empty
    SVec<Rat> comb;
    for (const auto& g : gens) svec_axpy(comb, Rat(d(rng)), g);
    CHECK(W.reduce(comb).empty());
  }
}

TEST_CASE("field parsing and inverses") {
  CHECK(Rat::parse("3/4").str() == "3/4");
  CHECK(Rat::parse("-7").str() == "-7");
  CHECK((Rat(3, 4) * Rat(3, 4).inv() - Rat(1)).is_zero());
  Zp::set_modulus(13);
  for (long a = 1; a < 13; ++a) {
    Zp x(a);
    CHECK((x * x.inv() - Zp(1)).is_zero());
  }
  CHECK_THROWS(Zp::set_modulus(12));  // not prime
  Zp::set_modulus(101);
}

}  // TEST_SUITE
