#include <doctest.h>

#include "helpers.hpp"

using namespace tpa;
using namespace tpa::testing;

namespace {
std::multiset<std::pair<int, int>> arrow_multiset(const Quiver& q) {
  std::multiset<std::pair<int, int>> out;
  for (const auto& a : q.arrows()) out.insert({a.src, a.tgt});
  return out;
}
}  // namespace

TEST_SUITE("quiver") {

TEST_CASE("five-vertex sample file: parse and classify") {
  QuiverFile f = load_quiver("ex91.quiver");
  CHECK(f.quiver.n_vertices() == 5);
  CHECK(f.quiver.n_arrows() == 6);
  CHECK(f.truncation == 3);
  auto cls = classify_vertices(f.quiver);
  CHECK(cls.precyclic == std::vector<int>{2, 3});
  CHECK(cls.non_precyclic == std::vector<int>{4, 5, 6});
  CHECK(cls.cyclebound == std::vector<int>{2, 3});
  CHECK(cls.postcyclic == std::vector<int>{2, 3, 4, 5, 6});
  CHECK(cls.sources.empty());
  CHECK(cls.precyclic_sources.empty());
  CHECK(!has_precyclic_source(f.quiver));
}

TEST_CASE("six-vertex sample file: the added source is precyclic") {
  QuiverFile f = load_quiver("lambda2.quiver");
  auto cls = classify_vertices(f.quiver);
  CHECK(cls.precyclic == std::vector<int>{1, 2, 3});
  CHECK(cls.sources == std::vector<int>{1});
  CHECK(cls.precyclic_sources == std::vector<int>{1});
  CHECK(has_precyclic_source(f.quiver));
}

TEST_CASE("loops-and-sink sample file") {
  QuiverFile f = load_quiver("lambda1.quiver");
  auto cls = classify_vertices(f.quiver);
  CHECK(cls.precyclic == std::vector<int>{1, 2, 3, 4});
  CHECK(cls.cyclebound == std::vector<int>{1, 2, 3, 4});
  CHECK(cls.non_precyclic == std::vector<int>{5});
  CHECK(cls.sources.empty());
  CHECK(!has_precyclic_source(f.quiver));
}

TEST_CASE("classification agrees with an independent brute-force definition") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    QuiverFile f = testgen::random_quiver(rng);
    auto cls = classify_vertices(f.quiver);
    for (int v : f.quiver.vertices()) {
      CHECK(cls.is_precyclic(v) == brute_precyclic(f.quiver, v));
      CHECK(cls.is_cyclebound(v) == brute_on_cycle(f.quiver, v));
      bool src = f.quiver.arrows_into(v).empty();
      CHECK(cls.is_source(v) == src);
    }
  }
}

TEST_CASE("path enumeration agrees with matrix-power counts") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    QuiverFile f = testgen::random_quiver(rng);
    const Quiver& q = f.quiver;
    for (std::size_t len = 0; len <= 3; ++len)
      for (int s : q.vertices())
        for (int g : q.vertices()) {
          auto paths = enumerate_paths(q, s, g, len, len);
          CHECK(paths.size() == count_paths_matrix(q, s, g, len));
          for (const auto& p : paths) {
            CHECK(p.start == s);
            CHECK(p.end(q) == g);
            CHECK(p.length() == len);
          }
        }
  }
}

TEST_CASE("text and JSON round trips preserve the quiver") {
  for (const char* name : {"ex91.quiver", "lambda1.quiver", "lambda2.quiver"}) {
    QuiverFile f = load_quiver(name);
    QuiverFile f2 = parse_quiver(quiver_to_text(f));
    QuiverFile f3 = parse_quiver(quiver_to_json(f));
    for (const QuiverFile* g : {&f2, &f3}) {
      CHECK(g->truncation == f.truncation);
      CHECK(g->quiver.vertices() == f.quiver.vertices());
      CHECK(arrow_multiset(g->quiver) == arrow_multiset(f.quiver));
    }
  }
}

TEST_CASE("basic oriented cycle counts") {
  CHECK(count_basic_cycles(load_quiver("ex91.quiver").quiver) == 1);
  CHECK(count_basic_cycles(load_quiver("lambda2.quiver").quiver) == 1);
  CHECK(count_basic_cycles(load_quiver("lambda1.quiver").quiver) == 4);

  // An eight-arrow quiver on five vertices with four basic cycles:
  // (2 3 5), (2 6), (2 6 5), (3 5 4).
  Quiver q({2, 3, 4, 5, 6},
           {{"a", 2, 3}, {"b", 3, 5}, {"c", 4, 3}, {"d", 5, 4},
            {"e", 5, 2}, {"r", 2, 6}, {"s", 6, 2}, {"t", 6, 5}});
  CHECK(count_basic_cycles(q) == 4);
}

TEST_CASE("parse errors carry line information") {
  CHECK_THROWS_AS(parse_quiver("vertices: 1 1\ntruncation: 2\n"), ParseError);
  CHECK_THROWS_AS(
      parse_quiver("vertices: 1 2\narrow a: 1 -> 9\ntruncation: 2\n"),
      ParseError);
  CHECK_THROWS_AS(
      parse_quiver("vertices: 1 2\narrow a: 1 -> 2\narrow a: 2 -> 1\ntruncation: 2\n"),
      ParseError);
  try {
    parse_quiver("vertices: 1 2\narrow a: 1 -> 9\ntruncation: 2\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("a quiver may have vertices without arrows") {
  QuiverFile f = parse_quiver("vertices: 1 2 3\narrow a: 1 -> 2\ntruncation: 2\n");
  auto cls = classify_vertices(f.quiver);
  CHECK(cls.precyclic.empty());
  CHECK(cls.sources == std::vector<int>{1, 3});
}

}  // TEST_SUITE
