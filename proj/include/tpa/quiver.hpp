#pragma once
// Quiver data model, the two input formats (plain text and structured JSON),
// vertex classification (precyclic / postcyclic / cyclebound / sources), and
// canonical path enumeration.
//
// Path convention: a QPath stores its arrows in traversal order (first arrow
// traversed first).  The *product* convention used everywhere is "after":
// the product pq is "q, then p", and the textual form of a path joins arrow
// names right-to-left ("b*a" is a then b).

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpa {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_) + ": " + msg),
        line(line_), col(col_) {}
};

struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& msg)
      : std::runtime_error("invariant violated: " + msg) {}
};

struct Arrow {
  std::string name;
  int src = 0, tgt = 0;  // vertex ids
};

class Quiver {
public:
  Quiver() = default;
  Quiver(std::vector<int> vertices, std::vector<Arrow> arrows)
      : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
    index_();
  }

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_arrows() const { return arrows_.size(); }

  bool has_vertex(int id) const { return vidx_.count(id) > 0; }
  std::size_t vertex_index(int id) const {
    auto it = vidx_.find(id);
    if (it == vidx_.end())
      throw std::invalid_argument("unknown vertex id " + std::to_string(id));
    return it->second;
  }
  int vertex_id(std::size_t idx) const { return vertices_.at(idx); }

  const Arrow& arrow(std::size_t idx) const { return arrows_.at(idx); }
  // Arrow indices with the given source, in declaration order.
  const std::vector<std::size_t>& arrows_from(int vertex_id) const {
    static const std::vector<std::size_t> empty;
    auto it = out_.find(vertex_id);
    return it == out_.end() ? empty : it->second;
  }
  const std::vector<std::size_t>& arrows_into(int vertex_id) const {
    static const std::vector<std::size_t> empty;
    auto it = in_.find(vertex_id);
    return it == in_.end() ? empty : it->second;
  }

  Quiver opposite() const {
    std::vector<Arrow> rev;
    rev.reserve(arrows_.size());
    for (const auto& a : arrows_) rev.push_back({a.name, a.tgt, a.src});
    return Quiver(vertices_, rev);
  }

private:
  void index_() {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vidx_.count(vertices_[i]))
        throw InvariantError("duplicate vertex id " +
                             std::to_string(vertices_[i]));
      vidx_[vertices_[i]] = i;
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
      const Arrow& a = arrows_[i];
      if (!names.insert(a.name).second)
        throw InvariantError("duplicate arrow name '" + a.name + "'");
      if (!has_vertex(a.src) || !has_vertex(a.tgt))
        throw InvariantError("arrow '" + a.name +
                             "' references an undeclared vertex");
      out_[a.src].push_back(i);
      in_[a.tgt].push_back(i);
    }
  }

  std::vector<int> vertices_;
  std::vector<Arrow> arrows_;
  std::map<int, std::size_t> vidx_;
  std::map<int, std::vector<std::size_t>> out_, in_;
};

// ---------------------------------------------------------------------------
// Paths.
// ---------------------------------------------------------------------------
struct QPath {
  int start = 0;                  // vertex id
  std::vector<std::size_t> arrows;  // arrow indices, traversal order

  std::size_t length() const { return arrows.size(); }

  int end(const Quiver& q) const {
    return arrows.empty() ? start : q.arrow(arrows.back()).tgt;
  }

  bool operator==(const QPath& o) const {
    return start == o.start && arrows == o.arrows;
  }
  bool operator<(const QPath& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (start != o.start) return start < o.start;
    return arrows < o.arrows;
  }

  // Textual form in the "after" convention: arrow names right-to-left.
  std::string str(const Quiver& q) const {
    if (arrows.empty()) return "e_" + std::to_string(start);
    std::string s;
    for (auto it = arrows.rbegin(); it != arrows.rend(); ++it) {
      if (!s.empty()) s += "*";
      s += q.arrow(*it).name;
    }
    return s;
  }

  // Vertex itinerary like "(2 3 6)", for diagnostics.
  std::string itinerary(const Quiver& q) const {
    std::string s = "(" + std::to_string(start);
    int v = start;
    for (auto ai : arrows) {
      v = q.arrow(ai).tgt;
      s += " " + std::to_string(v);
    }
    return s + ")";
  }
};

// p after q: q traversed first.  Returns false if the endpoints do not match.
inline bool compose_after(const Quiver& q, const QPath& p, const QPath& first,
                          QPath& out) {
  if (p.start != first.end(q)) return false;
  out.start = first.start;
  out.arrows = first.arrows;
  out.arrows.insert(out.arrows.end(), p.arrows.begin(), p.arrows.end());
  return true;
}

// ---------------------------------------------------------------------------
// Vertex classification.
// ---------------------------------------------------------------------------
struct VertexClassification {
  std::vector<int> precyclic, postcyclic, cyclebound, sources,
      precyclic_sources, non_precyclic;
  std::set<int> precyclic_set, postcyclic_set, cyclebound_set, source_set;

  bool is_precyclic(int v) const { return precyclic_set.count(v) > 0; }
  bool is_cyclebound(int v) const { return cyclebound_set.count(v) > 0; }
  bool is_postcyclic(int v) const { return postcyclic_set.count(v) > 0; }
  bool is_source(int v) const { return source_set.count(v) > 0; }
};

// Tarjan-free cyclebound detection: v lies on an oriented cycle iff v is
// reachable from one of its out-neighbors.
inline VertexClassification classify_vertices(const Quiver& q) {
  const auto& vs = q.vertices();
  auto reach_from = [&](int v0) {
    std::set<int> seen;
    std::vector<int> stack{v0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto ai : q.arrows_from(v)) {
        int w = q.arrow(ai).tgt;
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return seen;  // vertices reachable by a path of length >= 1
  };

  VertexClassification c;
  std::map<int, std::set<int>> fwd;
  for (int v : vs) fwd[v] = reach_from(v);
  for (int v : vs)
    if (fwd[v].count(v)) {
      c.cyclebound.push_back(v);
      c.cyclebound_set.insert(v);
    }
  for (int v : vs) {
    bool pre = c.cyclebound_set.count(v) > 0;
    if (!pre)
      for (int w : fwd[v])
        if (c.cyclebound_set.count(w)) { pre = true; break; }
    if (pre) {
      c.precyclic.push_back(v);
      c.precyclic_set.insert(v);
    } else {
      c.non_precyclic.push_back(v);
    }
  }
  for (int v : vs) {
    bool post = c.cyclebound_set.count(v) > 0;
    if (!post)
      for (int w : c.cyclebound)
        if (fwd[w].count(v)) { post = true; break; }
    if (post) {
      c.postcyclic.push_back(v);
      c.postcyclic_set.insert(v);
    }
  }
  for (int v : vs)
    if (q.arrows_into(v).empty()) {
      c.sources.push_back(v);
      c.source_set.insert(v);
      if (c.precyclic_set.count(v)) c.precyclic_sources.push_back(v);
    }
  return c;
}

inline bool has_precyclic_source(const Quiver& q) {
  return !classify_vertices(q).precyclic_sources.empty();
}

// ---------------------------------------------------------------------------
// Path enumeration, canonical order: (length, start-vertex declaration order,
// arrow-index sequence lexicographic).
// ---------------------------------------------------------------------------
inline void enumerate_paths_from(const Quiver& q, int from, int to,
                                 bool any_target, std::size_t min_len,
                                 std::size_t max_len,
                                 std::vector<QPath>& out) {
  QPath cur;
  cur.start = from;
  // Iterative DFS producing lexicographic order within each length is awkward;
  // recursive enumeration + stable sort keeps the code obvious.
  std::vector<QPath> all;
  struct Rec {
    const Quiver& q;
    std::size_t max_len;
    std::vector<QPath>& all;
    void go(QPath& p, int at) {
      all.push_back(p);
      if (p.arrows.size() == max_len) return;
      for (auto ai : q.arrows_from(at)) {
        p.arrows.push_back(ai);
        go(p, q.arrow(ai).tgt);
        p.arrows.pop_back();
      }
    }
  } rec{q, max_len, all};
  rec.go(cur, from);
  for (auto& p : all) {
    if (p.length() < min_len) continue;
    if (!any_target && p.end(q) != to) continue;
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end());
}

inline std::vector<QPath> enumerate_paths(const Quiver& q, int from, int to,
                                          std::size_t min_len,
                                          std::size_t max_len) {
  std::vector<QPath> out;
  enumerate_paths_from(q, from, to, false, min_len, max_len, out);
  return out;
}

inline std::vector<QPath> enumerate_paths_any_end(const Quiver& q, int from,
                                                  std::size_t min_len,
                                                  std::size_t max_len) {
  std::vector<QPath> out;
  enumerate_paths_from(q, from, 0, true, min_len, max_len, out);
  return out;
}

// All paths of length <= max_len, canonical global order.
inline std::vector<QPath> all_paths(const Quiver& q, std::size_t max_len) {
  std::vector<QPath> out;
  for (int v : q.vertices()) enumerate_paths_from(q, v, 0, true, 0, max_len, out);
  std::stable_sort(out.begin(), out.end(),
                   [&](const QPath& a, const QPath& b) {
                     if (a.length() != b.length()) return a.length() < b.length();
                     std::size_t ia = q.vertex_index(a.start),
                                 ib = q.vertex_index(b.start);
                     if (ia != ib) return ia < ib;
                     return a.arrows < b.arrows;
                   });
  return out;
}

// Number of basic oriented cycles: cyclic paths of positive length with no
// repeated vertex, counted up to rotation (as arrow sequences, so parallel
// arrows give distinct cycles; a loop is a length-1 cycle).  Each cycle is
// counted once, based at its minimal-index vertex.
inline std::size_t count_basic_cycles(const Quiver& q) {
  std::size_t count = 0;
  std::vector<bool> onstack(q.n_vertices(), false);
  for (std::size_t b = 0; b < q.n_vertices(); ++b) {
    int base = q.vertices()[b];
    std::function<void(int)> dfs = [&](int v) {
      onstack[q.vertex_index(v)] = true;
      for (std::size_t a : q.arrows_from(v)) {
        int w = q.arrow(a).tgt;
        std::size_t wi = q.vertex_index(w);
        if (w == base) {
          ++count;
        } else if (wi > b && !onstack[wi]) {
          dfs(w);
        }
      }
      onstack[q.vertex_index(v)] = false;
    };
    dfs(base);
  }
  return count;
}

// ---------------------------------------------------------------------------
// Parsing.  Plain-text format:
//   vertices: 2 3 4 5 6
//   arrow a23: 2 -> 3
//   truncation: 3
// Structured (JSON) format:
//   {"vertices": [...], "arrows": [{"name":..., "src":..., "tgt":...}, ...],
//    "truncation": t}
// Both round-trip.  The truncation field is optional at this layer; it is
// surfaced for the algebra builder.
// ---------------------------------------------------------------------------
struct QuiverFile {
  Quiver quiver;
  int truncation = 0;  // 0 = absent
};

namespace detail {
inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

inline QuiverFile parse_quiver_text(const std::string& text) {
  std::vector<int> vertices;
  std::vector<Arrow> arrows;
  int truncation = 0;
  bool saw_vertices = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(lineno, 1, "expected '<keyword>: ...'");
    std::string head = detail::trim(line.substr(0, colon));
    std::string rest = detail::trim(line.substr(colon + 1));
    if (head == "vertices") {
      std::istringstream vs(rest);
      std::string tok;
      while (vs >> tok) {
        try {
          vertices.push_back(std::stoi(tok));
        } catch (...) {
          throw ParseError(lineno, int(colon) + 2,
                           "bad vertex id '" + tok + "'");
        }
      }
      saw_vertices = true;
    } else if (head.rfind("arrow ", 0) == 0 || head.rfind("arrow\t", 0) == 0) {
      std::string name = detail::trim(head.substr(6));
      if (name.empty()) throw ParseError(lineno, 7, "missing arrow name");
      auto arr = rest.find("->");
      if (arr == std::string::npos)
        throw ParseError(lineno, int(colon) + 2, "expected '<src> -> <tgt>'");
      std::string s = detail::trim(rest.substr(0, arr));
      std::string t = detail::trim(rest.substr(arr + 2));
      int si = 0, ti = 0;
      try {
        si = std::stoi(s);
        ti = std::stoi(t);
      } catch (...) {
        throw ParseError(lineno, int(colon) + 2, "bad arrow endpoints");
      }
      arrows.push_back({name, si, ti});
    } else if (head == "truncation") {
      try {
        truncation = std::stoi(rest);
      } catch (...) {
        throw ParseError(lineno, int(colon) + 2, "bad truncation value");
      }
    } else {
      throw ParseError(lineno, 1, "unknown keyword '" + head + "'");
    }
  }
  if (!saw_vertices) throw ParseError(lineno ? lineno : 1, 1, "missing 'vertices:' line");
  QuiverFile f;
  try {
    f.quiver = Quiver(vertices, arrows);
  } catch (const InvariantError& e) {
    throw ParseError(lineno, 1, e.what());
  }
  f.truncation = truncation;
  return f;
}

inline QuiverFile parse_quiver_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, int(e.byte), std::string("JSON: ") + e.what());
  }
  QuiverFile f;
  std::vector<int> vertices;
  std::vector<Arrow> arrows;
  try {
    for (const auto& v : j.at("vertices")) vertices.push_back(v.get<int>());
    if (j.contains("arrows"))
      for (const auto& a : j.at("arrows"))
        arrows.push_back({a.at("name").get<std::string>(),
                          a.at("src").get<int>(), a.at("tgt").get<int>()});
    if (j.contains("truncation")) f.truncation = j.at("truncation").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, 1, std::string("JSON: ") + e.what());
  }
  try {
    f.quiver = Quiver(vertices, arrows);
  } catch (const InvariantError& e) {
    throw ParseError(1, 1, e.what());
  }
  return f;
}

inline QuiverFile parse_quiver(const std::string& text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
    if (ch == '{') return parse_quiver_json(text);
    break;
  }
  return parse_quiver_text(text);
}

inline std::string quiver_to_text(const QuiverFile& f) {
  std::ostringstream out;
  out << "vertices:";
  for (int v : f.quiver.vertices()) out << " " << v;
  out << "\n";
  for (const auto& a : f.quiver.arrows())
    out << "arrow " << a.name << ": " << a.src << " -> " << a.tgt << "\n";
  if (f.truncation > 0) out << "truncation: " << f.truncation << "\n";
  return out.str();
}

inline std::string quiver_to_json(const QuiverFile& f) {
  nlohmann::ordered_json j;
  j["vertices"] = f.quiver.vertices();
  j["arrows"] = nlohmann::ordered_json::array();
  for (const auto& a : f.quiver.arrows())
    j["arrows"].push_back({{"name", a.name}, {"src", a.src}, {"tgt", a.tgt}});
  if (f.truncation > 0) j["truncation"] = f.truncation;
  return j.dump(2) + "\n";
}

}  // namespace tpa
