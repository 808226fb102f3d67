#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace polycert {

/// Combinatorial data of a simplicial polyhedron: a vertex count and the
/// list of triangular faces. Adjacency is derived from face co-occurrence.
/// Vertex ids are 1-based throughout.
struct PolyhedralGraph {
  std::string id;
  int vertex_count = 0;
  std::vector<std::array<int, 3>> faces;    // each triple sorted, list sorted
  std::vector<std::vector<int>> adjacency;  // index 1..V, sorted neighbor lists

  int face_count() const { return static_cast<int>(faces.size()); }

  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }

  bool adjacent(int u, int v) const {
    const auto& nb = adjacency[u];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// All edges as ordered pairs (u < v), sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= vertex_count; ++u) {
      for (int v : adjacency[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  int edge_count() const { return static_cast<int>(edges().size()); }
};

/// Outcome of validate_triangulation: passes iff no invariant is violated;
/// otherwise lists every violation found.
struct ValidationResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Builds a graph from a face list, deriving adjacency. Rejects structurally
/// broken input (vertex ids out of range, degenerate faces, duplicate faces)
/// with std::invalid_argument; the triangulation invariants are checked
/// separately by validate_triangulation.
inline PolyhedralGraph make_graph(std::string id, int vertex_count,
                                  std::vector<std::array<int, 3>> faces) {
  if (vertex_count < 1) throw std::invalid_argument("vertex count must be positive");
  PolyhedralGraph g;
  g.id = std::move(id);
  g.vertex_count = vertex_count;
  for (auto f : faces) {
    std::sort(f.begin(), f.end());
    for (int v : f) {
      if (v < 1 || v > vertex_count) {
        throw std::invalid_argument("face vertex id " + std::to_string(v) + " out of range");
      }
    }
    if (f[0] == f[1] || f[1] == f[2]) {
      throw std::invalid_argument("degenerate face with repeated vertex");
    }
    g.faces.push_back(f);
  }
  std::sort(g.faces.begin(), g.faces.end());
  if (std::adjacent_find(g.faces.begin(), g.faces.end()) != g.faces.end()) {
    throw std::invalid_argument("duplicate face");
  }
  std::vector<std::set<int>> nb(vertex_count + 1);
  for (const auto& f : g.faces) {
    nb[f[0]].insert(f[1]);
    nb[f[0]].insert(f[2]);
    nb[f[1]].insert(f[0]);
    nb[f[1]].insert(f[2]);
    nb[f[2]].insert(f[0]);
    nb[f[2]].insert(f[1]);
  }
  g.adjacency.assign(vertex_count + 1, {});
  for (int v = 1; v <= vertex_count; ++v) {
    g.adjacency[v].assign(nb[v].begin(), nb[v].end());
  }
  return g;
}

/// Checks the simplicial-polyhedron invariants: V >= 4, F = 2V-4, E = 3V-6,
/// every edge borders exactly 2 faces, the graph is connected and every
/// vertex has degree >= 3.
inline ValidationResult validate_triangulation(const PolyhedralGraph& g) {
  ValidationResult r;
  auto fail = [&r](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  const int V = g.vertex_count;
  if (V < 4) fail("vertex count " + std::to_string(V) + " < 4");
  const int F = g.face_count();
  if (F != 2 * V - 4) {
    fail("face count " + std::to_string(F) + " != 2V-4 = " + std::to_string(2 * V - 4));
  }
  const int E = g.edge_count();
  if (E != 3 * V - 6) {
    fail("edge count " + std::to_string(E) + " != 3V-6 = " + std::to_string(3 * V - 6));
  }
  std::map<std::pair<int, int>, int> edge_faces;
  for (const auto& f : g.faces) {
    ++edge_faces[{f[0], f[1]}];
    ++edge_faces[{f[0], f[2]}];
    ++edge_faces[{f[1], f[2]}];
  }
  for (const auto& [e, count] : edge_faces) {
    if (count != 2) {
      fail("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") lies on " +
           std::to_string(count) + " faces, expected exactly 2");
    }
  }
  for (int v = 1; v <= V; ++v) {
    if (g.degree(v) < 3) {
      fail("vertex " + std::to_string(v) + " has degree " + std::to_string(g.degree(v)) + " < 3");
    }
  }
  // connectivity by depth-first walk over the derived adjacency
  if (V >= 1) {
    std::vector<char> seen(V + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : g.adjacency[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != V) {
      fail("graph is disconnected: reached " + std::to_string(reached) + " of " +
           std::to_string(V) + " vertices");
    }
  }
  return r;
}

/// The three catalog graphs. Labels are fixed so that orbit representatives
/// and tetrahedron counts match the published tables: bipyramid5 apexes are
/// {1,2}; the irregular octahedron has representatives 1, 2, 5 of degrees
/// 4, 3, 5.
inline std::vector<PolyhedralGraph> builtin_catalog() {
  std::vector<PolyhedralGraph> out;
  out.push_back(make_graph("bipyramid5", 5,
                           {{{1, 3, 4}}, {{1, 3, 5}}, {{1, 4, 5}},
                            {{2, 3, 4}}, {{2, 3, 5}}, {{2, 4, 5}}}));
  out.push_back(make_graph("octahedron6", 6,
                           {{{1, 2, 3}}, {{1, 3, 4}}, {{1, 4, 5}}, {{1, 2, 5}},
                            {{2, 3, 6}}, {{3, 4, 6}}, {{4, 5, 6}}, {{2, 5, 6}}}));
  out.push_back(make_graph("irregular-octahedron6", 6,
                           {{{1, 3, 5}}, {{1, 3, 6}}, {{1, 4, 5}}, {{1, 4, 6}},
                            {{2, 3, 5}}, {{2, 3, 6}}, {{2, 5, 6}}, {{4, 5, 6}}}));
  return out;
}

inline std::optional<PolyhedralGraph> builtin_graph(const std::string& id) {
  for (auto& g : builtin_catalog()) {
    if (g.id == id) return g;
  }
  return std::nullopt;
}

/// Parses the graph file schema {"id": str, "V": int, "faces": [[i,j,k],...]}.
inline PolyhedralGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("id") || !j.contains("V") || !j.contains("faces") ||
      !j["id"].is_string() || !j["V"].is_number_integer() || !j["faces"].is_array()) {
    throw std::runtime_error("graph json must be {\"id\": str, \"V\": int, \"faces\": [[i,j,k],...]}");
  }
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : j["faces"]) {
    if (!f.is_array() || f.size() != 3 || !f[0].is_number_integer() ||
        !f[1].is_number_integer() || !f[2].is_number_integer()) {
      throw std::runtime_error("graph json face must be a triple of vertex ids");
    }
    faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  }
  return make_graph(j["id"].get<std::string>(), j["V"].get<int>(), std::move(faces));
}

/// Loads a graph by builtin id or from a JSON file, and validates it.
/// Throws std::runtime_error on parse failure and on validation failure
/// (the message lists every violated invariant).
inline PolyhedralGraph load_graph(const std::string& source) {
  PolyhedralGraph g;
  if (auto b = builtin_graph(source)) {
    g = std::move(*b);
  } else {
    std::ifstream in(source);
    if (!in) throw std::runtime_error("cannot open graph file '" + source + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("graph file '" + source + "': " + e.what());
    }
    try {
      g = graph_from_json(j);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("graph file '" + source + "': " + e.what());
    }
  }
  auto v = validate_triangulation(g);
  if (!v.ok) {
    std::ostringstream msg;
    msg << "graph '" << g.id << "' is not a simplicial polyhedron:";
    for (const auto& s : v.violations) msg << "\n  - " << s;
    throw std::runtime_error(msg.str());
  }
  return g;
}

}  // namespace polycert
