#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polycert/enumeration.hpp"
#include "polycert/graph.hpp"
#include "polycert/rational.hpp"

namespace polycert {

/// Coordinate layout after pinning the root vertex at (1,0,0): every other
/// vertex owns three consecutive coordinates, in increasing vertex id.
struct VariableLayout {
  int root = 0;
  int vertex_count = 0;
  std::vector<int> block;  // index 1..V; block[root] = -1
  int dimension = 0;       // 3(V-1)

  int slot(int vertex, int axis) const { return 3 * block[vertex] + axis; }
};

inline VariableLayout make_layout(int vertex_count, int root) {
  VariableLayout lay;
  lay.root = root;
  lay.vertex_count = vertex_count;
  lay.block.assign(vertex_count + 1, -1);
  int next = 0;
  for (int v = 1; v <= vertex_count; ++v) {
    if (v != root) lay.block[v] = next++;
  }
  lay.dimension = 3 * (vertex_count - 1);
  return lay;
}

/// One inequality a + b'x + x'Qx <= 0 with exact rational coefficients.
/// Q is kept exactly symmetric.
struct QuadraticInequality {
  int n = 0;
  mpq_class a;
  std::vector<mpq_class> b;
  RatMatrix Q;

  explicit QuadraticInequality(int dim) : n(dim), a(0), b(dim, mpq_class(0)), Q(dim) {}
};

/// The case system: V-1 shadow inequalities (one per non-root vertex,
/// ordered by vertex id) followed by the tetrahedron inequality.
struct QuadraticSystem {
  int n = 0;
  std::vector<QuadraticInequality> inequalities;
  CaseDescriptor provenance;
  VariableLayout layout;

  int m() const { return static_cast<int>(inequalities.size()); }
};

/// Shadow condition "i is shadowed by p" with the center of mass at the
/// origin: r_i'r_i - r_p'r_i <= 0. With the root pinned at (1,0,0) a root
/// parent contributes the linear term -x_{i,1} instead of a cross block.
inline QuadraticInequality build_shadow_inequality(const PolyhedralGraph& g, int i, int p,
                                                   int root, const VariableLayout& layout) {
  if (i == root) throw std::invalid_argument("shadow inequality cannot target the root vertex");
  if (!g.adjacent(i, p)) {
    throw std::invalid_argument("parent " + std::to_string(p) + " is not adjacent to vertex " +
                                std::to_string(i));
  }
  QuadraticInequality q(layout.dimension);
  const mpq_class one(1), half(1, 2);
  for (int axis = 0; axis < 3; ++axis) {
    q.Q.at(layout.slot(i, axis), layout.slot(i, axis)) = one;
  }
  if (p == root) {
    q.b[layout.slot(i, 0)] = -1;
  } else {
    for (int axis = 0; axis < 3; ++axis) {
      q.Q.at(layout.slot(i, axis), layout.slot(p, axis)) = -half;
      q.Q.at(layout.slot(p, axis), layout.slot(i, axis)) = -half;
    }
  }
  return q;
}

/// Tetrahedron condition: the first-coordinate sum of the tetrahedron's
/// vertices is nonpositive. The apex, pinned at (1,0,0), contributes the
/// constant 1; each base vertex contributes its first coordinate.
inline QuadraticInequality build_tetra_inequality(const TetraSelection& t,
                                                  const VariableLayout& layout) {
  for (int v : t.base) {
    if (v == t.apex) throw std::invalid_argument("tetrahedron base contains the apex");
  }
  QuadraticInequality q(layout.dimension);
  q.a = 1;
  for (int v : t.base) {
    q.b[layout.slot(v, 0)] = 1;
  }
  return q;
}

/// Assembles the full case system. The case must be consistent with the
/// graph: the tree spans g rooted at the case root, and the tetrahedron base
/// is a face of g avoiding the root.
inline QuadraticSystem assemble_system(const CaseDescriptor& cd, const PolyhedralGraph& g) {
  if (cd.tree.root != cd.root || cd.tetra.apex != cd.root) {
    throw std::invalid_argument("case root, tree root and tetra apex must agree");
  }
  if (!validate_rooted_tree(g, cd.tree)) {
    throw std::invalid_argument("case tree is not a spanning tree of the graph rooted at " +
                                std::to_string(cd.root));
  }
  auto base = cd.tetra.base;
  std::sort(base.begin(), base.end());
  if (!std::binary_search(g.faces.begin(), g.faces.end(), base)) {
    throw std::invalid_argument("tetrahedron base is not a face of the graph");
  }
  if (base[0] == cd.root || base[1] == cd.root || base[2] == cd.root) {
    throw std::invalid_argument("tetrahedron base contains the root");
  }
  QuadraticSystem sys;
  sys.layout = make_layout(g.vertex_count, cd.root);
  sys.n = sys.layout.dimension;
  sys.provenance = cd;
  for (int i = 1; i <= g.vertex_count; ++i) {
    if (i == cd.root) continue;
    sys.inequalities.push_back(
        build_shadow_inequality(g, i, cd.tree.parent[i], cd.root, sys.layout));
  }
  sys.inequalities.push_back(build_tetra_inequality(cd.tetra, sys.layout));
  return sys;
}

/// The (n+1)x(n+1) symmetric matrix [[a, b'/2], [b/2, Q]] packaging one
/// inequality, so that (1,x)' M (1,x) = a + b'x + x'Qx.
inline RatMatrix augmented_matrix(const QuadraticInequality& q) {
  RatMatrix m(q.n + 1);
  const mpq_class half(1, 2);
  m.at(0, 0) = q.a;
  for (int j = 0; j < q.n; ++j) {
    mpq_class h = q.b[j] * half;
    m.at(0, j + 1) = h;
    m.at(j + 1, 0) = h;
  }
  for (int i = 0; i < q.n; ++i) {
    for (int j = 0; j < q.n; ++j) {
      m.at(i + 1, j + 1) = q.Q.at(i, j);
    }
  }
  return m;
}

/// Exact evaluation of a + b'x + x'Qx at a rational point.
inline mpq_class evaluate_inequality(const QuadraticInequality& q,
                                     const std::vector<mpq_class>& x) {
  if (static_cast<int>(x.size()) != q.n) {
    throw std::invalid_argument("evaluation point has wrong dimension");
  }
  mpq_class value = q.a;
  for (int j = 0; j < q.n; ++j) {
    if (sgn(q.b[j]) != 0) value += q.b[j] * x[j];
  }
  for (int i = 0; i < q.n; ++i) {
    for (int j = 0; j < q.n; ++j) {
      const mpq_class& c = q.Q.at(i, j);
      if (sgn(c) != 0) value += c * x[i] * x[j];
    }
  }
  return value;
}

/// Floating evaluation of the same expression.
inline double evaluate_inequality(const QuadraticInequality& q, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != q.n) {
    throw std::invalid_argument("evaluation point has wrong dimension");
  }
  double value = q.a.get_d();
  for (int j = 0; j < q.n; ++j) value += q.b[j].get_d() * x[j];
  for (int i = 0; i < q.n; ++i) {
    for (int j = 0; j < q.n; ++j) {
      double c = q.Q.at(i, j).get_d();
      if (c != 0.0) value += c * x[i] * x[j];
    }
  }
  return value;
}

/// Serialization used for auditing: n plus per-inequality a, b and the
/// row-major upper triangle of Q, all as "p/q" strings.
inline nlohmann::json system_to_json(const QuadraticSystem& sys) {
  nlohmann::json j;
  j["n"] = sys.n;
  j["m"] = sys.m();
  if (!sys.provenance.graph_id.empty()) {
    nlohmann::json c;
    c["graph"] = sys.provenance.graph_id;
    c["root"] = sys.provenance.root;
    std::vector<int> parents(sys.provenance.tree.parent.begin() + 1,
                             sys.provenance.tree.parent.end());
    c["parents"] = parents;
    c["tetra_base"] = sys.provenance.tetra.base;
    j["case"] = c;
  }
  nlohmann::json ineqs = nlohmann::json::array();
  for (const auto& q : sys.inequalities) {
    nlohmann::json e;
    e["a"] = format_rational(q.a);
    std::vector<std::string> b;
    for (const auto& v : q.b) b.push_back(format_rational(v));
    e["b"] = b;
    std::vector<std::string> upper;
    for (int r = 0; r < q.n; ++r) {
      for (int c = r; c < q.n; ++c) upper.push_back(format_rational(q.Q.at(r, c)));
    }
    e["Q"] = upper;
    ineqs.push_back(std::move(e));
  }
  j["inequalities"] = std::move(ineqs);
  return j;
}

/// Inverse of system_to_json; throws std::runtime_error on schema errors.
inline QuadraticSystem system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("inequalities") ||
      !j["n"].is_number_integer() || !j["inequalities"].is_array()) {
    throw std::runtime_error("system json must carry integer n and an inequalities array");
  }
  QuadraticSystem sys;
  sys.n = j["n"].get<int>();
  if (sys.n < 0) throw std::runtime_error("system dimension must be nonnegative");
  try {
    for (const auto& e : j["inequalities"]) {
      if (!e.is_object() || !e.contains("a") || !e.contains("b") || !e.contains("Q")) {
        throw std::runtime_error("inequality entry must carry a, b, Q");
      }
      QuadraticInequality q(sys.n);
      q.a = parse_rational(e["a"].get<std::string>());
      if (static_cast<int>(e["b"].size()) != sys.n) {
        throw std::runtime_error("inequality b has wrong length");
      }
      for (int i = 0; i < sys.n; ++i) q.b[i] = parse_rational(e["b"][i].get<std::string>());
      const int upper_len = sys.n * (sys.n + 1) / 2;
      if (static_cast<int>(e["Q"].size()) != upper_len) {
        throw std::runtime_error("inequality Q upper triangle has wrong length");
      }
      int idx = 0;
      for (int r = 0; r < sys.n; ++r) {
        for (int c = r; c < sys.n; ++c) {
          mpq_class v = parse_rational(e["Q"][idx++].get<std::string>());
          q.Q.at(r, c) = v;
          q.Q.at(c, r) = v;
        }
      }
      sys.inequalities.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("system json: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw std::runtime_error(std::string("system json: ") + ex.what());
  }
  return sys;
}

}  // namespace polycert
