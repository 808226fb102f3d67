#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycert/automorphism.hpp"
#include "polycert/graph.hpp"

namespace polycert {

/// A spanning tree oriented toward its root: parent[i] is the neighbor of i
/// on the unique tree path to the root; parent[root] = 0.
struct RootedTree {
  int root = 0;
  std::vector<int> parent;  // index 1..V, entry 0 at the root
};

/// One tetrahedron of the decomposition with respect to an apex vertex:
/// the apex together with a face that does not contain it.
struct TetraSelection {
  int apex = 0;
  std::array<int, 3> base{};
};

/// One unit of work: a graph, a candidate root, a shadowing-tree candidate
/// and one tetrahedron of the decomposition.
struct CaseDescriptor {
  std::string graph_id;
  int root = 0;
  RootedTree tree;
  TetraSelection tetra;
  long case_index = -1;
  int tree_index = -1;
  int tetra_index = -1;
};

/// True iff `t` is a spanning tree of g oriented toward t.root: every parent
/// link is a graph edge and every vertex reaches the root without cycles.
inline bool validate_rooted_tree(const PolyhedralGraph& g, const RootedTree& t) {
  const int V = g.vertex_count;
  if (t.root < 1 || t.root > V) return false;
  if (static_cast<int>(t.parent.size()) != V + 1) return false;
  if (t.parent[t.root] != 0) return false;
  for (int i = 1; i <= V; ++i) {
    if (i == t.root) continue;
    const int p = t.parent[i];
    if (p < 1 || p > V || !g.adjacent(i, p)) return false;
  }
  for (int i = 1; i <= V; ++i) {
    int cur = i, steps = 0;
    while (cur != t.root) {
      cur = t.parent[cur];
      if (cur < 1 || cur > V || ++steps > V) return false;
    }
  }
  return true;
}

namespace detail {

struct TreeSearch {
  const std::vector<std::pair<int, int>>& edges;
  int vertex_count;
  std::vector<std::vector<int>>& found;  // each entry: list of edge indices

  void run(std::size_t idx, std::vector<int>& chosen, std::vector<int> dsu) {
    const int need = vertex_count - 1;
    if (static_cast<int>(chosen.size()) == need) {
      found.push_back(chosen);
      return;
    }
    if (idx == edges.size()) return;
    // connectivity pruning: not enough edges left to span
    if (static_cast<int>(chosen.size()) + static_cast<int>(edges.size() - idx) < need) return;
    auto find = [&dsu](int x) {
      while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
      return x;
    };
    const auto [u, v] = edges[idx];
    const int ru = find(u), rv = find(v);
    if (ru != rv) {
      auto next = dsu;
      next[std::max(ru, rv)] = std::min(ru, rv);
      chosen.push_back(static_cast<int>(idx));
      run(idx + 1, chosen, std::move(next));
      chosen.pop_back();
    }
    run(idx + 1, chosen, std::move(dsu));
  }
};

}  // namespace detail

/// Every spanning tree of g, oriented toward `root`, in deterministic order
/// (sorted by the parent vector, lexicographically).
inline std::vector<RootedTree> enumerate_rooted_trees(const PolyhedralGraph& g, int root) {
  const int V = g.vertex_count;
  if (root < 1 || root > V) throw std::invalid_argument("root vertex out of range");
  const auto edges = g.edges();

  std::vector<std::vector<int>> edge_sets;
  std::vector<int> chosen;
  std::vector<int> dsu(V + 1);
  for (int i = 0; i <= V; ++i) dsu[i] = i;
  detail::TreeSearch search{edges, V, edge_sets};
  search.run(0, chosen, dsu);

  std::vector<RootedTree> out;
  out.reserve(edge_sets.size());
  for (const auto& set : edge_sets) {
    std::vector<std::vector<int>> nb(V + 1);
    for (int ei : set) {
      nb[edges[ei].first].push_back(edges[ei].second);
      nb[edges[ei].second].push_back(edges[ei].first);
    }
    RootedTree t;
    t.root = root;
    t.parent.assign(V + 1, 0);
    std::vector<int> stack{root};
    std::vector<char> seen(V + 1, 0);
    seen[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : nb[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          t.parent[w] = u;
          stack.push_back(w);
        }
      }
    }
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const RootedTree& a, const RootedTree& b) { return a.parent < b.parent; });
  return out;
}

/// Spanning-tree count by the matrix-tree theorem: the determinant of the
/// graph Laplacian with the first row and column removed, evaluated in exact
/// integer arithmetic (fraction-free elimination). Independent of the
/// backtracking enumeration above.
inline std::int64_t spanning_tree_count_oracle(const PolyhedralGraph& g) {
  const int V = g.vertex_count;
  const int n = V - 1;
  if (n <= 0) return 1;
  std::vector<std::int64_t> a(static_cast<std::size_t>(n) * n, 0);
  auto at = [&a, n](int i, int j) -> std::int64_t& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int u = 2; u <= V; ++u) {
    at(u - 2, u - 2) = g.degree(u);
    for (int w : g.adjacency[u]) {
      if (w >= 2) at(u - 2, w - 2) -= 1;
    }
  }
  // Bareiss: division-free apart from exact divisions by the previous pivot.
  std::int64_t prev = 1;
  for (int k = 0; k < n; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (at(i, k) != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      // a row swap flips the determinant sign; Laplacian minors are
      // nonnegative, so track the sign explicitly
      for (int j = 0; j < n; ++j) at(swap_row, j) = -at(swap_row, j);
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return at(n - 1, n - 1);
}

/// One tetrahedron per face of g not containing the apex, in face order.
inline std::vector<TetraSelection> tetra_decomposition(const PolyhedralGraph& g, int apex) {
  if (apex < 1 || apex > g.vertex_count) throw std::invalid_argument("apex vertex out of range");
  std::vector<TetraSelection> out;
  for (const auto& f : g.faces) {
    if (f[0] == apex || f[1] == apex || f[2] == apex) continue;
    out.push_back(TetraSelection{apex, f});
  }
  return out;
}

/// The full case list of a graph: for every orbit representative v, the
/// Cartesian product of spanning trees rooted at v and tetrahedra of the
/// decomposition at v. Case indices are contiguous, tetrahedra cycling
/// fastest.
inline std::vector<CaseDescriptor> enumerate_cases(const PolyhedralGraph& g,
                                                   const VertexClassPartition& partition) {
  std::vector<CaseDescriptor> out;
  long index = 0;
  for (int v : partition.representatives) {
    const auto trees = enumerate_rooted_trees(g, v);
    const auto tetras = tetra_decomposition(g, v);
    for (std::size_t ti = 0; ti < trees.size(); ++ti) {
      for (std::size_t ki = 0; ki < tetras.size(); ++ki) {
        CaseDescriptor cd;
        cd.graph_id = g.id;
        cd.root = v;
        cd.tree = trees[ti];
        cd.tetra = tetras[ki];
        cd.case_index = index++;
        cd.tree_index = static_cast<int>(ti);
        cd.tetra_index = static_cast<int>(ki);
        out.push_back(std::move(cd));
      }
    }
  }
  return out;
}

}  // namespace polycert
