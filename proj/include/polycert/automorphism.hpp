#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "polycert/graph.hpp"

namespace polycert {

/// Partition of the vertex set into orbits of the automorphism group.
/// Classes are sorted by their smallest member, which is the representative.
struct VertexClassPartition {
  std::vector<std::vector<int>> classes;
  std::vector<int> representatives;
};

namespace detail {

inline void extend_automorphism(const PolyhedralGraph& g, std::vector<int>& image,
                                std::vector<char>& used,
                                std::vector<std::vector<int>>& out) {
  const int V = g.vertex_count;
  const int v = static_cast<int>(image.size());  // next vertex to map, 0-based count
  if (v == V) {
    out.push_back(image);
    return;
  }
  const int cur = v + 1;
  for (int cand = 1; cand <= V; ++cand) {
    if (used[cand] || g.degree(cand) != g.degree(cur)) continue;
    bool consistent = true;
    for (int prev = 1; prev < cur; ++prev) {
      if (g.adjacent(cur, prev) != g.adjacent(cand, image[prev - 1])) {
        consistent = false;
        break;
      }
    }
    if (!consistent) continue;
    image.push_back(cand);
    used[cand] = 1;
    extend_automorphism(g, image, used, out);
    image.pop_back();
    used[cand] = 0;
  }
}

}  // namespace detail

/// All automorphisms of the adjacency relation, found by exhaustive search
/// over degree-compatible vertex permutations. Each permutation maps vertex
/// i to perm[i-1]. Only intended for V <= 8.
inline std::vector<std::vector<int>> graph_automorphisms(const PolyhedralGraph& g) {
  if (g.vertex_count > 8) {
    throw std::invalid_argument("brute-force automorphism search is limited to V <= 8");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> image;
  std::vector<char> used(g.vertex_count + 1, 0);
  detail::extend_automorphism(g, image, used, out);
  return out;
}

/// Orbit partition of the vertices under the full automorphism group,
/// with the smallest id of each orbit as its representative.
inline VertexClassPartition automorphism_classes(const PolyhedralGraph& g) {
  const int V = g.vertex_count;
  const auto autos = graph_automorphisms(g);
  std::vector<int> root(V + 1);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&root](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& perm : autos) {
    for (int v = 1; v <= V; ++v) {
      int a = find(v), b = find(perm[v - 1]);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<int>> classes;
  for (int rep = 1; rep <= V; ++rep) {
    if (find(rep) != rep) continue;
    std::vector<int> cls;
    for (int v = 1; v <= V; ++v) {
      if (find(v) == rep) cls.push_back(v);
    }
    classes.push_back(std::move(cls));
  }
  VertexClassPartition part;
  part.classes = std::move(classes);
  for (const auto& cls : part.classes) part.representatives.push_back(cls.front());
  return part;
}

}  // namespace polycert
