#include <catch2/catch.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "polycert/automorphism.hpp"
#include "polycert/graph.hpp"

using namespace polycert;

namespace {

std::filesystem::path write_temp_json(const std::string& name, const std::string& body) {
  auto dir = std::filesystem::temp_directory_path() / "polycert_graph_tests";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path);
  out << body;
  return path;
}

PolyhedralGraph tetrahedron() {
  return make_graph("tetrahedron4", 4, {{{1, 2, 3}}, {{1, 2, 4}}, {{1, 3, 4}}, {{2, 3, 4}}});
}

}  // namespace

TEST_CASE("builtin catalog graphs validate and have the documented shape") {
  auto catalog = builtin_catalog();
  REQUIRE(catalog.size() == 3);

  const auto& bip = catalog[0];
  CHECK(bip.id == "bipyramid5");
  CHECK(bip.vertex_count == 5);
  CHECK(bip.face_count() == 6);
  CHECK(bip.edge_count() == 9);
  CHECK(bip.degree(1) == 3);
  CHECK(bip.degree(2) == 3);
  CHECK(bip.degree(3) == 4);
  CHECK(bip.degree(4) == 4);
  CHECK(bip.degree(5) == 4);

  const auto& oct = catalog[1];
  CHECK(oct.id == "octahedron6");
  CHECK(oct.vertex_count == 6);
  CHECK(oct.face_count() == 8);
  CHECK(oct.edge_count() == 12);
  for (int v = 1; v <= 6; ++v) CHECK(oct.degree(v) == 4);

  const auto& irr = catalog[2];
  CHECK(irr.id == "irregular-octahedron6");
  CHECK(irr.face_count() == 8);
  CHECK(irr.degree(1) == 4);
  CHECK(irr.degree(2) == 3);
  CHECK(irr.degree(5) == 5);

  for (const auto& g : catalog) {
    auto r = validate_triangulation(g);
    INFO(g.id);
    CHECK(r.ok);
    CHECK(g.face_count() == 2 * g.vertex_count - 4);
    CHECK(g.edge_count() == 3 * g.vertex_count - 6);
  }
}

TEST_CASE("every edge of a validated graph lies on exactly two faces") {
  auto graphs = builtin_catalog();
  graphs.push_back(tetrahedron());
  for (const auto& g : graphs) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& f : g.faces) {
      ++count[{f[0], f[1]}];
      ++count[{f[0], f[2]}];
      ++count[{f[1], f[2]}];
    }
    INFO(g.id);
    CHECK(count.size() == static_cast<std::size_t>(g.edge_count()));
    for (const auto& [e, c] : count) {
      (void)e;
      CHECK(c == 2);
    }
  }
}

TEST_CASE("validate_triangulation reports violated invariants") {
  SECTION("deleting a face breaks the two-faces-per-edge rule") {
    auto g = builtin_catalog()[0];
    auto faces = g.faces;
    faces.pop_back();
    auto broken = make_graph("broken", 5, faces);
    auto r = validate_triangulation(broken);
    REQUIRE_FALSE(r.ok);
    bool mentions_edge_rule = false;
    for (const auto& v : r.violations) {
      if (v.find("expected exactly 2") != std::string::npos) mentions_edge_rule = true;
    }
    CHECK(mentions_edge_rule);
  }
  SECTION("V=6 with 7 faces fails the face-count invariant") {
    auto g = builtin_catalog()[1];
    auto faces = g.faces;
    faces.pop_back();
    auto broken = make_graph("sevenfaces", 6, faces);
    auto r = validate_triangulation(broken);
    REQUIRE_FALSE(r.ok);
    bool mentions_count = false;
    for (const auto& v : r.violations) {
      if (v.find("2V-4") != std::string::npos) mentions_count = true;
    }
    CHECK(mentions_count);
  }
  SECTION("tiny vertex count is rejected") {
    auto r = validate_triangulation(make_graph("point", 3, {{{1, 2, 3}}}));
    CHECK_FALSE(r.ok);
  }
}

TEST_CASE("make_graph rejects structurally broken input") {
  CHECK_THROWS_AS(make_graph("dup", 4,
                             {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 4}}, {{1, 3, 4}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_graph("dup-unsorted", 4, {{{1, 2, 3}}, {{3, 2, 1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_graph("range", 4, {{{1, 2, 9}}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph("degenerate", 4, {{{1, 2, 2}}}), std::invalid_argument);
}

TEST_CASE("load_graph resolves builtins and JSON files") {
  SECTION("builtin id") {
    auto g = load_graph("bipyramid5");
    CHECK(g.vertex_count == 5);
  }
  SECTION("tetrahedron from file") {
    auto path = write_temp_json(
        "tetra.json", R"({"id":"tetra4","V":4,"faces":[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]})");
    auto g = load_graph(path.string());
    CHECK(g.id == "tetra4");
    CHECK(g.vertex_count == 4);
    CHECK(g.face_count() == 4);
    CHECK(g.edge_count() == 6);
  }
  SECTION("parse failure") {
    auto path = write_temp_json("garbage.json", "{not json");
    CHECK_THROWS_AS(load_graph(path.string()), std::runtime_error);
  }
  SECTION("schema failure") {
    auto path = write_temp_json("schema.json", R"({"id":"x","faces":[]})");
    CHECK_THROWS_AS(load_graph(path.string()), std::runtime_error);
  }
  SECTION("validation failure names the broken invariant") {
    auto path = write_temp_json(
        "open.json", R"({"id":"open","V":4,"faces":[[1,2,3],[1,2,4],[1,3,4]]})");
    try {
      load_graph(path.string());
      FAIL("expected validation failure");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("not a simplicial polyhedron") != std::string::npos);
    }
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_graph("/nonexistent/path/graph.json"), std::runtime_error);
  }
}

TEST_CASE("automorphism classes of the catalog graphs match the known orbits") {
  auto catalog = builtin_catalog();

  auto bip = automorphism_classes(catalog[0]);
  REQUIRE(bip.classes.size() == 2);
  CHECK(bip.classes[0] == std::vector<int>{1, 2});
  CHECK(bip.classes[1] == std::vector<int>{3, 4, 5});
  CHECK(bip.representatives == std::vector<int>{1, 3});

  auto oct = automorphism_classes(catalog[1]);
  REQUIRE(oct.classes.size() == 1);
  CHECK(oct.classes[0] == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(oct.representatives == std::vector<int>{1});

  auto irr = automorphism_classes(catalog[2]);
  REQUIRE(irr.classes.size() == 3);
  CHECK(irr.representatives == std::vector<int>{1, 2, 5});

  auto tet = automorphism_classes(tetrahedron());
  REQUIRE(tet.classes.size() == 1);
  CHECK(tet.representatives == std::vector<int>{1});
}

TEST_CASE("orbit partition is invariant under relabeling") {
  std::mt19937 rng(20240817);
  for (const auto& g : builtin_catalog()) {
    const int V = g.vertex_count;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> perm(V + 1);
      for (int v = 1; v <= V; ++v) perm[v] = v;
      std::shuffle(perm.begin() + 1, perm.end(), rng);
      std::vector<std::array<int, 3>> faces;
      for (auto f : g.faces) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
      auto relabeled = make_graph(g.id + "-perm", V, faces);

      auto orig = automorphism_classes(g);
      auto moved = automorphism_classes(relabeled);
      // map the relabeled classes back through the inverse permutation
      std::set<std::set<int>> expected, got;
      for (const auto& cls : orig.classes) expected.insert({cls.begin(), cls.end()});
      for (const auto& cls : moved.classes) {
        std::set<int> back;
        for (int v = 1; v <= V; ++v) {
          if (std::find(cls.begin(), cls.end(), perm[v]) != cls.end()) back.insert(v);
        }
        got.insert(back);
      }
      INFO(g.id);
      CHECK(expected == got);
    }
  }
}

TEST_CASE("vertices in one orbit have identical neighbor degree multisets") {
  for (const auto& g : builtin_catalog()) {
    auto part = automorphism_classes(g);
    for (const auto& cls : part.classes) {
      std::vector<int> reference;
      for (int v : cls) {
        std::vector<int> degs;
        for (int w : g.adjacency[v]) degs.push_back(g.degree(w));
        std::sort(degs.begin(), degs.end());
        if (reference.empty()) {
          reference = degs;
        } else {
          CHECK(degs == reference);
        }
      }
    }
  }
}

TEST_CASE("brute-force automorphism search refuses large graphs") {
  auto big = make_graph("big", 9, {});
  CHECK_THROWS_AS(automorphism_classes(big), std::invalid_argument);
}
