#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "causalkit/graph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <random>

using namespace causalkit;

namespace {

Graph otp_graph() { return fixtures::otp_model().graph(); }
Graph jam_graph() { return fixtures::jam_model().graph(); }
Graph loop_graph() { return fixtures::loop_model().graph(); }

}  // namespace

TEST_CASE("graph construction invariants") {
  CHECK_THROWS(Graph({{"A", 2, NodeKind::Observed}, {"A", 2, NodeKind::Observed}}, {}));
  CHECK_THROWS(Graph({{"A", 2, NodeKind::Observed}}, {{"A", "A"}}));
  CHECK_THROWS(Graph({{"A", 2, NodeKind::Observed}, {"B", 2, NodeKind::Observed}},
                     {{"A", "B"}, {"A", "B"}}));
  CHECK_THROWS(Graph({{"A", 2, NodeKind::Observed}}, {{"A", "B"}}));
  CHECK_THROWS(Graph({{"A", 0, NodeKind::Observed}}, {}));
}

TEST_CASE("directed_path_exists") {
  const Graph otp = otp_graph();
  CHECK(directed_path_exists(otp, {"A"}, {"B"}));
  CHECK_FALSE(directed_path_exists(otp, {"B"}, {"A", "C"}));
  CHECK(directed_path_exists(loop_graph(), {"B"}, {"A", "C"}));

  CHECK_THROWS(directed_path_exists(otp, {"A"}, {"A", "B"}));
  CHECK_THROWS(directed_path_exists(otp, {"X"}, {"B"}));
  CHECK_THROWS(directed_path_exists(otp, {}, {"B"}));
}

TEST_CASE("descendants") {
  const Graph jam = jam_graph();
  CHECK(descendants(jam, "Lambda") == std::set<std::string>{"A", "C"});
  CHECK(descendants(loop_graph(), "B") == std::set<std::string>{"B", "C"});

  const Graph single({{"N", 2, NodeKind::Observed}}, {});
  CHECK(descendants(single, "N").empty());
  CHECK_THROWS(descendants(single, "M"));
}

TEST_CASE("is_acyclic") {
  CHECK(is_acyclic(otp_graph()));
  CHECK_FALSE(is_acyclic(loop_graph()));
  CHECK(is_acyclic(Graph({}, {})));

  const Graph two_cycle({{"X", 2, NodeKind::Observed}, {"Y", 2, NodeKind::Observed}},
                        {{"X", "Y"}, {"Y", "X"}});
  CHECK_FALSE(is_acyclic(two_cycle));
}

TEST_CASE("d_separated on the jamming graph") {
  const Graph jam = jam_graph();
  // B -> C <- Lambda -> A: the collider at C blocks, conditioning opens it.
  CHECK(d_separated(jam, {"B"}, {"A"}, {}));
  CHECK_FALSE(d_separated(jam, {"B"}, {"A"}, {"C"}));

  const Graph isolated({{"P", 2, NodeKind::Observed}, {"Q", 2, NodeKind::Observed}}, {});
  CHECK(d_separated(isolated, {"P"}, {"Q"}, {}));

  CHECK_THROWS(d_separated(jam, {"B"}, {"B"}, {}));
  CHECK_THROWS(d_separated(jam, {"B"}, {"A"}, {"B"}));
  CHECK_THROWS(d_separated(jam, {"nope"}, {"A"}, {}));
}

TEST_CASE("conditioning on a collider's descendant also opens the path") {
  // B -> C <- L, C -> D: D is a descendant of the collider.
  const Graph g({{"L", 2, NodeKind::Latent},
                 {"B", 2, NodeKind::Observed},
                 {"C", 2, NodeKind::Observed},
                 {"D", 2, NodeKind::Observed}},
                {{"B", "C"}, {"L", "C"}, {"C", "D"}});
  CHECK(d_separated(g, {"B"}, {"L"}, {}));
  CHECK_FALSE(d_separated(g, {"B"}, {"L"}, {"D"}));
}

TEST_CASE("d-separation agrees with the path-blocking oracle, exhaustively to four nodes") {
  for (int n = 2; n <= 4; ++n) {
    const int slots = n * (n - 1);
    std::vector<std::pair<int, int>> all_edges;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) all_edges.emplace_back(i, j);
      }
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
      std::vector<Node> nodes;
      for (int i = 0; i < n; ++i) {
        nodes.push_back({"N" + std::to_string(i), 2, NodeKind::Observed});
      }
      std::vector<std::pair<std::string, std::string>> edges;
      for (int s = 0; s < slots; ++s) {
        if (mask >> s & 1) {
          edges.emplace_back("N" + std::to_string(all_edges[s].first),
                             "N" + std::to_string(all_edges[s].second));
        }
      }
      const Graph g(nodes, edges);
      for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
          std::vector<int> rest;
          for (int w = 0; w < n; ++w) {
            if (w != x && w != y) rest.push_back(w);
          }
          for (std::uint64_t zmask = 0; zmask < (std::uint64_t{1} << rest.size());
               ++zmask) {
            std::set<std::string> xs{"N" + std::to_string(x)};
            std::set<std::string> ys{"N" + std::to_string(y)};
            std::set<std::string> zs;
            for (std::size_t r = 0; r < rest.size(); ++r) {
              if (zmask >> r & 1) zs.insert("N" + std::to_string(rest[r]));
            }
            const bool expected = oracles::dsep_oracle(g, xs, ys, zs);
            REQUIRE(d_separated(g, xs, ys, zs) == expected);
            if (zs.empty()) {
              REQUIRE(expected == oracles::unconditional_separation_oracle(g, xs, ys));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("d-separation agrees with the oracle on 200 random graphs, density swept") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;  // up to 6 nodes
    const double density = 0.05 + 0.9 * (trial / 199.0);
    const Graph g = oracles::random_graph(rng, n, density);

    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<std::string> xs{g.node(pick(rng)).name};
    std::set<std::string> ys, zs;
    while (ys.empty()) {
      const auto& name = g.node(pick(rng)).name;
      if (!xs.count(name)) ys.insert(name);
    }
    for (int i = 0; i < n; ++i) {
      const auto& name = g.node(i).name;
      if (!xs.count(name) && !ys.count(name) && rng() % 3 == 0) zs.insert(name);
    }
    CAPTURE(trial);
    REQUIRE(d_separated(g, xs, ys, zs) == oracles::dsep_oracle(g, xs, ys, zs));
    if (zs.empty()) {
      REQUIRE(d_separated(g, xs, ys, zs) ==
              oracles::unconditional_separation_oracle(g, xs, ys));
    }
  }
}

TEST_CASE("unconditional separation = no directed path and no common ancestor, to 7 nodes") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 6;  // up to 7 nodes
    const Graph g = oracles::random_graph(rng, n, 0.1 + 0.8 * (trial / 299.0));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int x = pick(rng);
    int y = pick(rng);
    while (y == x) y = pick(rng);
    std::set<std::string> xs{g.node(x).name}, ys{g.node(y).name};
    CHECK(d_separated(g, xs, ys, {}) ==
          oracles::unconditional_separation_oracle(g, xs, ys));
  }
}

TEST_CASE("d_separated is symmetric in X and Y") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 4;
    const Graph g = oracles::random_graph(rng, n, 0.4);
    std::set<std::string> xs{g.node(0).name}, ys{g.node(1).name}, zs;
    if (n > 3 && trial % 2) zs.insert(g.node(3).name);
    CHECK(d_separated(g, xs, ys, zs) == d_separated(g, ys, xs, zs));
  }
}

TEST_CASE("adding an edge never creates a new d-separation") {
  std::mt19937_64 rng(4242);
  int exercised = 0;
  for (int trial = 0; trial < 300 || exercised < 60; ++trial) {
    const int n = 3 + trial % 4;
    const Graph g = oracles::random_graph(rng, n, 0.3);
    std::set<std::string> xs{g.node(0).name}, ys{g.node(1).name}, zs;
    if (n > 2 && trial % 2) zs.insert(g.node(2).name);
    if (d_separated(g, xs, ys, zs)) continue;  // want a d-connected triple

    // Add one absent edge and recheck.
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : g.edges()) {
      edges.emplace_back(g.node(p).name, g.node(c).name);
    }
    bool added = false;
    for (int i = 0; i < n && !added; ++i) {
      for (int j = 0; j < n && !added; ++j) {
        if (i != j && !g.has_edge(i, j)) {
          edges.emplace_back(g.node(i).name, g.node(j).name);
          added = true;
        }
      }
    }
    if (!added) continue;
    const Graph bigger(g.nodes(), edges);
    CHECK_FALSE(d_separated(bigger, xs, ys, zs));
    ++exercised;
    if (trial > 2000) break;
  }
  CHECK(exercised >= 60);
}

TEST_CASE("descendants is a transitive closure") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 80; ++trial) {
    const Graph g = oracles::random_graph(rng, 3 + trial % 5, 0.35);
    for (int x = 0; x < g.size(); ++x) {
      const auto dx = descendants(g, g.node(x).name);
      for (const auto& yname : dx) {
        for (const auto& zname : descendants(g, yname)) {
          CHECK(dx.count(zname));
        }
      }
    }
  }
}
