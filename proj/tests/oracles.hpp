#pragma once

// Brute-force reference implementations, deliberately structured differently
// from the library code they check.

#include "causalkit/model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracles {

using namespace causalkit;

// Descendant sets via Floyd-Warshall closure (the library relaxes edges).
inline std::vector<std::vector<bool>> reach_matrix(const Graph& g) {
  const int n = g.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [p, c] : g.edges()) reach[p][c] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

// Exhaustive path-blocking d-separation: enumerates every simple node
// sequence between the sets (including ones through other x/y members) and
// every edge orientation along it.
inline bool dsep_oracle(const Graph& g, const std::set<std::string>& xs,
                        const std::set<std::string>& ys,
                        const std::set<std::string>& zs) {
  const int n = g.size();
  std::vector<bool> in_z(n, false);
  for (const auto& name : zs) in_z[g.index_of(name)] = true;
  const auto reach = reach_matrix(g);

  auto z_free = [&](int w) {
    if (in_z[w]) return false;
    for (int d = 0; d < n; ++d) {
      if (reach[w][d] && in_z[d]) return false;
    }
    return true;
  };

  // Orientation: +1 = edge points toward the later node, -1 = backward.
  auto unblocked = [&](const std::vector<int>& seq, const std::vector<int>& orient) {
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
      const int w = seq[i];
      const bool arrives = orient[i - 1] == 1;
      const bool leaves = orient[i] == 1;
      if (arrives && !leaves) {
        if (z_free(w)) return false;  // collider with no conditioned descendant
      } else {
        if (in_z[w]) return false;
      }
    }
    return true;
  };

  std::vector<int> seq;
  std::vector<bool> used(n, false);
  bool connected = false;

  std::function<void(std::size_t, std::vector<int>&)> try_orient =
      [&](std::size_t at, std::vector<int>& orient) {
        if (connected) return;
        if (at + 1 == seq.size()) {
          if (unblocked(seq, orient)) connected = true;
          return;
        }
        const int a = seq[at], b = seq[at + 1];
        if (g.has_edge(a, b)) {
          orient.push_back(1);
          try_orient(at + 1, orient);
          orient.pop_back();
        }
        if (g.has_edge(b, a)) {
          orient.push_back(-1);
          try_orient(at + 1, orient);
          orient.pop_back();
        }
      };

  std::function<void(int, int)> grow = [&](int current, int goal) {
    if (connected) return;
    if (current == goal && seq.size() >= 2) {
      std::vector<int> orient;
      try_orient(0, orient);
      return;
    }
    if (current == goal) return;  // length-0 path is no path
    for (int next = 0; next < n; ++next) {
      if (used[next]) continue;
      if (!g.has_edge(current, next) && !g.has_edge(next, current)) continue;
      used[next] = true;
      seq.push_back(next);
      grow(next, goal);
      seq.pop_back();
      used[next] = false;
    }
  };

  for (const auto& xn : xs) {
    for (const auto& yn : ys) {
      const int x = g.index_of(xn), y = g.index_of(yn);
      std::fill(used.begin(), used.end(), false);
      seq = {x};
      used[x] = true;
      grow(x, y);
      if (connected) return false;
    }
  }
  return true;
}

// With nothing conditioned, separation should mean: no directed path either
// way and no (reflexive) common ancestor.
inline bool unconditional_separation_oracle(const Graph& g, const std::set<std::string>& xs,
                                            const std::set<std::string>& ys) {
  const auto reach = reach_matrix(g);
  const int n = g.size();
  std::vector<bool> anc_x(n, false), anc_y(n, false);
  for (const auto& name : xs) {
    const int x = g.index_of(name);
    anc_x[x] = true;
    for (int w = 0; w < n; ++w) {
      if (reach[w][x]) anc_x[w] = true;
    }
  }
  for (const auto& name : ys) {
    const int y = g.index_of(name);
    anc_y[y] = true;
    for (int w = 0; w < n; ++w) {
      if (reach[w][y]) anc_y[w] = true;
    }
  }
  for (int w = 0; w < n; ++w) {
    if (anc_x[w] && anc_y[w]) return false;
  }
  return true;
}

inline Graph random_graph(std::mt19937_64& rng, int n, double edge_prob) {
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"N" + std::to_string(i), 2, NodeKind::Observed});
  }
  std::vector<std::pair<std::string, std::string>> edges;
  std::bernoulli_distribution coin(edge_prob);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && coin(rng)) {
        edges.emplace_back(nodes[i].name, nodes[j].name);
      }
    }
  }
  return Graph(std::move(nodes), edges);
}

// Random acyclic model with explicit table mechanisms and small rational
// noise, suitable for exact comparison against the assignment-enumeration
// oracle.
inline CausalModel random_acyclic_model(std::mt19937_64& rng, int max_nodes = 5,
                                        int max_alphabet = 3) {
  std::uniform_int_distribution<int> node_count(2, max_nodes);
  std::uniform_int_distribution<int> alphabet(2, max_alphabet);
  std::bernoulli_distribution edge_coin(0.45);
  std::bernoulli_distribution noise_coin(0.5);
  std::uniform_int_distribution<int> weight(1, 4);

  const int n = node_count(rng);
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"N" + std::to_string(i), alphabet(rng), NodeKind::Observed});
  }
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::vector<int>> parents(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge_coin(rng)) {
        edges.emplace_back(nodes[i].name, nodes[j].name);
        parents[j].push_back(i);
      }
    }
  }

  std::vector<Mechanism> mechanisms;
  std::vector<NoiseSpec> noise;
  for (int i = 0; i < n; ++i) {
    const bool with_noise = parents[i].empty() || noise_coin(rng);
    std::vector<std::string> inputs;
    std::vector<int> sizes;
    for (int p : parents[i]) {
      inputs.push_back(nodes[p].name);
      sizes.push_back(nodes[p].alphabet_size);
    }
    std::string noise_name;
    if (with_noise) {
      noise_name = "E" + std::to_string(i);
      const int k = alphabet(rng);
      std::vector<Rational> probs;
      int total = 0;
      std::vector<int> weights;
      for (int v = 0; v < k; ++v) {
        weights.push_back(weight(rng));
        total += weights.back();
      }
      for (int v = 0; v < k; ++v) probs.emplace_back(weights[v], total);
      noise.push_back({noise_name, std::move(probs)});
      inputs.push_back(noise_name);
      sizes.push_back(k);
    }

    std::map<std::vector<int>, int> rows;
    std::vector<int> key(inputs.size(), 0);
    std::uniform_int_distribution<int> out_value(0, nodes[i].alphabet_size - 1);
    for (;;) {
      rows[key] = out_value(rng);
      std::size_t d = key.size();
      for (; d-- > 0;) {
        if (++key[d] < sizes[d]) break;
        key[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
    }
    mechanisms.push_back({nodes[i].name, Expression::table(inputs, std::move(rows)), {}});
  }
  return CausalModel(Graph(std::move(nodes), edges), std::move(mechanisms),
                     std::move(noise));
}

}  // namespace oracles
