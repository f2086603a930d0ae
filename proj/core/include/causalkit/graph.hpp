#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causalkit {

enum class NodeKind { Observed, Latent };

struct Node {
  std::string name;
  int alphabet_size = 2;  // values are 0 .. alphabet_size-1
  NodeKind kind = NodeKind::Observed;
};

// Directed graph over named finite-alphabet nodes. Cycles are allowed;
// self-loops and duplicate edges are not. Immutable after construction,
// safe to share between workers.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<Node> nodes,
        const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  bool contains(const std::string& name) const;
  int index_of(const std::string& name) const;  // throws on unknown name

  // Edges as (parent index, child index), sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int parent, int child) const;
  const std::vector<int>& parents(int i) const { return parents_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& children(int i) const { return children_.at(static_cast<std::size_t>(i)); }

  std::vector<int> observed_indices() const;
  std::vector<std::string> observed_names() const;

  // Bit i of the mask is node i. The graph is capped at 64 nodes.
  std::uint64_t mask_of(const std::set<std::string>& names) const;
  std::set<std::string> names_of(std::uint64_t mask) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

// True iff a directed path leads from some node of `from` to some node of `to`.
bool directed_path_exists(const Graph& g, const std::set<std::string>& from,
                          const std::set<std::string>& to);

// Nodes reachable from `node` by nonempty directed paths. Contains `node`
// itself exactly when it lies on a directed cycle.
std::set<std::string> descendants(const Graph& g, const std::string& node);

bool is_acyclic(const Graph& g);

// Path-blocking d-separation over simple paths; valid for cyclic graphs too.
bool d_separated(const Graph& g, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z);

// Mask variants used by the exhaustive sweeps.
bool directed_path_exists_mask(const Graph& g, std::uint64_t from, std::uint64_t to);
std::uint64_t descendants_mask(const Graph& g, int node);
bool d_separated_mask(const Graph& g, std::uint64_t x, std::uint64_t y, std::uint64_t z);

}  // namespace causalkit
