#include "causalkit/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace causalkit {

namespace {

std::unordered_map<std::string, int> build_index(const std::vector<Node>& nodes) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!index.emplace(nodes[i].name, static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate node name '" + nodes[i].name + "'");
    }
  }
  return index;
}

}  // namespace

Graph::Graph(std::vector<Node> nodes,
             const std::vector<std::pair<std::string, std::string>>& edges)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() > 64) {
    throw std::invalid_argument("graphs are capped at 64 nodes");
  }
  const auto index = build_index(nodes_);
  for (const auto& n : nodes_) {
    if (n.alphabet_size < 1) {
      throw std::invalid_argument("node '" + n.name + "' needs alphabet_size >= 1");
    }
  }
  parents_.resize(nodes_.size());
  children_.resize(nodes_.size());
  for (const auto& [from, to] : edges) {
    const auto fit = index.find(from);
    const auto tit = index.find(to);
    if (fit == index.end()) throw std::invalid_argument("unknown node '" + from + "' in edge");
    if (tit == index.end()) throw std::invalid_argument("unknown node '" + to + "' in edge");
    if (fit->second == tit->second) {
      throw std::invalid_argument("self-loop on node '" + from + "'");
    }
    edges_.emplace_back(fit->second, tit->second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }
  for (const auto& [p, c] : edges_) {
    parents_[static_cast<std::size_t>(c)].push_back(p);
    children_[static_cast<std::size_t>(p)].push_back(c);
  }
}

bool Graph::contains(const std::string& name) const {
  for (const auto& n : nodes_) {
    if (n.name == name) return true;
  }
  return false;
}

int Graph::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown node '" + name + "'");
}

bool Graph::has_edge(int parent, int child) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(parent, child));
}

std::vector<int> Graph::observed_indices() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (nodes_[static_cast<std::size_t>(i)].kind == NodeKind::Observed) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Graph::observed_names() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::Observed) out.push_back(n.name);
  }
  return out;
}

std::uint64_t Graph::mask_of(const std::set<std::string>& names) const {
  std::uint64_t mask = 0;
  for (const auto& name : names) mask |= std::uint64_t{1} << index_of(name);
  return mask;
}

std::set<std::string> Graph::names_of(std::uint64_t mask) const {
  std::set<std::string> out;
  for (int i = 0; i < size(); ++i) {
    if (mask >> i & 1) out.insert(nodes_[static_cast<std::size_t>(i)].name);
  }
  return out;
}

bool directed_path_exists_mask(const Graph& g, std::uint64_t from, std::uint64_t to) {
  if (from == 0 || to == 0) throw std::invalid_argument("node sets must be nonempty");
  if (from & to) throw std::invalid_argument("node sets must be disjoint");
  std::uint64_t reached = from;
  for (;;) {
    std::uint64_t next = reached;
    for (const auto& [p, c] : g.edges()) {
      if (reached >> p & 1) next |= std::uint64_t{1} << c;
    }
    if (next == reached) break;
    reached = next;
  }
  return (reached & to) != 0;
}

bool directed_path_exists(const Graph& g, const std::set<std::string>& from,
                          const std::set<std::string>& to) {
  return directed_path_exists_mask(g, g.mask_of(from), g.mask_of(to));
}

std::uint64_t descendants_mask(const Graph& g, int node) {
  // Propagate reachability from the children, so `node` enters the set only
  // through a directed cycle back to itself.
  std::uint64_t reached = 0;
  for (int c : g.children(node)) reached |= std::uint64_t{1} << c;
  for (;;) {
    std::uint64_t next = reached;
    for (const auto& [p, c] : g.edges()) {
      if (reached >> p & 1) next |= std::uint64_t{1} << c;
    }
    if (next == reached) break;
    reached = next;
  }
  return reached;
}

std::set<std::string> descendants(const Graph& g, const std::string& node) {
  return g.names_of(descendants_mask(g, g.index_of(node)));
}

bool is_acyclic(const Graph& g) {
  for (int i = 0; i < g.size(); ++i) {
    if (descendants_mask(g, i) >> i & 1) return false;
  }
  return true;
}

namespace {

// DFS over simple paths between x-set and y-set, edges traversed in either
// orientation. A path is recorded the first time it reaches the y-set and is
// never extended through another x/y member; an unblocked witness among these
// exists iff one exists among all simple paths.
struct PathSearch {
  const Graph& g;
  std::uint64_t x, y, z;
  std::vector<std::uint64_t> desc;  // per node, descendants mask
  std::vector<int> nodes;           // current path
  std::vector<bool> forward;        // orientation of edge i -> i+1
  bool connected = false;

  bool blocked() const {
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      const int w = nodes[i];
      const bool in_from = forward[i - 1];  // edge arrives at w
      const bool out_to = forward[i];       // edge leaves w
      const bool collider = in_from && !out_to;
      if (collider) {
        const std::uint64_t w_and_desc =
            desc[static_cast<std::size_t>(w)] | (std::uint64_t{1} << w);
        if ((w_and_desc & z) == 0) return true;
      } else {
        if (z >> w & 1) return true;  // chain or fork through a conditioned node
      }
    }
    return false;
  }

  void extend(int at, std::uint64_t visited) {
    if (connected) return;
    for (int c : g.children(at)) step(c, true, visited);
    for (int p : g.parents(at)) step(p, false, visited);
  }

  void step(int to, bool fwd, std::uint64_t visited) {
    if (connected) return;
    if (visited >> to & 1) return;
    if (x >> to & 1) return;  // never re-enter the x-set
    nodes.push_back(to);
    forward.push_back(fwd);
    if (y >> to & 1) {
      if (!blocked()) connected = true;
    } else {
      extend(to, visited | (std::uint64_t{1} << to));
    }
    nodes.pop_back();
    forward.pop_back();
  }
};

}  // namespace

bool d_separated_mask(const Graph& g, std::uint64_t x, std::uint64_t y, std::uint64_t z) {
  if (x == 0 || y == 0) throw std::invalid_argument("x and y must be nonempty");
  if ((x & y) || (x & z) || (y & z)) {
    throw std::invalid_argument("d-separation arguments must be pairwise disjoint");
  }
  PathSearch search{g, x, y, z, {}, {}, {}, false};
  search.desc.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    search.desc[static_cast<std::size_t>(i)] = descendants_mask(g, i);
  }
  for (int s = 0; s < g.size() && !search.connected; ++s) {
    if (!(x >> s & 1)) continue;
    search.nodes = {s};
    search.forward.clear();
    search.extend(s, x | (std::uint64_t{1} << s));
  }
  return !search.connected;
}

bool d_separated(const Graph& g, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z) {
  return d_separated_mask(g, g.mask_of(x), g.mask_of(y), g.mask_of(z));
}

}  // namespace causalkit
