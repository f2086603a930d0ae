#include "causalkit/solve.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::vector<int> topological_order(const Graph& g) {
  std::vector<int> indegree(static_cast<std::size_t>(g.size()), 0);
  for (const auto& [p, c] : g.edges()) {
    (void)p;
    ++indegree[static_cast<std::size_t>(c)];
  }
  std::vector<int> order;
  std::vector<bool> placed(static_cast<std::size_t>(g.size()), false);
  while (static_cast<int>(order.size()) < g.size()) {
    int pick = -1;
    for (int i = 0; i < g.size(); ++i) {
      if (!placed[static_cast<std::size_t>(i)] && indegree[static_cast<std::size_t>(i)] == 0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) {
      throw std::runtime_error("cyclic causal structure: use solve_cyclic");
    }
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (int c : g.children(pick)) --indegree[static_cast<std::size_t>(c)];
  }
  return order;
}

std::vector<Variable> node_variables(const Graph& g) {
  std::vector<Variable> vars;
  vars.reserve(static_cast<std::size_t>(g.size()));
  for (const auto& n : g.nodes()) vars.push_back({n.name, n.alphabet_size});
  return vars;
}

// Iterates mixed-radix counters over the given sizes.
bool next_counter(std::vector<int>& counter, const std::vector<int>& sizes) {
  for (std::size_t i = counter.size(); i-- > 0;) {
    if (++counter[i] < sizes[i]) return true;
    counter[i] = 0;
  }
  return false;
}

}  // namespace

std::string SolveReport::serialize() const {
  std::ostringstream out;
  out << "method=";
  if (method == SolveMethod::Acyclic) {
    out << "acyclic";
  } else {
    out << "split:";
    for (std::size_t i = 0; i < split_nodes.size(); ++i) {
      if (i) out << ',';
      out << split_nodes[i];
    }
  }
  out << " weight=" << format_fraction(postselection_weight) << '\n';
  out << distribution.serialize();
  return out.str();
}

SolveReport solve_acyclic(const CausalModel& m) {
  const Graph& g = m.graph();
  const auto order = topological_order(g);

  const auto& noise = m.noise();
  std::vector<int> noise_sizes;
  noise_sizes.reserve(noise.size());
  for (const auto& n : noise) noise_sizes.push_back(static_cast<int>(n.probabilities.size()));

  JointDistribution scaffold = JointDistribution::point_mass(
      node_variables(g), std::vector<int>(static_cast<std::size_t>(g.size()), 0));
  std::vector<Rational> table(scaffold.table_size(), Rational(0));

  std::vector<int> noise_values(noise.size(), 0);
  do {
    Rational weight = 1;
    for (std::size_t i = 0; i < noise.size(); ++i) {
      weight *= noise[i].probabilities[static_cast<std::size_t>(noise_values[i])];
    }
    if (weight == 0) continue;

    std::vector<int> values(static_cast<std::size_t>(g.size()), 0);
    auto value_of = [&](const std::string& name) -> int {
      for (std::size_t i = 0; i < noise.size(); ++i) {
        if (noise[i].name == name) return noise_values[i];
      }
      return values[static_cast<std::size_t>(g.index_of(name))];
    };
    for (int i : order) {
      values[static_cast<std::size_t>(i)] =
          m.mechanism(i).expr.evaluate(g.node(i).alphabet_size, value_of);
    }
    table[scaffold.index_of(values)] += weight;
  } while (next_counter(noise_values, noise_sizes));

  return SolveReport{JointDistribution(node_variables(g), std::move(table)),
                     SolveMethod::Acyclic,
                     {},
                     Rational(1)};
}

CausalModel split_node(const CausalModel& m, const std::string& node) {
  const Graph& g = m.graph();
  const int idx = g.index_of(node);
  if (g.node(idx).kind != NodeKind::Observed) {
    throw std::invalid_argument("split_node requires an observed node");
  }
  if (!(descendants_mask(g, idx) >> idx & 1)) {
    throw std::invalid_argument("node '" + node + "' lies on no directed cycle");
  }

  std::string copy = node + "'";
  while (g.contains(copy) || m.is_noise_name(copy)) copy += "'";
  std::string copy_noise = "E_" + copy;
  while (g.contains(copy_noise) || m.is_noise_name(copy_noise)) copy_noise += "'";

  std::vector<Node> nodes = g.nodes();
  nodes.push_back({copy, g.node(idx).alphabet_size, NodeKind::Observed});

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [p, c] : g.edges()) {
    // Outgoing edges move to the copy; incoming edges stay.
    if (p == idx) {
      edges.emplace_back(copy, g.node(c).name);
    } else {
      edges.emplace_back(g.node(p).name, g.node(c).name);
    }
  }

  std::vector<Mechanism> mechanisms;
  for (const auto& mech : m.mechanisms()) {
    Mechanism rewritten{mech.node, mech.expr, std::nullopt};
    rewritten.expr.rename(node, copy);
    mechanisms.push_back(std::move(rewritten));
  }
  mechanisms.push_back({copy, Expression::ref(copy_noise), std::nullopt});

  std::vector<NoiseSpec> noise = m.noise();
  noise.push_back({copy_noise,
                   std::vector<Rational>(static_cast<std::size_t>(g.node(idx).alphabet_size),
                                         Rational(1, g.node(idx).alphabet_size))});

  return CausalModel(Graph(std::move(nodes), edges), std::move(mechanisms), std::move(noise));
}

SolveReport solve_cyclic_with_splits(const CausalModel& m,
                                     const std::vector<std::string>& splits) {
  if (splits.empty()) {
    SolveReport report = solve_acyclic(m);
    return report;
  }
  CausalModel current = m;
  std::vector<std::pair<std::string, std::string>> pairs;  // (original, copy)
  for (const auto& name : splits) {
    const int before = current.graph().size();
    current = split_node(current, name);
    pairs.emplace_back(name, current.graph().node(before).name);
  }
  if (!is_acyclic(current.graph())) {
    throw std::invalid_argument("split set does not break every cycle");
  }

  SolveReport inner = solve_acyclic(current);
  const JointDistribution& joint = inner.distribution;

  Rational weight = 0;
  std::vector<Rational> kept(joint.table_size(), Rational(0));
  for (std::size_t idx = 0; idx < joint.table_size(); ++idx) {
    const Rational& pr = joint.probability_at(idx);
    if (pr == 0) continue;
    const auto values = joint.values_at(idx);
    bool agree = true;
    for (const auto& [orig, copy] : pairs) {
      if (values[static_cast<std::size_t>(joint.variable_index(orig))] !=
          values[static_cast<std::size_t>(joint.variable_index(copy))]) {
        agree = false;
        break;
      }
    }
    if (agree) {
      kept[idx] = pr;
      weight += pr;
    }
  }
  if (weight == 0) {
    throw std::runtime_error("no consistent solution: post-selection weight is zero");
  }
  for (auto& p : kept) p /= weight;

  JointDistribution conditioned(joint.variables(), std::move(kept));
  std::set<std::string> original_names;
  for (const auto& n : m.graph().nodes()) original_names.insert(n.name);
  JointDistribution out = marginal(conditioned, original_names);

  return SolveReport{std::move(out), SolveMethod::Split, splits, weight};
}

SolveReport solve_cyclic(const CausalModel& m) {
  const Graph& g = m.graph();
  if (is_acyclic(g)) return solve_acyclic(m);

  // Every directed cycle must contain an observed node.
  {
    std::vector<Node> latents;
    std::vector<std::pair<std::string, std::string>> latent_edges;
    for (const auto& n : g.nodes()) {
      if (n.kind == NodeKind::Latent) latents.push_back(n);
    }
    for (const auto& [p, c] : g.edges()) {
      if (g.node(p).kind == NodeKind::Latent && g.node(c).kind == NodeKind::Latent) {
        latent_edges.emplace_back(g.node(p).name, g.node(c).name);
      }
    }
    if (!is_acyclic(Graph(latents, latent_edges))) {
      throw std::invalid_argument("a directed cycle contains no observed node");
    }
  }

  const auto observed = g.observed_indices();
  // Minimum split set, ties broken by declaration order of the index lists.
  std::vector<std::vector<int>> candidates;
  const int n = static_cast<int>(observed.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) subset.push_back(observed[static_cast<std::size_t>(i)]);
    }
    candidates.push_back(std::move(subset));
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  for (const auto& subset : candidates) {
    std::uint64_t removed = 0;
    for (int i : subset) removed |= std::uint64_t{1} << i;
    // Acyclic after deleting the subset?
    std::vector<Node> rest;
    std::vector<std::pair<std::string, std::string>> rest_edges;
    for (int i = 0; i < g.size(); ++i) {
      if (!(removed >> i & 1)) rest.push_back(g.node(i));
    }
    for (const auto& [p, c] : g.edges()) {
      if (!(removed >> p & 1) && !(removed >> c & 1)) {
        rest_edges.emplace_back(g.node(p).name, g.node(c).name);
      }
    }
    if (!is_acyclic(Graph(rest, rest_edges))) continue;

    std::vector<std::string> names;
    for (int i : subset) names.push_back(g.node(i).name);
    return solve_cyclic_with_splits(m, names);
  }
  throw std::logic_error("unreachable: the full observed set breaks every cycle");
}

SolveReport solve(const CausalModel& m) {
  return is_acyclic(m.graph()) ? solve_acyclic(m) : solve_cyclic(m);
}

std::vector<Assignment> enumerate_consistent_assignments(const CausalModel& m,
                                                         const Assignment& noise) {
  for (const auto& spec : m.noise()) {
    const auto it = noise.find(spec.name);
    if (it == noise.end()) {
      throw std::invalid_argument("noise assignment is missing '" + spec.name + "'");
    }
    if (it->second < 0 || it->second >= static_cast<int>(spec.probabilities.size())) {
      throw std::invalid_argument("noise value out of range for '" + spec.name + "'");
    }
  }
  for (const auto& [name, value] : noise) {
    (void)value;
    if (!m.is_noise_name(name)) {
      throw std::invalid_argument("'" + name + "' is not an exogenous variable");
    }
  }

  const Graph& g = m.graph();
  std::vector<int> sizes;
  for (const auto& n : g.nodes()) sizes.push_back(n.alphabet_size);

  std::vector<Assignment> out;
  std::vector<int> values(static_cast<std::size_t>(g.size()), 0);
  do {
    auto value_of = [&](const std::string& name) -> int {
      const auto it = noise.find(name);
      if (it != noise.end()) return it->second;
      return values[static_cast<std::size_t>(g.index_of(name))];
    };
    bool consistent = true;
    for (int i = 0; i < g.size(); ++i) {
      if (values[static_cast<std::size_t>(i)] !=
          m.mechanism(i).expr.evaluate(g.node(i).alphabet_size, value_of)) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      Assignment a;
      for (int i = 0; i < g.size(); ++i) {
        a[g.node(i).name] = values[static_cast<std::size_t>(i)];
      }
      out.push_back(std::move(a));
    }
  } while (next_counter(values, sizes));
  return out;
}

namespace {

std::vector<IndependenceMismatch> sweep_triples(const Graph& g, const JointDistribution& p,
                                                bool want_dsep_failures) {
  const auto observed = g.observed_indices();
  const std::size_t n = observed.size();
  {
    // p must range over exactly the observed nodes.
    if (p.variables().size() != n) {
      throw std::invalid_argument("distribution variables must be the observed nodes");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& node = g.node(observed[i]);
      if (p.variables()[i].name != node.name ||
          p.variables()[i].alphabet_size != node.alphabet_size) {
        throw std::invalid_argument("distribution variables must be the observed nodes");
      }
    }
  }

  auto graph_mask = [&](std::uint64_t sub) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sub >> i & 1) mask |= std::uint64_t{1} << observed[i];
    }
    return mask;
  };
  auto names_of = [&](std::uint64_t sub) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      if (sub >> i & 1) names.insert(g.node(observed[i]).name);
    }
    return names;
  };

  std::vector<IndependenceMismatch> out;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t x = 1; x <= full; ++x) {
    for (std::uint64_t y = 1; y <= full; ++y) {
      if ((x & y) || y < x) continue;  // canonical unordered pair: x < y
      const std::uint64_t rest = full & ~(x | y);
      // Subsets of `rest` including the empty set.
      std::uint64_t z = 0;
      for (;;) {
        const bool dsep = d_separated_mask(g, graph_mask(x), graph_mask(y), graph_mask(z));
        const bool indep = is_independent(p, names_of(x), names_of(y), names_of(z));
        if (want_dsep_failures ? (dsep && !indep) : (!dsep && indep)) {
          out.push_back({names_of(x), names_of(y), names_of(z)});
        }
        if (z == rest) break;
        z = (z - rest) & rest;  // next subset of rest
      }
    }
  }
  return out;
}

}  // namespace

std::vector<IndependenceMismatch> check_dsep_property(const Graph& g,
                                                      const JointDistribution& p) {
  return sweep_triples(g, p, true);
}

std::vector<IndependenceMismatch> detect_fine_tuning(const Graph& g,
                                                     const JointDistribution& p) {
  return sweep_triples(g, p, false);
}

}  // namespace causalkit
