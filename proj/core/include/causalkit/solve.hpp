#pragma once

#include "causalkit/model.hpp"

#include <string>
#include <vector>

namespace causalkit {

enum class SolveMethod { Acyclic, Split };

struct SolveReport {
  JointDistribution distribution;  // over all graph nodes, declaration order
  SolveMethod method = SolveMethod::Acyclic;
  std::vector<std::string> split_nodes;
  Rational postselection_weight = 1;

  // Header line `method=... weight=num/den`, then the support table.
  std::string serialize() const;
};

// Exact pushforward of the noise product through the mechanisms in
// topological order. Throws if the graph has a directed cycle.
SolveReport solve_acyclic(const CausalModel& m);

// Splits observed node n into n (incoming edges only) and a fresh copy n'
// that carries the outgoing edges and is driven by uniform noise. Requires n
// to lie on a directed cycle.
CausalModel split_node(const CausalModel& m, const std::string& node);

// Cycle-free models delegate to solve_acyclic. Otherwise breaks every cycle
// by splitting a minimum set of observed nodes (ties by declaration order),
// solves the acyclic result, post-selects each split node equalling its copy
// and renormalizes. Throws when some cycle has no observed node or the
// post-selection weight is zero.
SolveReport solve_cyclic(const CausalModel& m);

// Test hook: same procedure with an explicit split set.
SolveReport solve_cyclic_with_splits(const CausalModel& m,
                                     const std::vector<std::string>& splits);

// Dispatch on cyclicity.
SolveReport solve(const CausalModel& m);

// All full assignments over the graph nodes satisfying every mechanism under
// the given noise values; `noise` must cover exactly the exogenous variables.
std::vector<Assignment> enumerate_consistent_assignments(const CausalModel& m,
                                                         const Assignment& noise);

struct IndependenceMismatch {
  std::set<std::string> x, y, z;
};

// Triples (X,Y,Z) of disjoint observed subsets that are d-separated in g yet
// dependent in p. X/Y pairs are reported once, in canonical order.
std::vector<IndependenceMismatch> check_dsep_property(const Graph& g,
                                                      const JointDistribution& p);

// Triples where independence holds in p but d-separation fails in g.
// An empty result means p is faithful to g.
std::vector<IndependenceMismatch> detect_fine_tuning(const Graph& g,
                                                     const JointDistribution& p);

}  // namespace causalkit
