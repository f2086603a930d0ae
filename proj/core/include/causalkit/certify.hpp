#pragma once

#include "causalkit/intervention.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causalkit {

// "At least one directed path among these pairs must exist" in any causal
// structure reproducing the affects relations.
struct PathConstraint {
  std::vector<std::pair<std::string, std::string>> any_of;
  std::string rule;  // which inference produced it

  bool operator==(const PathConstraint&) const = default;
};

// Path constraints implied by an affects set, using only two rules:
//  - a holding first-order S->T forces a directed path from some s to some t;
//  - holds({x} u Z -> T) together with not holds(Z -> T) forces a path from x
//    to some t (the derivable higher-order relation x->T given do(Z)).
// Duplicates and subsumed (weaker superset) disjunctions are removed.
std::vector<PathConstraint> derive_path_constraints(const AffectsSet& a);

// Higher-order relations derivable from the first-order verdicts by the
// premise pattern above, as (x, target, conditioning) triples.
struct DerivedHigherOrder {
  std::string source;
  std::vector<std::string> target;
  std::vector<std::string> given_do;
};
std::vector<DerivedHigherOrder> derive_higher_order(const AffectsSet& a);

// Exhaustive search over total orders of `nodes` (capped) for one in which
// every disjunction has a pair (u,v) with u before v. Such an order is a DAG
// witness: the transitive tournament realizes every required ancestry.
std::optional<std::vector<std::string>> satisfiable_order(
    const std::vector<PathConstraint>& constraints, const std::vector<std::string>& nodes,
    int max_nodes = 8);

enum class CycleVerdict { CyclicCertified, DagConsistent };

struct RefutedOrder {
  std::vector<std::string> order;
  int violated_constraint = 0;  // index into constraints
};

struct CycleCertificate {
  CycleVerdict verdict = CycleVerdict::DagConsistent;
  std::vector<PathConstraint> constraints;
  std::vector<std::string> witness_order;   // DagConsistent evidence
  std::vector<RefutedOrder> refutation;     // CyclicCertified evidence

  std::string serialize() const;
};

// Certifies from the affects relations alone whether any acyclic causal
// structure could produce them.
CycleCertificate certify_cycle(const AffectsSet& a, int max_nodes = 8);

}  // namespace causalkit
