#pragma once

#include "causalkit/solve.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causalkit {

// A do-intervention on observed nodes. Without fixed values the targets
// become free inputs, modelled as fresh uniform exogenous drivers.
struct InterventionTarget {
  std::set<std::string> nodes;
  std::optional<Assignment> values;  // keys must equal `nodes` when present
};

// Removes all incoming edges of each target and replaces its mechanism by a
// constant (fixed value) or a fresh uniform noise driver (free input).
// All other mechanisms are preserved.
CausalModel apply_do(const CausalModel& m, const InterventionTarget& t);

// Solves the post-intervention model and returns the distribution over the
// observed nodes outside the target set.
JointDistribution post_intervention_distribution(const CausalModel& m,
                                                 const InterventionTarget& t);

struct AffectsWitness {
  Assignment source_values;
  Assignment do_values;  // empty for first-order relations
  Assignment target_values;
  Rational lhs;  // intervened probability of the target value
  Rational rhs;  // baseline probability of the target value
};

struct AffectsRelation {
  std::vector<std::string> source;    // declaration order
  std::vector<std::string> target;    // declaration order
  std::vector<std::string> given_do;  // empty for first-order
  bool holds = false;
  std::optional<AffectsWitness> witness;

  bool first_order() const { return given_do.empty(); }
  std::string render() const;  // `SRC->TGT[|do(Z)] holds=..[ witness=..]`
};

// X affects Y: some do(X=x) shifts some target probability away from the
// observational P(Y).
AffectsRelation affects(const CausalModel& m, const std::set<std::string>& x,
                        const std::set<std::string>& y);

// X affects Y given do(Z): some do(X=x, Z=z) shifts Y relative to do(Z=z)
// alone. With Z empty this reduces exactly to `affects`.
AffectsRelation affects_given_do(const CausalModel& m, const std::set<std::string>& x,
                                 const std::set<std::string>& y,
                                 const std::set<std::string>& z);

struct AffectsSet {
  std::string model_id;
  int max_size = 2;
  std::vector<std::string> observed;  // declaration order
  std::vector<AffectsRelation> relations;

  const AffectsRelation* find(const std::vector<std::string>& source,
                              const std::vector<std::string>& target,
                              const std::vector<std::string>& given_do) const;
  std::string serialize() const;
};

// Evaluates every disjoint ordered pair of observed subsets up to max_size,
// then every disjoint triple with nonempty conditioning set within the same
// bound. Deterministic enumeration order: subsets by (size, declaration lex).
AffectsSet enumerate_affects(const CausalModel& m, int max_size,
                             const std::string& model_id = "model");

enum class Experiment { E1, E2 };

struct ProtocolSetting {
  Assignment intervention;        // the swept do-assignment
  JointDistribution empirical;    // sampled counts / n over the recorded nodes
  Rational xor_match_fraction;    // fraction of samples with B = A (+) C
};

struct SimulationReport {
  Experiment experiment = Experiment::E1;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<ProtocolSetting> settings;
  std::string serialize() const;
};

// E1 sweeps do(A,C) and records B; E2 sweeps do(B) and records (A,C).
// Sampling is counter-based on (seed, setting index, sample index), so the
// result is reproducible under any parallel partitioning.
SimulationReport simulate_protocol(const CausalModel& m, Experiment experiment,
                                   int samples, std::uint64_t seed);

}  // namespace causalkit
