#pragma once

#include "causalkit/intervention.hpp"
#include "causalkit/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalkit {

// Event in (d+1)-Minkowski space-time with c = 1 and exact rational
// coordinates. Norm comparisons use squared distances, so nothing here ever
// leaves the rationals.
struct SpacetimePoint {
  Rational t;
  std::vector<Rational> x;

  int dim() const { return static_cast<int>(x.size()); }
  bool operator==(const SpacetimePoint&) const = default;
  std::string render() const;  // "(t,x1,...,xd)"
};

// Closed-cone causal order: q is in the future of p iff the time difference
// is nonnegative and dominates the spatial distance (light-like included).
bool causally_precedes(const SpacetimePoint& p, const SpacetimePoint& q);

// q lies in the intersection of the futures of every point of S.
bool joint_future_membership(const std::vector<SpacetimePoint>& s,
                             const SpacetimePoint& q);

// Apex of the joint future in (1+1) dimensions, via light-cone coordinates
// u = t-x, v = t+x (componentwise maxima). Throws for d >= 2: no
// frame-independent earliest location exists there.
SpacetimePoint earliest_joint_point(const std::vector<SpacetimePoint>& s, int dim);

enum class Containment { Contained, NotContained, Unknown };

struct ContainmentVerdict {
  Containment kind = Containment::Unknown;
  std::optional<SpacetimePoint> witness;  // in the region, outside the target future
};

// Decides whether the joint future of T is contained in the future of a
// point. Exact for d = 1 (light-cone coordinates) and for |T| = 1 (cone
// nesting). Otherwise: contained whenever the point precedes some member of
// T; else a falsification search over precomputed joint-future samples
// returns a verified escape witness or Unknown within the budget.
class JointFutureProbe {
 public:
  explicit JointFutureProbe(std::vector<SpacetimePoint> t, int budget = 256);

  ContainmentVerdict future_contains(const SpacetimePoint& s) const;
  const std::vector<SpacetimePoint>& witness_candidates() const { return candidates_; }
  int dim() const { return dim_; }

 private:
  std::vector<SpacetimePoint> t_;
  int dim_ = 1;
  Rational max_u_, max_v_;  // d = 1 only
  std::vector<SpacetimePoint> candidates_;
};

ContainmentVerdict region_in_future(const std::vector<SpacetimePoint>& t,
                                    const SpacetimePoint& s, int dim, int budget = 256);

// Whether some point B satisfies future(B) = future(A) n future(C):
// always in d = 1, only for A = C when d >= 2.
bool cone_equality_feasible(const SpacetimePoint& a, const SpacetimePoint& c, int dim);

struct Embedding {
  int dim = 1;
  std::map<std::string, SpacetimePoint> locations;
};

enum class EmbeddingPolicy { Conservative, Reduced };

struct EmbeddingViolation {
  std::string relation;  // "S->T" or "X->Y|do(Z)"
  std::string kind;      // not-in-joint-future | joint-future-escapes | undecided
  std::optional<SpacetimePoint> witness;
};

struct EmbeddingReport {
  bool compatible = false;
  std::vector<EmbeddingViolation> violations;
  std::string serialize() const;
};

// For every holding first-order S->T the joint future of T's locations must
// sit inside the future of each source location. The Reduced policy drops
// S->T when a proper subset of S already affects T and instead constrains
// the derivable higher-order relations. Locations must be pairwise distinct
// unless allow_coincident is set.
EmbeddingReport check_embedding(const AffectsSet& a, const Embedding& e,
                                EmbeddingPolicy policy = EmbeddingPolicy::Conservative,
                                bool allow_coincident = false, int budget = 256);

}  // namespace causalkit
