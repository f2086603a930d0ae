#include "causalkit/spacetime.hpp"

#include "causalkit/certify.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

void require_same_dim(const SpacetimePoint& p, const SpacetimePoint& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("dimension mismatch");
}

Rational squared_spatial_distance(const SpacetimePoint& p, const SpacetimePoint& q) {
  Rational sum = 0;
  for (int i = 0; i < p.dim(); ++i) {
    const Rational d = q.x[static_cast<std::size_t>(i)] - p.x[static_cast<std::size_t>(i)];
    sum += d * d;
  }
  return sum;
}

Rational one_norm_distance(const SpacetimePoint& p, const SpacetimePoint& q) {
  Rational sum = 0;
  for (int i = 0; i < p.dim(); ++i) {
    const Rational d = q.x[static_cast<std::size_t>(i)] - p.x[static_cast<std::size_t>(i)];
    sum += d < 0 ? -d : d;
  }
  return sum;
}

Rational light_cone_u(const SpacetimePoint& p) { return p.t - p.x[0]; }
Rational light_cone_v(const SpacetimePoint& p) { return p.t + p.x[0]; }

}  // namespace

std::string SpacetimePoint::render() const {
  std::ostringstream out;
  out << '(' << format_number(t);
  for (const auto& c : x) out << ',' << format_number(c);
  out << ')';
  return out.str();
}

bool causally_precedes(const SpacetimePoint& p, const SpacetimePoint& q) {
  require_same_dim(p, q);
  const Rational dt = q.t - p.t;
  if (dt < 0) return false;
  return dt * dt >= squared_spatial_distance(p, q);
}

bool joint_future_membership(const std::vector<SpacetimePoint>& s,
                             const SpacetimePoint& q) {
  if (s.empty()) throw std::invalid_argument("empty point set");
  for (const auto& p : s) {
    if (!causally_precedes(p, q)) return false;
  }
  return true;
}

SpacetimePoint earliest_joint_point(const std::vector<SpacetimePoint>& s, int dim) {
  if (s.empty()) throw std::invalid_argument("empty point set");
  if (dim != 1) {
    throw std::invalid_argument(
        "no frame-independent earliest location in the joint future for d >= 2");
  }
  for (const auto& p : s) {
    if (p.dim() != 1) throw std::invalid_argument("dimension mismatch");
  }
  Rational u = light_cone_u(s.front());
  Rational v = light_cone_v(s.front());
  for (const auto& p : s) {
    u = std::max(u, light_cone_u(p));
    v = std::max(v, light_cone_v(p));
  }
  return SpacetimePoint{(u + v) / 2, {(v - u) / 2}};
}

JointFutureProbe::JointFutureProbe(std::vector<SpacetimePoint> t, int budget)
    : t_(std::move(t)) {
  if (t_.empty()) throw std::invalid_argument("empty point set");
  dim_ = t_.front().dim();
  if (dim_ < 1) throw std::invalid_argument("spatial dimension must be >= 1");
  for (const auto& p : t_) {
    if (p.dim() != dim_) throw std::invalid_argument("dimension mismatch");
  }

  if (dim_ == 1) {
    max_u_ = light_cone_u(t_.front());
    max_v_ = light_cone_v(t_.front());
    for (const auto& p : t_) {
      max_u_ = std::max(max_u_, light_cone_u(p));
      max_v_ = std::max(max_v_, light_cone_v(p));
    }
    return;
  }
  if (t_.size() == 1) return;

  // Sample the joint future near its lower boundary: pick spatial locations
  // fanning out from the centroid, then binary-search the smallest certified
  // entry time. Far samples come first; they escape a tested cone fastest.
  const std::size_t d = static_cast<std::size_t>(dim_);
  SpacetimePoint centroid{0, std::vector<Rational>(d, Rational(0))};
  for (const auto& p : t_) {
    centroid.t += p.t;
    for (std::size_t i = 0; i < d; ++i) centroid.x[i] += p.x[i];
  }
  centroid.t /= static_cast<int>(t_.size());
  for (auto& c : centroid.x) c /= static_cast<int>(t_.size());

  Rational spread = 1;
  for (const auto& p : t_) {
    spread = std::max(spread, one_norm_distance(centroid, p));
    const Rational dt = p.t - centroid.t;
    spread = std::max(spread, dt < 0 ? -dt : dt);
  }

  std::vector<std::vector<Rational>> directions;
  for (std::size_t i = 0; i < d; ++i) {
    for (int sign : {1, -1}) {
      std::vector<Rational> e(d, Rational(0));
      e[i] = sign;
      directions.push_back(std::move(e));
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          std::vector<Rational> e(d, Rational(0));
          e[i] = si;
          e[j] = sj;
          directions.push_back(std::move(e));
        }
      }
    }
  }
  // The axis between each pair of T points and its negation.
  for (std::size_t a = 0; a < t_.size(); ++a) {
    for (std::size_t b = a + 1; b < t_.size(); ++b) {
      std::vector<Rational> e(d), f(d);
      bool nonzero = false;
      for (std::size_t i = 0; i < d; ++i) {
        e[i] = t_[b].x[i] - t_[a].x[i];
        f[i] = -e[i];
        if (e[i] != 0) nonzero = true;
      }
      if (nonzero) {
        directions.push_back(std::move(e));
        directions.push_back(std::move(f));
      }
    }
  }

  auto in_joint_future = [&](const SpacetimePoint& q) {
    for (const auto& p : t_) {
      if (!causally_precedes(p, q)) return false;
    }
    return true;
  };

  // Members of T lying in the joint future are themselves boundary samples;
  // they settle nested-cone configurations immediately.
  for (const auto& p : t_) {
    if (in_joint_future(p)) candidates_.push_back(p);
  }

  std::vector<Rational> radii;
  for (int k = 24; k >= -4; k -= 2) {
    radii.push_back(k >= 0 ? Rational(spread * (BigInt(1) << k))
                           : Rational(spread / (BigInt(1) << -k)));
  }

  const Rational step = spread / (BigInt(1) << 28);
  for (const auto& r : radii) {
    for (const auto& dir : directions) {
      if (static_cast<int>(candidates_.size()) >= budget) return;
      SpacetimePoint q{0, centroid.x};
      for (std::size_t i = 0; i < d; ++i) q.x[i] += r * dir[i];

      // Certified upper entry time via the 1-norm bound, lower bound below
      // every cone tip.
      Rational hi = t_.front().t + one_norm_distance(t_.front(), q);
      Rational lo = t_.front().t;
      for (const auto& p : t_) {
        hi = std::max(hi, p.t + one_norm_distance(p, q));
        lo = std::min(lo, p.t);
      }
      q.t = hi;
      if (!in_joint_future(q)) continue;  // 1-norm bound always certifies; safety
      for (int iter = 0; iter < 72; ++iter) {
        const Rational mid = (lo + hi) / 2;
        q.t = mid;
        if (in_joint_future(q)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      // Snap upward onto a coarse grid so later comparisons stay cheap;
      // raising t never leaves the joint future.
      const Rational ratio = hi / step;
      const BigInt ticks = numerator(ratio) / denominator(ratio);  // truncation
      const Rational t_snapped = (Rational(ticks) + 1) * step;
      q.t = t_snapped >= hi ? t_snapped : hi;
      if (in_joint_future(q)) candidates_.push_back(q);
    }
  }
}

ContainmentVerdict JointFutureProbe::future_contains(const SpacetimePoint& s) const {
  if (s.dim() != dim_) throw std::invalid_argument("dimension mismatch");
  if (dim_ == 1) {
    if (light_cone_u(s) <= max_u_ && light_cone_v(s) <= max_v_) {
      return {Containment::Contained, std::nullopt};
    }
    return {Containment::NotContained,
            SpacetimePoint{(max_u_ + max_v_) / 2, {(max_v_ - max_u_) / 2}}};
  }
  if (t_.size() == 1) {
    if (causally_precedes(s, t_.front())) return {Containment::Contained, std::nullopt};
    return {Containment::NotContained, t_.front()};
  }
  // s before any member of T nests the whole joint future inside F(s).
  for (const auto& p : t_) {
    if (causally_precedes(s, p)) return {Containment::Contained, std::nullopt};
  }
  for (const auto& q : candidates_) {
    if (!causally_precedes(s, q)) return {Containment::NotContained, q};
  }
  return {Containment::Unknown, std::nullopt};
}

ContainmentVerdict region_in_future(const std::vector<SpacetimePoint>& t,
                                    const SpacetimePoint& s, int dim, int budget) {
  for (const auto& p : t) {
    if (p.dim() != dim) throw std::invalid_argument("dimension mismatch");
  }
  return JointFutureProbe(t, budget).future_contains(s);
}

bool cone_equality_feasible(const SpacetimePoint& a, const SpacetimePoint& c, int dim) {
  if (a.dim() != dim || c.dim() != dim) throw std::invalid_argument("dimension mismatch");
  if (dim == 1) return true;  // the earliest joint point's cone is the intersection
  return a == c;
}

std::string EmbeddingReport::serialize() const {
  if (compatible) return "compatible\n";
  std::ostringstream out;
  for (const auto& v : violations) {
    out << "relation=" << v.relation << " kind=" << v.kind;
    if (v.witness) out << " witness=" << v.witness->render();
    out << '\n';
  }
  return out.str();
}

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

}  // namespace

EmbeddingReport check_embedding(const AffectsSet& a, const Embedding& e,
                                EmbeddingPolicy policy, bool allow_coincident,
                                int budget) {
  for (const auto& name : a.observed) {
    if (!e.locations.count(name)) {
      throw std::invalid_argument("embedding is missing a location for '" + name + "'");
    }
  }
  for (const auto& [name, p] : e.locations) {
    if (p.dim() != e.dim) {
      throw std::invalid_argument("location of '" + name + "' has the wrong dimension");
    }
  }
  if (!allow_coincident) {
    for (auto i = e.locations.begin(); i != e.locations.end(); ++i) {
      for (auto j = std::next(i); j != e.locations.end(); ++j) {
        if (i->second == j->second) {
          throw std::invalid_argument("coincident locations for '" + i->first + "' and '" +
                                      j->first + "'");
        }
      }
    }
  }

  EmbeddingReport report;
  auto points_of = [&](const std::vector<std::string>& names) {
    std::vector<SpacetimePoint> pts;
    for (const auto& n : names) pts.push_back(e.locations.at(n));
    return pts;
  };
  auto apply_constraint = [&](const std::string& label,
                              const std::vector<std::string>& target,
                              const std::vector<std::string>& sources) {
    const JointFutureProbe probe(points_of(target), budget);
    for (const auto& s : sources) {
      const auto verdict = probe.future_contains(e.locations.at(s));
      if (verdict.kind == Containment::Contained) continue;
      EmbeddingViolation v;
      v.relation = label;
      v.kind = verdict.kind == Containment::Unknown
                   ? "undecided"
                   : (target.size() == 1 ? "not-in-joint-future" : "joint-future-escapes");
      v.witness = verdict.witness;
      report.violations.push_back(std::move(v));
    }
  };

  for (const auto& rel : a.relations) {
    if (!rel.first_order() || !rel.holds) continue;
    if (policy == EmbeddingPolicy::Reduced && rel.source.size() > 1) {
      // Skip when a proper subset of the source already affects the target.
      bool dominated = false;
      for (const auto& other : a.relations) {
        if (!other.first_order() || !other.holds || other.target != rel.target) continue;
        if (other.source.size() >= rel.source.size()) continue;
        bool subset = true;
        for (const auto& s : other.source) {
          if (std::find(rel.source.begin(), rel.source.end(), s) == rel.source.end()) {
            subset = false;
            break;
          }
        }
        if (subset) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
    }
    apply_constraint(join(rel.source) + "->" + join(rel.target), rel.target, rel.source);
  }

  if (policy == EmbeddingPolicy::Reduced) {
    for (const auto& d : derive_higher_order(a)) {
      apply_constraint(d.source + "->" + join(d.target) + "|do(" + join(d.given_do) + ")",
                       d.target, {d.source});
    }
  }

  report.compatible = report.violations.empty();
  return report;
}

}  // namespace causalkit
