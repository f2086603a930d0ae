#include "causalkit/certify.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

std::string render_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += '|';
    out += '(' + pairs[i].first + ',' + pairs[i].second + ')';
  }
  return out;
}

}  // namespace

std::vector<DerivedHigherOrder> derive_higher_order(const AffectsSet& a) {
  std::vector<DerivedHigherOrder> out;
  for (const auto& rel : a.relations) {
    if (!rel.first_order() || !rel.holds || rel.source.size() < 2) continue;
    for (const auto& x : rel.source) {
      std::vector<std::string> rest;
      for (const auto& s : rel.source) {
        if (s != x) rest.push_back(s);
      }
      const AffectsRelation* premise = a.find(rest, rel.target, {});
      if (premise != nullptr && !premise->holds) {
        out.push_back({x, rel.target, rest});
      }
    }
  }
  return out;
}

std::vector<PathConstraint> derive_path_constraints(const AffectsSet& a) {
  std::vector<PathConstraint> raw;
  for (const auto& rel : a.relations) {
    if (!rel.first_order() || !rel.holds) continue;
    PathConstraint c;
    for (const auto& s : rel.source) {
      for (const auto& t : rel.target) c.any_of.emplace_back(s, t);
    }
    c.rule = "first-order(" + join(rel.source) + "->" + join(rel.target) + ")";
    raw.push_back(std::move(c));
  }
  for (const auto& d : derive_higher_order(a)) {
    PathConstraint c;
    for (const auto& t : d.target) c.any_of.emplace_back(d.source, t);
    c.rule = "higher-order(" + d.source + "->" + join(d.target) + "|do(" +
             join(d.given_do) + "))";
    raw.push_back(std::move(c));
  }

  // Dedupe on the normalized pair set, keeping the first occurrence.
  auto normalized = [](const PathConstraint& c) {
    auto pairs = c.any_of;
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  };
  std::vector<PathConstraint> unique;
  for (auto& c : raw) {
    bool seen = false;
    for (const auto& u : unique) {
      if (normalized(u) == normalized(c)) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(std::move(c));
  }

  // Drop any disjunction that strictly contains another: the smaller one is
  // the stronger requirement.
  auto contains_all = [&](const PathConstraint& big, const PathConstraint& small) {
    for (const auto& p : small.any_of) {
      if (std::find(big.any_of.begin(), big.any_of.end(), p) == big.any_of.end()) {
        return false;
      }
    }
    return true;
  };
  std::vector<PathConstraint> kept;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < unique.size(); ++j) {
      if (i == j) continue;
      if (unique[j].any_of.size() < unique[i].any_of.size() &&
          contains_all(unique[i], unique[j])) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) kept.push_back(unique[i]);
  }
  return kept;
}

std::optional<std::vector<std::string>> satisfiable_order(
    const std::vector<PathConstraint>& constraints, const std::vector<std::string>& nodes,
    int max_nodes) {
  if (static_cast<int>(nodes.size()) > max_nodes) {
    throw std::invalid_argument("too many nodes for exhaustive order search");
  }
  std::map<std::string, int> position_of_name;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    position_of_name[nodes[i]] = static_cast<int>(i);
  }
  for (const auto& c : constraints) {
    if (c.any_of.empty()) throw std::invalid_argument("empty disjunction");
    for (const auto& [u, v] : c.any_of) {
      if (u == v) throw std::invalid_argument("constraint pair with equal endpoints");
      if (!position_of_name.count(u) || !position_of_name.count(v)) {
        throw std::invalid_argument("constraint endpoint outside the node set");
      }
    }
  }

  std::vector<int> perm(nodes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::vector<int> pos(nodes.size());
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      pos[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    }
    bool ok = true;
    for (const auto& c : constraints) {
      bool satisfied = false;
      for (const auto& [u, v] : c.any_of) {
        if (pos[static_cast<std::size_t>(position_of_name.at(u))] <
            pos[static_cast<std::size_t>(position_of_name.at(v))]) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<std::string> order;
      for (int i : perm) order.push_back(nodes[static_cast<std::size_t>(i)]);
      return order;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::string CycleCertificate::serialize() const {
  std::ostringstream out;
  for (const auto& c : constraints) {
    out << "constraint=" << render_pairs(c.any_of) << " rule=" << c.rule << '\n';
  }
  if (verdict == CycleVerdict::DagConsistent) {
    out << "verdict=dag order=" << join(witness_order) << '\n';
  } else {
    for (const auto& r : refutation) {
      out << "order=" << join(r.order) << " violates="
          << render_pairs(constraints[static_cast<std::size_t>(r.violated_constraint)].any_of)
          << '\n';
    }
    out << "verdict=cyclic\n";
  }
  return out.str();
}

CycleCertificate certify_cycle(const AffectsSet& a, int max_nodes) {
  CycleCertificate cert;
  cert.constraints = derive_path_constraints(a);
  const auto& nodes = a.observed;
  if (static_cast<int>(nodes.size()) > max_nodes) {
    throw std::invalid_argument("too many nodes for exhaustive order search");
  }

  auto witness = satisfiable_order(cert.constraints, nodes, max_nodes);
  if (witness) {
    cert.verdict = CycleVerdict::DagConsistent;
    cert.witness_order = std::move(*witness);
    return cert;
  }

  cert.verdict = CycleVerdict::CyclicCertified;
  std::map<std::string, int> position_of_name;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    position_of_name[nodes[i]] = static_cast<int>(i);
  }
  std::vector<int> perm(nodes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::vector<int> pos(nodes.size());
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      pos[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    }
    int violated = -1;
    for (std::size_t ci = 0; ci < cert.constraints.size(); ++ci) {
      bool satisfied = false;
      for (const auto& [u, v] : cert.constraints[ci].any_of) {
        if (pos[static_cast<std::size_t>(position_of_name.at(u))] <
            pos[static_cast<std::size_t>(position_of_name.at(v))]) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) {
        violated = static_cast<int>(ci);
        break;
      }
    }
    std::vector<std::string> order;
    for (int i : perm) order.push_back(nodes[static_cast<std::size_t>(i)]);
    cert.refutation.push_back({std::move(order), violated});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cert;
}

}  // namespace causalkit
