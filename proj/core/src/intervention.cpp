#include "causalkit/intervention.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::vector<std::string> in_declaration_order(const Graph& g,
                                              const std::set<std::string>& names) {
  std::vector<std::pair<int, std::string>> keyed;
  for (const auto& name : names) keyed.emplace_back(g.index_of(name), name);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [i, name] : keyed) {
    (void)i;
    out.push_back(std::move(name));
  }
  return out;
}

void require_observed(const Graph& g, const std::set<std::string>& names,
                      const char* what) {
  for (const auto& name : names) {
    if (g.node(g.index_of(name)).kind != NodeKind::Observed) {
      throw std::invalid_argument(std::string(what) + " node '" + name +
                                  "' is not observed");
    }
  }
}

std::string render_assignment(const Assignment& a) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : a) {
    if (!first) out << ',';
    first = false;
    out << name << '=' << value;
  }
  return out.str();
}

std::string join(const std::vector<std::string>& names) {
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out << ',';
    out << names[i];
  }
  return out.str();
}

// Assignments over `vars` in lexicographic order (first variable most
// significant), as a list.
std::vector<Assignment> assignment_sweep(const Graph& g,
                                         const std::vector<std::string>& vars) {
  std::vector<int> sizes;
  for (const auto& v : vars) sizes.push_back(g.node(g.index_of(v)).alphabet_size);
  std::vector<Assignment> out;
  std::vector<int> counter(vars.size(), 0);
  for (;;) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = counter[i];
    out.push_back(std::move(a));
    std::size_t i = counter.size();
    for (; i-- > 0;) {
      if (++counter[i] < sizes[i]) break;
      counter[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based uniform 64-bit stream: independent of evaluation order.
std::uint64_t sample_bits(std::uint64_t seed, std::uint64_t setting, std::uint64_t index) {
  return mix64(mix64(seed ^ mix64(setting + 1)) + index);
}

std::size_t sample_index(const JointDistribution& dist, std::uint64_t bits) {
  // Pick the first support point whose cumulative probability exceeds
  // bits / 2^64, compared exactly.
  static const BigInt two64 = BigInt(1) << 64;
  const BigInt u(bits);
  Rational cumulative = 0;
  for (std::size_t idx = 0; idx < dist.table_size(); ++idx) {
    cumulative += dist.probability_at(idx);
    if (numerator(cumulative) * two64 > u * denominator(cumulative)) return idx;
  }
  return dist.table_size() - 1;  // cumulative is exactly 1; unreachable
}

}  // namespace

CausalModel apply_do(const CausalModel& m, const InterventionTarget& t) {
  const Graph& g = m.graph();
  if (t.nodes.empty()) throw std::invalid_argument("empty intervention target");
  require_observed(g, t.nodes, "intervention");
  if (t.values) {
    for (const auto& name : t.nodes) {
      const auto it = t.values->find(name);
      if (it == t.values->end()) {
        throw std::invalid_argument("intervention is missing a value for '" + name + "'");
      }
      const int k = g.node(g.index_of(name)).alphabet_size;
      if (it->second < 0 || it->second >= k) {
        throw std::invalid_argument("intervention value out of alphabet for '" + name + "'");
      }
    }
    if (t.values->size() != t.nodes.size()) {
      throw std::invalid_argument("intervention values name nodes outside the target set");
    }
  }

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [p, c] : g.edges()) {
    if (t.nodes.count(g.node(c).name)) continue;  // cut incoming edges
    edges.emplace_back(g.node(p).name, g.node(c).name);
  }

  std::vector<Mechanism> mechanisms;
  std::vector<NoiseSpec> fresh_noise;
  std::set<std::string> taken;
  for (const auto& spec : m.noise()) taken.insert(spec.name);

  for (const auto& mech : m.mechanisms()) {
    if (!t.nodes.count(mech.node)) {
      mechanisms.push_back({mech.node, mech.expr, std::nullopt});
      continue;
    }
    if (t.values) {
      mechanisms.push_back({mech.node, Expression::constant(t.values->at(mech.node)),
                            std::nullopt});
    } else {
      std::string driver = "E_do_" + mech.node;
      while (g.contains(driver) || taken.count(driver)) driver += "_";
      taken.insert(driver);
      const int k = g.node(g.index_of(mech.node)).alphabet_size;
      fresh_noise.push_back(
          {driver, std::vector<Rational>(static_cast<std::size_t>(k), Rational(1, k))});
      mechanisms.push_back({mech.node, Expression::ref(driver), std::nullopt});
    }
  }

  // Keep only noise that is still read by some mechanism.
  std::set<std::string> referenced;
  for (const auto& mech : mechanisms) {
    const auto refs = mech.expr.referenced_names();
    referenced.insert(refs.begin(), refs.end());
  }
  std::vector<NoiseSpec> noise;
  for (const auto& spec : m.noise()) {
    if (referenced.count(spec.name)) noise.push_back(spec);
  }
  for (auto& spec : fresh_noise) noise.push_back(std::move(spec));

  return CausalModel(Graph(g.nodes(), edges), std::move(mechanisms), std::move(noise));
}

JointDistribution post_intervention_distribution(const CausalModel& m,
                                                 const InterventionTarget& t) {
  if (!t.values) {
    throw std::invalid_argument("post-intervention distribution needs fixed values");
  }
  const SolveReport report = solve(apply_do(m, t));
  std::set<std::string> keep;
  for (const auto& name : m.graph().observed_names()) {
    if (!t.nodes.count(name)) keep.insert(name);
  }
  if (keep.empty()) {
    throw std::invalid_argument("no observed nodes remain outside the intervention");
  }
  return marginal(report.distribution, keep);
}

std::string AffectsRelation::render() const {
  std::ostringstream out;
  out << join(source) << "->" << join(target);
  if (!given_do.empty()) out << "|do(" << join(given_do) << ')';
  out << " holds=" << (holds ? 1 : 0);
  if (witness) {
    out << " witness=x(" << render_assignment(witness->source_values) << ')';
    if (!given_do.empty()) out << ";z(" << render_assignment(witness->do_values) << ')';
    out << ";y(" << render_assignment(witness->target_values) << ')'
        << ";lhs(" << format_fraction(witness->lhs) << ')'
        << ";rhs(" << format_fraction(witness->rhs) << ')';
  }
  return out.str();
}

namespace {

AffectsRelation compare_against_baseline(const CausalModel& m,
                                         const std::vector<std::string>& source,
                                         const std::vector<std::string>& target,
                                         const std::vector<std::string>& given_do) {
  const Graph& g = m.graph();
  const std::set<std::string> target_set(target.begin(), target.end());

  AffectsRelation rel{source, target, given_do, false, std::nullopt};

  const auto z_sweep = given_do.empty() ? std::vector<Assignment>{Assignment{}}
                                        : assignment_sweep(g, given_do);
  const auto x_sweep = assignment_sweep(g, source);

  for (const auto& z : z_sweep) {
    JointDistribution baseline = [&] {
      if (z.empty()) {
        return marginal(solve(m).distribution, target_set);
      }
      std::set<std::string> z_nodes;
      for (const auto& [name, value] : z) {
        (void)value;
        z_nodes.insert(name);
      }
      return marginal(post_intervention_distribution(m, {z_nodes, z}), target_set);
    }();
    for (const auto& x : x_sweep) {
      Assignment xz = x;
      xz.insert(z.begin(), z.end());
      std::set<std::string> xz_nodes;
      for (const auto& [name, value] : xz) {
        (void)value;
        xz_nodes.insert(name);
      }
      const JointDistribution shifted =
          marginal(post_intervention_distribution(m, {xz_nodes, xz}), target_set);
      for (std::size_t idx = 0; idx < shifted.table_size(); ++idx) {
        if (shifted.probability_at(idx) == baseline.probability_at(idx)) continue;
        const auto values = shifted.values_at(idx);
        Assignment y;
        for (std::size_t i = 0; i < shifted.variables().size(); ++i) {
          y[shifted.variables()[i].name] = values[i];
        }
        rel.holds = true;
        rel.witness = AffectsWitness{x, z, y, shifted.probability_at(idx),
                                     baseline.probability_at(idx)};
        return rel;
      }
    }
  }
  return rel;
}

void check_disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& n : a) {
    if (b.count(n)) throw std::invalid_argument("sets overlap on '" + n + "'");
  }
}

}  // namespace

AffectsRelation affects(const CausalModel& m, const std::set<std::string>& x,
                        const std::set<std::string>& y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("x and y must be nonempty");
  check_disjoint(x, y);
  require_observed(m.graph(), x, "affects");
  require_observed(m.graph(), y, "affects");
  return compare_against_baseline(m, in_declaration_order(m.graph(), x),
                                  in_declaration_order(m.graph(), y), {});
}

AffectsRelation affects_given_do(const CausalModel& m, const std::set<std::string>& x,
                                 const std::set<std::string>& y,
                                 const std::set<std::string>& z) {
  if (x.empty() || y.empty()) throw std::invalid_argument("x and y must be nonempty");
  check_disjoint(x, y);
  check_disjoint(x, z);
  check_disjoint(y, z);
  require_observed(m.graph(), x, "affects");
  require_observed(m.graph(), y, "affects");
  require_observed(m.graph(), z, "affects");
  return compare_against_baseline(m, in_declaration_order(m.graph(), x),
                                  in_declaration_order(m.graph(), y),
                                  in_declaration_order(m.graph(), z));
}

const AffectsRelation* AffectsSet::find(const std::vector<std::string>& source,
                                        const std::vector<std::string>& target,
                                        const std::vector<std::string>& given_do) const {
  for (const auto& rel : relations) {
    if (rel.source == source && rel.target == target && rel.given_do == given_do) {
      return &rel;
    }
  }
  return nullptr;
}

std::string AffectsSet::serialize() const {
  std::ostringstream out;
  for (const auto& rel : relations) out << rel.render() << '\n';
  return out.str();
}

AffectsSet enumerate_affects(const CausalModel& m, int max_size,
                             const std::string& model_id) {
  if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  const Graph& g = m.graph();
  const auto observed = g.observed_names();
  const int n = static_cast<int>(observed.size());

  // Nonempty subsets up to max_size, ordered by (size, declaration lex).
  std::vector<std::vector<std::string>> subsets;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1) names.push_back(observed[static_cast<std::size_t>(i)]);
    }
    subsets.push_back(std::move(names));
  }
  std::sort(subsets.begin(), subsets.end(),
            [&](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              std::vector<int> ia, ib;
              for (const auto& s : a) ia.push_back(g.index_of(s));
              for (const auto& s : b) ib.push_back(g.index_of(s));
              return ia < ib;
            });

  auto disjoint = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& s : a) {
      if (std::find(b.begin(), b.end(), s) != b.end()) return false;
    }
    return true;
  };
  auto as_set = [](const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.end());
  };

  AffectsSet out{model_id, max_size, observed, {}};
  for (const auto& x : subsets) {
    for (const auto& y : subsets) {
      if (!disjoint(x, y)) continue;
      out.relations.push_back(affects(m, as_set(x), as_set(y)));
    }
  }
  for (const auto& x : subsets) {
    for (const auto& y : subsets) {
      if (!disjoint(x, y)) continue;
      for (const auto& z : subsets) {
        if (!disjoint(x, z) || !disjoint(y, z)) continue;
        out.relations.push_back(affects_given_do(m, as_set(x), as_set(y), as_set(z)));
      }
    }
  }
  return out;
}

std::string SimulationReport::serialize() const {
  std::ostringstream out;
  out << "experiment=" << (experiment == Experiment::E1 ? "E1" : "E2")
      << " samples=" << samples << " seed=" << seed << '\n';
  for (const auto& setting : settings) {
    out << "setting do(" << render_assignment(setting.intervention) << ")\n";
    out << setting.empirical.serialize();
    out << "xor_fraction=" << format_fraction(setting.xor_match_fraction) << '\n';
  }
  return out.str();
}

SimulationReport simulate_protocol(const CausalModel& m, Experiment experiment,
                                   int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const Graph& g = m.graph();
  for (const char* name : {"A", "B", "C"}) {
    const int i = g.index_of(name);  // throws when absent
    if (g.node(i).kind != NodeKind::Observed) {
      throw std::invalid_argument(std::string("protocol node '") + name +
                                  "' must be observed");
    }
  }

  const std::vector<std::string> targets =
      experiment == Experiment::E1 ? std::vector<std::string>{"A", "C"}
                                   : std::vector<std::string>{"B"};
  const auto settings = assignment_sweep(g, targets);

  SimulationReport report{experiment, samples, seed, {}};
  const int kb = g.node(g.index_of("B")).alphabet_size;

  for (std::size_t si = 0; si < settings.size(); ++si) {
    const Assignment& setting = settings[si];
    std::set<std::string> nodes;
    for (const auto& [name, value] : setting) {
      (void)value;
      nodes.insert(name);
    }
    const JointDistribution exact = post_intervention_distribution(m, {nodes, setting});

    std::vector<long long> counts(exact.table_size(), 0);
    for (int i = 0; i < samples; ++i) {
      const std::uint64_t bits = sample_bits(seed, si, static_cast<std::uint64_t>(i));
      ++counts[sample_index(exact, bits)];
    }
    std::vector<Rational> freq(exact.table_size());
    for (std::size_t idx = 0; idx < counts.size(); ++idx) {
      freq[idx] = Rational(counts[idx], samples);
    }
    JointDistribution empirical(exact.variables(), std::move(freq));

    // Fraction of samples with B = A (+) C, using the swept values for the
    // intervened variables.
    Rational match = 0;
    for (std::size_t idx = 0; idx < empirical.table_size(); ++idx) {
      if (empirical.probability_at(idx) == 0) continue;
      const auto values = empirical.values_at(idx);
      Assignment full = setting;
      for (std::size_t i = 0; i < empirical.variables().size(); ++i) {
        full[empirical.variables()[i].name] = values[i];
      }
      if (full.at("B") == (full.at("A") + full.at("C")) % kb) {
        match += empirical.probability_at(idx);
      }
    }
    report.settings.push_back({setting, std::move(empirical), match});
  }
  return report;
}

}  // namespace causalkit
