#include "causalkit/distribution.hpp"

#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::size_t table_size_for(const std::vector<Variable>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.alphabet_size < 1) {
      throw std::invalid_argument("variable '" + v.name + "' needs alphabet_size >= 1");
    }
    n *= static_cast<std::size_t>(v.alphabet_size);
  }
  return n;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<Variable> variables,
                                     std::vector<Rational> table)
    : variables_(std::move(variables)), table_(std::move(table)) {
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v.name).second) {
      throw std::invalid_argument("duplicate variable '" + v.name + "'");
    }
  }
  if (table_.size() != table_size_for(variables_)) {
    throw std::invalid_argument("probability table has wrong size");
  }
  Rational sum = 0;
  for (const auto& p : table_) {
    if (p < 0) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (sum != 1) throw std::invalid_argument("probabilities must sum to exactly 1");
}

JointDistribution JointDistribution::uniform(std::vector<Variable> variables) {
  const std::size_t n = table_size_for(variables);
  return JointDistribution(std::move(variables),
                           std::vector<Rational>(n, Rational(1, static_cast<unsigned>(n))));
}

JointDistribution JointDistribution::point_mass(std::vector<Variable> variables,
                                                const std::vector<int>& values) {
  const std::size_t n = table_size_for(variables);
  if (values.size() != variables.size()) {
    throw std::invalid_argument("assignment arity mismatch");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (values[i] < 0 || values[i] >= variables[i].alphabet_size) {
      throw std::invalid_argument("value out of alphabet for '" + variables[i].name + "'");
    }
    index = index * static_cast<std::size_t>(variables[i].alphabet_size) +
            static_cast<std::size_t>(values[i]);
  }
  std::vector<Rational> table(n, Rational(0));
  table[index] = 1;
  return JointDistribution(std::move(variables), std::move(table));
}

int JointDistribution::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown variable '" + name + "'");
}

bool JointDistribution::has_variable(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return true;
  }
  return false;
}

std::vector<int> JointDistribution::values_at(std::size_t index) const {
  std::vector<int> values(variables_.size());
  for (std::size_t i = variables_.size(); i-- > 0;) {
    const auto k = static_cast<std::size_t>(variables_[i].alphabet_size);
    values[i] = static_cast<int>(index % k);
    index /= k;
  }
  return values;
}

std::size_t JointDistribution::index_of(const std::vector<int>& values) const {
  if (values.size() != variables_.size()) {
    throw std::invalid_argument("assignment arity mismatch");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (values[i] < 0 || values[i] >= variables_[i].alphabet_size) {
      throw std::invalid_argument("value out of alphabet for '" + variables_[i].name + "'");
    }
    index = index * static_cast<std::size_t>(variables_[i].alphabet_size) +
            static_cast<std::size_t>(values[i]);
  }
  return index;
}

const Rational& JointDistribution::probability(const std::vector<int>& values) const {
  return table_[index_of(values)];
}

Rational JointDistribution::probability_of_event(const Assignment& partial) const {
  for (const auto& [name, value] : partial) {
    const int i = variable_index(name);
    if (value < 0 || value >= variables_[static_cast<std::size_t>(i)].alphabet_size) {
      throw std::invalid_argument("value out of alphabet for '" + name + "'");
    }
  }
  Rational sum = 0;
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    if (table_[idx] == 0) continue;
    const auto values = values_at(idx);
    bool match = true;
    for (const auto& [name, value] : partial) {
      if (values[static_cast<std::size_t>(variable_index(name))] != value) {
        match = false;
        break;
      }
    }
    if (match) sum += table_[idx];
  }
  return sum;
}

std::string JointDistribution::serialize() const {
  std::ostringstream out;
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    if (table_[idx] == 0) continue;
    const auto values = values_at(idx);
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << values[i] << ' ';
    }
    out << format_fraction(table_[idx]) << '\n';
  }
  return out.str();
}

JointDistribution marginal(const JointDistribution& p, const std::set<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("marginal needs a nonempty keep-set");
  std::vector<Variable> kept;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < p.variables().size(); ++i) {
    if (keep.count(p.variables()[i].name)) {
      kept.push_back(p.variables()[i]);
      kept_pos.push_back(i);
    }
  }
  if (kept.size() != keep.size()) {
    for (const auto& name : keep) {
      if (!p.has_variable(name)) throw std::invalid_argument("unknown variable '" + name + "'");
    }
  }
  JointDistribution out = JointDistribution::point_mass(kept, std::vector<int>(kept.size(), 0));
  std::vector<Rational> table(out.table_size(), Rational(0));
  for (std::size_t idx = 0; idx < p.table_size(); ++idx) {
    const Rational& pr = p.probability_at(idx);
    if (pr == 0) continue;
    const auto values = p.values_at(idx);
    std::vector<int> sub(kept.size());
    for (std::size_t i = 0; i < kept_pos.size(); ++i) sub[i] = values[kept_pos[i]];
    table[out.index_of(sub)] += pr;
  }
  return JointDistribution(std::move(kept), std::move(table));
}

JointDistribution condition(const JointDistribution& p, const Assignment& on) {
  const Rational weight = p.probability_of_event(on);
  if (weight == 0) {
    throw std::domain_error("conditioning on a zero-probability event");
  }
  std::vector<Variable> rest;
  std::vector<std::size_t> rest_pos;
  for (std::size_t i = 0; i < p.variables().size(); ++i) {
    if (!on.count(p.variables()[i].name)) {
      rest.push_back(p.variables()[i]);
      rest_pos.push_back(i);
    }
  }
  JointDistribution scaffold =
      JointDistribution::point_mass(rest, std::vector<int>(rest.size(), 0));
  std::vector<Rational> table(scaffold.table_size(), Rational(0));
  for (std::size_t idx = 0; idx < p.table_size(); ++idx) {
    const Rational& pr = p.probability_at(idx);
    if (pr == 0) continue;
    const auto values = p.values_at(idx);
    bool match = true;
    for (const auto& [name, value] : on) {
      if (values[static_cast<std::size_t>(p.variable_index(name))] != value) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    std::vector<int> sub(rest.size());
    for (std::size_t i = 0; i < rest_pos.size(); ++i) sub[i] = values[rest_pos[i]];
    table[scaffold.index_of(sub)] += pr / weight;
  }
  return JointDistribution(std::move(rest), std::move(table));
}

bool is_independent(const JointDistribution& p, const std::set<std::string>& x,
                    const std::set<std::string>& y, const std::set<std::string>& z) {
  if (x.empty() || y.empty()) throw std::invalid_argument("x and y must be nonempty");
  for (const auto& n : x) {
    if (y.count(n) || z.count(n)) throw std::invalid_argument("sets must be disjoint");
  }
  for (const auto& n : y) {
    if (z.count(n)) throw std::invalid_argument("sets must be disjoint");
  }
  std::set<std::string> xz = x, yz = y, xyz = x;
  xz.insert(z.begin(), z.end());
  yz.insert(z.begin(), z.end());
  xyz.insert(y.begin(), y.end());
  xyz.insert(z.begin(), z.end());

  const JointDistribution pxyz = marginal(p, xyz);
  const JointDistribution pxz = marginal(p, xz);
  const JointDistribution pyz = marginal(p, yz);
  const JointDistribution pz =
      z.empty() ? JointDistribution({}, {Rational(1)}) : marginal(p, z);

  // P(xyz) * P(z) == P(xz) * P(yz) for every cell avoids any division.
  for (std::size_t idx = 0; idx < pxyz.table_size(); ++idx) {
    const auto values = pxyz.values_at(idx);
    Assignment full;
    for (std::size_t i = 0; i < pxyz.variables().size(); ++i) {
      full[pxyz.variables()[i].name] = values[i];
    }
    auto restrict_to = [&](const JointDistribution& q) {
      std::vector<int> sub(q.variables().size());
      for (std::size_t i = 0; i < q.variables().size(); ++i) {
        sub[i] = full.at(q.variables()[i].name);
      }
      return q.probability(sub);
    };
    const Rational lhs = restrict_to(pxyz) * (z.empty() ? Rational(1) : restrict_to(pz));
    const Rational rhs = restrict_to(pxz) * restrict_to(pyz);
    if (lhs != rhs) return false;
  }
  return true;
}

Rational tv_distance(const JointDistribution& p, const JointDistribution& q) {
  if (p.variables() != q.variables()) {
    throw std::invalid_argument("tv_distance requires identical variable lists");
  }
  Rational sum = 0;
  for (std::size_t idx = 0; idx < p.table_size(); ++idx) {
    const Rational d = p.probability_at(idx) - q.probability_at(idx);
    sum += d < 0 ? -d : d;
  }
  return sum / 2;
}

}  // namespace causalkit
