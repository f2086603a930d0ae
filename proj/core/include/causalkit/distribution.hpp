#pragma once

#include "causalkit/rational.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace causalkit {

struct Variable {
  std::string name;
  int alphabet_size = 2;
  bool operator==(const Variable&) const = default;
};

// Partial or full assignment of values to named variables.
using Assignment = std::map<std::string, int>;

// Exact joint distribution over an ordered list of finite variables.
// The table is dense in mixed-radix order with the first variable most
// significant; probabilities are exact rationals summing to one.
class JointDistribution {
 public:
  JointDistribution(std::vector<Variable> variables, std::vector<Rational> table);

  static JointDistribution uniform(std::vector<Variable> variables);
  static JointDistribution point_mass(std::vector<Variable> variables,
                                      const std::vector<int>& values);

  const std::vector<Variable>& variables() const { return variables_; }
  std::size_t table_size() const { return table_.size(); }
  const Rational& probability_at(std::size_t index) const { return table_.at(index); }
  const Rational& probability(const std::vector<int>& values) const;
  Rational probability_of_event(const Assignment& partial) const;

  int variable_index(const std::string& name) const;  // throws on unknown
  bool has_variable(const std::string& name) const;
  std::vector<int> values_at(std::size_t index) const;
  std::size_t index_of(const std::vector<int>& values) const;

  bool operator==(const JointDistribution&) const = default;

  // One line per support point: values in declared order, then num/den.
  std::string serialize() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Rational> table_;
};

// Sums out every variable not in `keep`; `keep` must be a nonempty subset.
JointDistribution marginal(const JointDistribution& p, const std::set<std::string>& keep);

// Exact conditional over the remaining variables. Conditioning on a
// zero-probability event throws std::domain_error.
JointDistribution condition(const JointDistribution& p, const Assignment& on);

// Exact test of P(XY|Z) = P(X|Z)P(Y|Z) for every z with P(z) > 0.
bool is_independent(const JointDistribution& p, const std::set<std::string>& x,
                    const std::set<std::string>& y, const std::set<std::string>& z);

// Half the L1 distance; requires identical variable lists.
Rational tv_distance(const JointDistribution& p, const JointDistribution& q);

}  // namespace causalkit
