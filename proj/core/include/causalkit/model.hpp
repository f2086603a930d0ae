#pragma once

#include "causalkit/distribution.hpp"
#include "causalkit/graph.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causalkit {

// Right-hand side of a causal mechanism. Operators act modulo the defined
// node's alphabet size k: xor is addition mod k, and/or are min/max mod k,
// not is (k-1) - v mod k. For bits these are the usual Boolean gates.
class Expression {
 public:
  enum class Kind { Constant, Ref, Xor, And, Or, Not, Table };

  static Expression constant(int value);
  static Expression ref(std::string name);
  static Expression xor_of(std::vector<Expression> args);
  static Expression and_of(std::vector<Expression> args);
  static Expression or_of(std::vector<Expression> args);
  static Expression not_of(Expression arg);
  static Expression table(std::vector<std::string> inputs,
                          std::map<std::vector<int>, int> rows);

  Kind kind() const { return kind_; }
  int constant_value() const { return value_; }
  const std::string& ref_name() const { return name_; }
  const std::vector<Expression>& args() const { return args_; }
  const std::vector<std::string>& table_inputs() const { return table_inputs_; }
  const std::map<std::vector<int>, int>& table_rows() const { return table_rows_; }

  std::set<std::string> referenced_names() const;
  int evaluate(int alphabet_size,
               const std::function<int(const std::string&)>& value_of) const;
  void rename(const std::string& from, const std::string& to);
  std::string render() const;

 private:
  Kind kind_ = Kind::Constant;
  int value_ = 0;
  std::string name_;
  std::vector<Expression> args_;
  std::vector<std::string> table_inputs_;
  std::map<std::vector<int>, int> table_rows_;
};

struct Mechanism {
  std::string node;
  Expression expr;
  // The one exogenous variable the expression reads, if any. Filled in by
  // CausalModel validation; callers may leave it empty.
  std::optional<std::string> noise_parent;
};

// Exogenous randomness feeding exactly one mechanism. The alphabet is the
// number of probabilities.
struct NoiseSpec {
  std::string name;
  std::vector<Rational> probabilities;
};

// A causal structure plus one mechanism per node and the distributions of the
// exogenous noise variables. Immutable once validated.
class CausalModel {
 public:
  CausalModel(Graph graph, std::vector<Mechanism> mechanisms,
              std::vector<NoiseSpec> noise);

  const Graph& graph() const { return graph_; }
  const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }
  const Mechanism& mechanism(int node_index) const;
  const Mechanism& mechanism(const std::string& node) const;
  const std::vector<NoiseSpec>& noise() const { return noise_; }
  const NoiseSpec& noise_for(const std::string& name) const;
  bool is_noise_name(const std::string& name) const;

 private:
  Graph graph_;
  std::vector<Mechanism> mechanisms_;  // one per node, in node order
  std::vector<NoiseSpec> noise_;
};

}  // namespace causalkit
