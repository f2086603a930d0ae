#include "causalkit/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace causalkit {

Expression Expression::constant(int value) {
  if (value < 0) throw std::invalid_argument("mechanism constants are nonnegative");
  Expression e;
  e.kind_ = Kind::Constant;
  e.value_ = value;
  return e;
}

Expression Expression::ref(std::string name) {
  Expression e;
  e.kind_ = Kind::Ref;
  e.name_ = std::move(name);
  return e;
}

Expression Expression::xor_of(std::vector<Expression> args) {
  if (args.empty()) throw std::invalid_argument("xor needs arguments");
  Expression e;
  e.kind_ = Kind::Xor;
  e.args_ = std::move(args);
  return e;
}

Expression Expression::and_of(std::vector<Expression> args) {
  if (args.empty()) throw std::invalid_argument("and needs arguments");
  Expression e;
  e.kind_ = Kind::And;
  e.args_ = std::move(args);
  return e;
}

Expression Expression::or_of(std::vector<Expression> args) {
  if (args.empty()) throw std::invalid_argument("or needs arguments");
  Expression e;
  e.kind_ = Kind::Or;
  e.args_ = std::move(args);
  return e;
}

Expression Expression::not_of(Expression arg) {
  Expression e;
  e.kind_ = Kind::Not;
  e.args_.push_back(std::move(arg));
  return e;
}

Expression Expression::table(std::vector<std::string> inputs,
                             std::map<std::vector<int>, int> rows) {
  Expression e;
  e.kind_ = Kind::Table;
  e.table_inputs_ = std::move(inputs);
  e.table_rows_ = std::move(rows);
  return e;
}

std::set<std::string> Expression::referenced_names() const {
  std::set<std::string> out;
  switch (kind_) {
    case Kind::Constant:
      break;
    case Kind::Ref:
      out.insert(name_);
      break;
    case Kind::Table:
      out.insert(table_inputs_.begin(), table_inputs_.end());
      break;
    default:
      for (const auto& a : args_) {
        const auto sub = a.referenced_names();
        out.insert(sub.begin(), sub.end());
      }
  }
  return out;
}

int Expression::evaluate(int alphabet_size,
                         const std::function<int(const std::string&)>& value_of) const {
  const int k = alphabet_size;
  auto mod = [k](int v) { return ((v % k) + k) % k; };
  switch (kind_) {
    case Kind::Constant:
      return mod(value_);
    case Kind::Ref:
      return mod(value_of(name_));
    case Kind::Xor: {
      int sum = 0;
      for (const auto& a : args_) sum = mod(sum + a.evaluate(k, value_of));
      return sum;
    }
    case Kind::And: {
      int m = args_.front().evaluate(k, value_of);
      for (std::size_t i = 1; i < args_.size(); ++i) {
        m = std::min(m, args_[i].evaluate(k, value_of));
      }
      return mod(m);
    }
    case Kind::Or: {
      int m = args_.front().evaluate(k, value_of);
      for (std::size_t i = 1; i < args_.size(); ++i) {
        m = std::max(m, args_[i].evaluate(k, value_of));
      }
      return mod(m);
    }
    case Kind::Not:
      return mod(k - 1 - args_.front().evaluate(k, value_of));
    case Kind::Table: {
      std::vector<int> key(table_inputs_.size());
      for (std::size_t i = 0; i < table_inputs_.size(); ++i) {
        key[i] = value_of(table_inputs_[i]);
      }
      const auto it = table_rows_.find(key);
      if (it == table_rows_.end()) {
        throw std::invalid_argument("table mechanism is missing a row");
      }
      return mod(it->second);
    }
  }
  throw std::logic_error("unhandled expression kind");
}

void Expression::rename(const std::string& from, const std::string& to) {
  if (kind_ == Kind::Ref && name_ == from) name_ = to;
  for (auto& a : args_) a.rename(from, to);
  for (auto& input : table_inputs_) {
    if (input == from) input = to;
  }
}

std::string Expression::render() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Constant:
      out << value_;
      break;
    case Kind::Ref:
      out << name_;
      break;
    case Kind::Xor:
    case Kind::And:
    case Kind::Or:
    case Kind::Not: {
      const char* op = kind_ == Kind::Xor   ? "xor"
                       : kind_ == Kind::And ? "and"
                       : kind_ == Kind::Or  ? "or"
                                            : "not";
      out << op << '(';
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out << ", ";
        out << args_[i].render();
      }
      out << ')';
      break;
    }
    case Kind::Table: {
      out << "table[";
      for (std::size_t i = 0; i < table_inputs_.size(); ++i) {
        if (i) out << ',';
        out << table_inputs_[i];
      }
      out << "]{";
      bool first = true;
      for (const auto& [key, value] : table_rows_) {
        if (!first) out << ", ";
        first = false;
        out << '(';
        for (std::size_t i = 0; i < key.size(); ++i) {
          if (i) out << ',';
          out << key[i];
        }
        out << "):" << value;
      }
      out << '}';
      break;
    }
  }
  return out.str();
}

CausalModel::CausalModel(Graph graph, std::vector<Mechanism> mechanisms,
                         std::vector<NoiseSpec> noise)
    : graph_(std::move(graph)), noise_(std::move(noise)) {
  // One mechanism per node, stored in node order.
  mechanisms_.resize(static_cast<std::size_t>(graph_.size()));
  std::vector<bool> have(static_cast<std::size_t>(graph_.size()), false);
  for (auto& m : mechanisms) {
    const int i = graph_.index_of(m.node);
    if (have[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("two mechanisms for node '" + m.node + "'");
    }
    have[static_cast<std::size_t>(i)] = true;
    mechanisms_[static_cast<std::size_t>(i)] = std::move(m);
  }
  for (int i = 0; i < graph_.size(); ++i) {
    if (!have[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("node '" + graph_.node(i).name + "' has no mechanism");
    }
  }

  std::map<std::string, int> noise_alphabet;
  for (const auto& n : noise_) {
    if (graph_.contains(n.name)) {
      throw std::invalid_argument("noise name '" + n.name + "' collides with a node");
    }
    if (n.probabilities.empty()) {
      throw std::invalid_argument("noise '" + n.name + "' has no probabilities");
    }
    Rational sum = 0;
    for (const auto& p : n.probabilities) {
      if (p < 0) throw std::invalid_argument("noise '" + n.name + "' has a negative weight");
      sum += p;
    }
    if (sum != 1) {
      throw std::invalid_argument("noise '" + n.name + "' is not normalized");
    }
    if (!noise_alphabet.emplace(n.name, static_cast<int>(n.probabilities.size())).second) {
      throw std::invalid_argument("duplicate noise '" + n.name + "'");
    }
  }

  std::map<std::string, std::string> noise_user;  // noise -> node using it
  for (int i = 0; i < graph_.size(); ++i) {
    auto& mech = mechanisms_[static_cast<std::size_t>(i)];
    const auto& node = graph_.node(i);
    std::set<std::string> parent_names;
    for (int p : graph_.parents(i)) parent_names.insert(graph_.node(p).name);

    const auto refs = mech.expr.referenced_names();
    std::optional<std::string> noise_ref;
    for (const auto& r : refs) {
      if (parent_names.count(r)) continue;
      if (noise_alphabet.count(r)) {
        if (noise_ref) {
          throw std::invalid_argument("mechanism for '" + node.name +
                                      "' reads two noise variables");
        }
        noise_ref = r;
        continue;
      }
      throw std::invalid_argument("mechanism for '" + node.name + "' references '" + r +
                                  "', which is neither a parent nor declared noise");
    }
    for (const auto& p : parent_names) {
      if (!refs.count(p)) {
        throw std::invalid_argument("mechanism for '" + node.name + "' ignores parent '" +
                                    p + "'");
      }
    }
    if (noise_ref) {
      const auto [it, fresh] = noise_user.emplace(*noise_ref, node.name);
      if (!fresh) {
        throw std::invalid_argument("noise '" + *noise_ref + "' feeds both '" + it->second +
                                    "' and '" + node.name + "'");
      }
    }
    mech.noise_parent = noise_ref;

    if (mech.expr.kind() == Expression::Kind::Table) {
      // Totality and range of explicit tables.
      const auto& inputs = mech.expr.table_inputs();
      std::vector<int> sizes;
      for (const auto& input : inputs) {
        if (parent_names.count(input)) {
          sizes.push_back(graph_.node(graph_.index_of(input)).alphabet_size);
        } else {
          sizes.push_back(noise_alphabet.at(input));
        }
      }
      std::size_t expect = 1;
      for (int s : sizes) expect *= static_cast<std::size_t>(s);
      if (mech.expr.table_rows().size() != expect) {
        throw std::invalid_argument("table for '" + node.name +
                                    "' is not total over its inputs");
      }
      for (const auto& [key, value] : mech.expr.table_rows()) {
        if (key.size() != inputs.size()) {
          throw std::invalid_argument("table for '" + node.name + "' has a malformed key");
        }
        for (std::size_t i = 0; i < key.size(); ++i) {
          if (key[i] < 0 || key[i] >= sizes[i]) {
            throw std::invalid_argument("table for '" + node.name +
                                        "' has a key outside its input alphabets");
          }
        }
        if (value < 0 || value >= node.alphabet_size) {
          throw std::invalid_argument("table for '" + node.name +
                                      "' maps to a value outside its alphabet");
        }
      }
    }
  }

  for (const auto& n : noise_) {
    if (!noise_user.count(n.name)) {
      throw std::invalid_argument("noise '" + n.name + "' feeds no mechanism");
    }
  }
}

const Mechanism& CausalModel::mechanism(int node_index) const {
  return mechanisms_.at(static_cast<std::size_t>(node_index));
}

const Mechanism& CausalModel::mechanism(const std::string& node) const {
  return mechanisms_.at(static_cast<std::size_t>(graph_.index_of(node)));
}

const NoiseSpec& CausalModel::noise_for(const std::string& name) const {
  for (const auto& n : noise_) {
    if (n.name == name) return n;
  }
  throw std::invalid_argument("unknown noise '" + name + "'");
}

bool CausalModel::is_noise_name(const std::string& name) const {
  for (const auto& n : noise_) {
    if (n.name == name) return true;
  }
  return false;
}

}  // namespace causalkit
