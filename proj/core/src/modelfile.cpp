#include "causalkit/modelfile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace causalkit {

namespace {

struct Line {
  int number;
  std::string text;
};

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Tokenizer for the right-hand sides: identifiers, integers (optionally
// signed, for embedding coordinates), rationals, punctuation.
class Tokens {
 public:
  Tokens(const std::string& text, int line) : line_(line) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < text.size() && ident_char(text[j])) ++j;
        items_.push_back(text.substr(i, j - i));
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          ((c == '-' || c == '+') && i + 1 < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
        std::size_t j = i + 1;
        while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                   text[j] == '/')) {
          ++j;
        }
        items_.push_back(text.substr(i, j - i));
        i = j;
        continue;
      }
      if (std::string("(){}[],:").find(c) != std::string::npos) {
        items_.push_back(std::string(1, c));
        ++i;
        continue;
      }
      throw ParseError(line_, std::string("unexpected character '") + c + "'");
    }
  }

  bool done() const { return pos_ >= items_.size(); }
  const std::string& peek() const {
    if (done()) throw ParseError(line_, "unexpected end of line");
    return items_[pos_];
  }
  std::string next() {
    if (done()) throw ParseError(line_, "unexpected end of line");
    return items_[pos_++];
  }
  void expect(const std::string& tok) {
    const std::string got = next();
    if (got != tok) {
      throw ParseError(line_, "expected '" + tok + "', found '" + got + "'");
    }
  }
  bool accept(const std::string& tok) {
    if (!done() && items_[pos_] == tok) {
      ++pos_;
      return true;
    }
    return false;
  }
  int line() const { return line_; }

 private:
  std::vector<std::string> items_;
  std::size_t pos_ = 0;
  int line_;
};

bool is_unsigned_int(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int parse_unsigned(Tokens& t, const char* what) {
  const std::string tok = t.next();
  if (!is_unsigned_int(tok)) {
    throw ParseError(t.line(), std::string("expected ") + what + ", found '" + tok + "'");
  }
  return std::stoi(tok);
}

Rational parse_rational_token(Tokens& t) {
  const std::string tok = t.next();
  try {
    return parse_rational(tok);
  } catch (const std::invalid_argument& e) {
    throw ParseError(t.line(), e.what());
  }
}

Expression parse_expression(Tokens& t);

std::vector<Expression> parse_arg_list(Tokens& t) {
  std::vector<Expression> args;
  t.expect("(");
  if (!t.accept(")")) {
    for (;;) {
      args.push_back(parse_expression(t));
      if (t.accept(")")) break;
      t.expect(",");
    }
  }
  return args;
}

Expression parse_table(Tokens& t, std::vector<std::string> implied_inputs_sentinel) {
  std::vector<std::string> inputs = std::move(implied_inputs_sentinel);
  bool explicit_inputs = false;
  if (t.accept("[")) {
    explicit_inputs = true;
    inputs.clear();
    for (;;) {
      const std::string name = t.next();
      if (!ident_start(name[0])) throw ParseError(t.line(), "expected an input name");
      inputs.push_back(name);
      if (t.accept("]")) break;
      t.expect(",");
    }
  }
  (void)explicit_inputs;
  t.expect("{");
  std::map<std::vector<int>, int> rows;
  if (!t.accept("}")) {
    for (;;) {
      t.expect("(");
      std::vector<int> key;
      if (!t.accept(")")) {
        for (;;) {
          key.push_back(parse_unsigned(t, "a table key value"));
          if (t.accept(")")) break;
          t.expect(",");
        }
      }
      t.expect(":");
      const int value = parse_unsigned(t, "a table value");
      if (!rows.emplace(std::move(key), value).second) {
        throw ParseError(t.line(), "duplicate table key");
      }
      if (t.accept("}")) break;
      t.expect(",");
    }
  }
  return Expression::table(std::move(inputs), std::move(rows));
}

// `implied` carries the parents in declaration order for bare table{...}.
Expression parse_expression_with_table_inputs(Tokens& t,
                                              const std::vector<std::string>& implied);

Expression parse_expression(Tokens& t) {
  return parse_expression_with_table_inputs(t, {});
}

Expression parse_expression_with_table_inputs(Tokens& t,
                                              const std::vector<std::string>& implied) {
  const std::string tok = t.next();
  if (is_unsigned_int(tok)) return Expression::constant(std::stoi(tok));
  if (!ident_start(tok[0])) {
    throw ParseError(t.line(), "expected an expression, found '" + tok + "'");
  }
  if (tok == "xor") return Expression::xor_of(parse_arg_list(t));
  if (tok == "and") return Expression::and_of(parse_arg_list(t));
  if (tok == "or") return Expression::or_of(parse_arg_list(t));
  if (tok == "not") {
    auto args = parse_arg_list(t);
    if (args.size() != 1) throw ParseError(t.line(), "not() takes one argument");
    return Expression::not_of(std::move(args.front()));
  }
  if (tok == "table") return parse_table(t, implied);
  if (!t.done() && t.peek() == "(") {
    throw ParseError(t.line(), "unknown operator '" + tok + "'");
  }
  return Expression::ref(tok);
}

struct RawNode {
  int line;
  std::string name;
  NodeKind kind;
  int alphabet;
};
struct RawEdge {
  int line;
  std::string from, to;
};
struct RawEntry {
  int line;
  std::string name;
  std::string rhs;
};

}  // namespace

ParsedModel parse_model(const std::string& text) {
  std::vector<RawNode> nodes;
  std::vector<RawEdge> edges;
  std::vector<RawEntry> mech_lines, noise_lines, embed_lines;
  std::optional<int> embedding_dim;
  int embedding_line = 0;

  enum class Section { None, Nodes, Edges, Mechanisms, Noise, Embedding };
  Section section = Section::None;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = strip(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
      std::istringstream hdr(line.substr(1, line.size() - 2));
      std::string name;
      hdr >> name;
      if (name == "nodes") {
        section = Section::Nodes;
      } else if (name == "edges") {
        section = Section::Edges;
      } else if (name == "mechanisms") {
        section = Section::Mechanisms;
      } else if (name == "noise") {
        section = Section::Noise;
      } else if (name == "embedding") {
        section = Section::Embedding;
        std::string attr;
        if (!(hdr >> attr) || attr.rfind("dim=", 0) != 0 ||
            !is_unsigned_int(attr.substr(4))) {
          throw ParseError(lineno, "embedding header needs dim=<d>");
        }
        embedding_dim = std::stoi(attr.substr(4));
        embedding_line = lineno;
        if (*embedding_dim < 1) throw ParseError(lineno, "embedding dim must be >= 1");
      } else {
        throw ParseError(lineno, "unknown section '" + name + "'");
      }
      std::string tail;
      if (section != Section::Embedding && (hdr >> tail)) {
        throw ParseError(lineno, "unexpected '" + tail + "' in section header");
      }
      continue;
    }

    switch (section) {
      case Section::None:
        throw ParseError(lineno, "content before any section header");
      case Section::Nodes: {
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream ls(cleaned);
        std::string name, kind, alpha;
        if (!(ls >> name >> kind >> alpha)) {
          throw ParseError(lineno, "node line needs: NAME observed|latent alphabet=K");
        }
        std::string tail;
        if (ls >> tail) throw ParseError(lineno, "unexpected '" + tail + "'");
        NodeKind k;
        if (kind == "observed") {
          k = NodeKind::Observed;
        } else if (kind == "latent") {
          k = NodeKind::Latent;
        } else {
          throw ParseError(lineno, "node kind must be observed or latent");
        }
        if (alpha.rfind("alphabet=", 0) != 0 || !is_unsigned_int(alpha.substr(9))) {
          throw ParseError(lineno, "expected alphabet=K");
        }
        const int size = std::stoi(alpha.substr(9));
        if (size < 1) throw ParseError(lineno, "alphabet must be >= 1");
        nodes.push_back({lineno, name, k, size});
        break;
      }
      case Section::Edges: {
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) throw ParseError(lineno, "edge line needs ->");
        const std::string from = strip(line.substr(0, arrow));
        const std::string to = strip(line.substr(arrow + 2));
        if (from.empty() || to.empty()) throw ParseError(lineno, "edge endpoints missing");
        edges.push_back({lineno, from, to});
        break;
      }
      case Section::Mechanisms:
      case Section::Embedding: {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected NAME = ...");
        RawEntry entry{lineno, strip(line.substr(0, eq)), strip(line.substr(eq + 1))};
        if (entry.name.empty() || entry.rhs.empty()) {
          throw ParseError(lineno, "expected NAME = ...");
        }
        (section == Section::Mechanisms ? mech_lines : embed_lines).push_back(entry);
        break;
      }
      case Section::Noise: {
        const auto tilde = line.find('~');
        if (tilde == std::string::npos) throw ParseError(lineno, "expected NAME ~ ...");
        RawEntry entry{lineno, strip(line.substr(0, tilde)), strip(line.substr(tilde + 1))};
        if (entry.name.empty() || entry.rhs.empty()) {
          throw ParseError(lineno, "expected NAME ~ ...");
        }
        noise_lines.push_back(entry);
        break;
      }
    }
  }

  // Nodes and edges.
  std::map<std::string, int> node_index;
  std::vector<Node> graph_nodes;
  for (const auto& n : nodes) {
    if (node_index.count(n.name)) {
      throw ParseError(n.line, "duplicate node '" + n.name + "'");
    }
    node_index[n.name] = static_cast<int>(graph_nodes.size());
    graph_nodes.push_back({n.name, n.alphabet, n.kind});
  }
  std::vector<std::pair<std::string, std::string>> graph_edges;
  {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : edges) {
      if (!node_index.count(e.from)) {
        throw ParseError(e.line, "unknown node '" + e.from + "' in edge");
      }
      if (!node_index.count(e.to)) {
        throw ParseError(e.line, "unknown node '" + e.to + "' in edge");
      }
      if (e.from == e.to) throw ParseError(e.line, "self-loop on '" + e.from + "'");
      if (!seen.emplace(e.from, e.to).second) {
        throw ParseError(e.line, "duplicate edge " + e.from + " -> " + e.to);
      }
      graph_edges.emplace_back(e.from, e.to);
    }
  }
  Graph graph(graph_nodes, graph_edges);

  // Noise declarations; uniform alphabets are resolved against the node that
  // reads the variable, after mechanisms are parsed.
  struct PendingNoise {
    int line;
    bool uniform;
    std::vector<Rational> probabilities;
  };
  std::map<std::string, PendingNoise> noise_decl;
  std::vector<std::string> noise_order;
  for (const auto& n : noise_lines) {
    if (node_index.count(n.name)) {
      throw ParseError(n.line, "noise '" + n.name + "' collides with a node");
    }
    if (noise_decl.count(n.name)) {
      throw ParseError(n.line, "duplicate noise '" + n.name + "'");
    }
    PendingNoise pending{n.line, false, {}};
    if (n.rhs == "uniform") {
      pending.uniform = true;
    } else {
      Tokens t(n.rhs, n.line);
      t.expect("(");
      for (;;) {
        pending.probabilities.push_back(parse_rational_token(t));
        if (t.accept(")")) break;
        t.expect(",");
      }
      if (!t.done()) throw ParseError(n.line, "trailing tokens after noise tuple");
      Rational sum = 0;
      for (const auto& p : pending.probabilities) {
        if (p < 0) throw ParseError(n.line, "negative noise probability");
        sum += p;
      }
      if (sum != 1) throw ParseError(n.line, "noise '" + n.name + "' is not normalized");
    }
    noise_decl.emplace(n.name, std::move(pending));
    noise_order.push_back(n.name);
  }

  // Mechanisms.
  std::map<std::string, std::pair<int, Expression>> mech_by_node;
  std::map<std::string, std::string> noise_reader;  // noise -> node
  for (const auto& mline : mech_lines) {
    if (!node_index.count(mline.name)) {
      throw ParseError(mline.line, "mechanism for unknown node '" + mline.name + "'");
    }
    if (mech_by_node.count(mline.name)) {
      throw ParseError(mline.line, "duplicate mechanism for '" + mline.name + "'");
    }
    const int idx = node_index.at(mline.name);
    std::vector<std::string> implied;
    for (int p : graph.parents(idx)) implied.push_back(graph.node(p).name);

    Tokens t(mline.rhs, mline.line);
    Expression expr = parse_expression_with_table_inputs(t, implied);
    if (!t.done()) throw ParseError(mline.line, "trailing tokens after expression");

    std::set<std::string> parent_names(implied.begin(), implied.end());
    std::optional<std::string> noise_ref;
    for (const auto& r : expr.referenced_names()) {
      if (parent_names.count(r)) continue;
      const auto decl = noise_decl.find(r);
      if (decl == noise_decl.end()) {
        throw ParseError(mline.line, "mechanism for '" + mline.name + "' references '" +
                                         r + "', which is neither a parent nor noise");
      }
      if (noise_ref) {
        throw ParseError(mline.line,
                         "mechanism for '" + mline.name + "' reads two noise variables");
      }
      noise_ref = r;
    }
    for (const auto& p : parent_names) {
      if (!expr.referenced_names().count(p)) {
        throw ParseError(mline.line,
                         "mechanism for '" + mline.name + "' ignores parent '" + p + "'");
      }
    }
    if (noise_ref) {
      const auto [it, fresh] = noise_reader.emplace(*noise_ref, mline.name);
      if (!fresh) {
        throw ParseError(mline.line, "noise '" + *noise_ref + "' already feeds '" +
                                         it->second + "'");
      }
    }
    mech_by_node.emplace(mline.name, std::make_pair(mline.line, std::move(expr)));
  }
  for (const auto& n : nodes) {
    if (!mech_by_node.count(n.name)) {
      throw ParseError(n.line, "node '" + n.name + "' has no mechanism");
    }
  }
  for (const auto& name : noise_order) {
    if (!noise_reader.count(name)) {
      throw ParseError(noise_decl.at(name).line, "noise '" + name + "' feeds no mechanism");
    }
  }

  std::vector<Mechanism> mechanisms;
  for (const auto& n : nodes) {
    mechanisms.push_back({n.name, mech_by_node.at(n.name).second, std::nullopt});
  }
  std::vector<NoiseSpec> noise_specs;
  for (const auto& name : noise_order) {
    const auto& pending = noise_decl.at(name);
    if (pending.uniform) {
      const int k = graph.node(graph.index_of(noise_reader.at(name))).alphabet_size;
      noise_specs.push_back(
          {name, std::vector<Rational>(static_cast<std::size_t>(k), Rational(1, k))});
    } else {
      noise_specs.push_back({name, pending.probabilities});
    }
  }

  std::optional<Embedding> embedding;
  if (embedding_dim) {
    Embedding e;
    e.dim = *embedding_dim;
    for (const auto& entry : embed_lines) {
      if (!node_index.count(entry.name)) {
        throw ParseError(entry.line, "embedding names unknown node '" + entry.name + "'");
      }
      if (graph.node(node_index.at(entry.name)).kind != NodeKind::Observed) {
        throw ParseError(entry.line,
                         "embedding locations are for observed nodes; '" + entry.name +
                             "' is latent");
      }
      if (e.locations.count(entry.name)) {
        throw ParseError(entry.line, "duplicate location for '" + entry.name + "'");
      }
      Tokens t(entry.rhs, entry.line);
      t.expect("(");
      std::vector<Rational> coords;
      for (;;) {
        coords.push_back(parse_rational_token(t));
        if (t.accept(")")) break;
        t.expect(",");
      }
      if (!t.done()) throw ParseError(entry.line, "trailing tokens after location");
      if (static_cast<int>(coords.size()) != *embedding_dim + 1) {
        throw ParseError(entry.line, "location needs dim+1 coordinates");
      }
      SpacetimePoint p{coords.front(), {coords.begin() + 1, coords.end()}};
      e.locations.emplace(entry.name, std::move(p));
    }
    embedding = std::move(e);
  } else if (!embed_lines.empty()) {
    throw ParseError(embed_lines.front().line, "embedding entries outside [embedding]");
  }

  try {
    CausalModel model(std::move(graph), std::move(mechanisms), std::move(noise_specs));
    return ParsedModel{std::move(model), std::move(embedding)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());  // parser checks above should have caught it
  }
}

namespace {

std::string render_mechanism(const CausalModel& model, int idx) {
  const Expression& expr = model.mechanism(idx).expr;
  if (expr.kind() != Expression::Kind::Table) return expr.render();
  // Bare table{...} when the inputs are exactly the parents in declaration
  // order; the explicit form otherwise.
  std::vector<std::string> implied;
  for (int p : model.graph().parents(idx)) implied.push_back(model.graph().node(p).name);
  std::string rendered = expr.render();
  if (expr.table_inputs() == implied) {
    const auto open = rendered.find('{');
    return "table" + rendered.substr(open);
  }
  return rendered;
}

}  // namespace

std::string serialize_model(const CausalModel& model,
                            const std::optional<Embedding>& embedding) {
  const Graph& g = model.graph();
  std::ostringstream out;
  out << "[nodes]\n";
  for (const auto& n : g.nodes()) {
    out << n.name << ' ' << (n.kind == NodeKind::Observed ? "observed" : "latent")
        << " alphabet=" << n.alphabet_size << '\n';
  }
  out << "\n[edges]\n";
  for (const auto& [p, c] : g.edges()) {
    out << g.node(p).name << " -> " << g.node(c).name << '\n';
  }
  out << "\n[mechanisms]\n";
  for (int i = 0; i < g.size(); ++i) {
    out << g.node(i).name << " = " << render_mechanism(model, i) << '\n';
  }
  if (!model.noise().empty()) {
    out << "\n[noise]\n";
    // Canonical order: by the declaration index of the reading node.
    std::vector<std::pair<int, const NoiseSpec*>> ordered;
    for (const auto& spec : model.noise()) {
      int reader = -1;
      for (int i = 0; i < g.size(); ++i) {
        const auto& np = model.mechanism(i).noise_parent;
        if (np && *np == spec.name) {
          reader = i;
          break;
        }
      }
      ordered.emplace_back(reader, &spec);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [reader, spec] : ordered) {
      (void)reader;
      out << spec->name << " ~ ";
      const Rational share(1, static_cast<int>(spec->probabilities.size()));
      const bool uniform = std::all_of(spec->probabilities.begin(),
                                       spec->probabilities.end(),
                                       [&](const Rational& p) { return p == share; });
      if (uniform) {
        out << "uniform";
      } else {
        out << '(';
        for (std::size_t i = 0; i < spec->probabilities.size(); ++i) {
          if (i) out << ", ";
          out << format_fraction(spec->probabilities[i]);
        }
        out << ')';
      }
      out << '\n';
    }
  }
  if (embedding) {
    out << "\n[embedding dim=" << embedding->dim << "]\n";
    for (const auto& n : g.nodes()) {
      const auto it = embedding->locations.find(n.name);
      if (it == embedding->locations.end()) continue;
      out << n.name << " = (" << format_number(it->second.t);
      for (const auto& c : it->second.x) out << ", " << format_number(c);
      out << ")\n";
    }
  }
  return out.str();
}

}  // namespace causalkit
