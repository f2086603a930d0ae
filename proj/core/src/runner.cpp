#include "causalkit/runner.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causalkit {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParsedModel load(const std::string& path) { return parse_model(slurp(path)); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string strip_ws(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::set<std::string> parse_name_set(const std::string& text) {
  std::set<std::string> out;
  if (strip_ws(text).empty()) return out;
  for (const auto& item : split(text, ',')) {
    const std::string name = strip_ws(item);
    if (name.empty()) throw std::runtime_error("empty name in set '" + text + "'");
    out.insert(name);
  }
  return out;
}

std::string machine_table(const JointDistribution& dist) {
  std::ostringstream out;
  for (std::size_t idx = 0; idx < dist.table_size(); ++idx) {
    if (dist.probability_at(idx) == 0) continue;
    const auto values = dist.values_at(idx);
    out << "assignment=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ',';
      out << values[i];
    }
    out << " p=" << format_fraction(dist.probability_at(idx)) << '\n';
  }
  return out.str();
}

std::string render_table(const JointDistribution& dist, ReportFormat format) {
  return format == ReportFormat::Machine ? machine_table(dist) : dist.serialize();
}

std::string render_mismatch_set(const std::set<std::string>& s) {
  std::string out;
  bool first = true;
  for (const auto& n : s) {
    if (!first) out += ',';
    first = false;
    out += n;
  }
  return out;
}

Experiment parse_experiment(const std::string& name) {
  if (name == "E1") return Experiment::E1;
  if (name == "E2") return Experiment::E2;
  throw std::runtime_error("experiment must be E1 or E2");
}

int apply_expectation(const std::optional<std::string>& expect,
                      const std::string& outcome, int default_code) {
  if (!expect) return default_code;
  return *expect == outcome ? 0 : 1;
}

RunResult dispatch(const RunConfig& config) {
  const auto& cmd = config.command;

  if (cmd == "solve") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    const SolveReport report = solve(parsed.model);
    std::ostringstream out;
    out << "method=";
    if (report.method == SolveMethod::Acyclic) {
      out << "acyclic";
    } else {
      out << "split:";
      for (std::size_t i = 0; i < report.split_nodes.size(); ++i) {
        if (i) out << ',';
        out << report.split_nodes[i];
      }
    }
    out << " weight=" << format_fraction(report.postselection_weight) << '\n'
        << render_table(report.distribution, config.format);
    return {0, out.str(), ""};
  }

  if (cmd == "dsep") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    const auto parts = split(config.dsep_query, '|');
    if (parts.size() != 2 && parts.size() != 3) {
      throw std::runtime_error("dsep query must be X|Y|Z (Z may be empty)");
    }
    const auto x = parse_name_set(parts[0]);
    const auto y = parse_name_set(parts[1]);
    const auto z = parts.size() == 3 ? parse_name_set(parts[2]) : std::set<std::string>{};
    const bool separated = d_separated(parsed.model.graph(), x, y, z);
    return {0, std::string("dsep=") + (separated ? "1" : "0") + "\n", ""};
  }

  if (cmd == "affects") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    const AffectsSet set =
        enumerate_affects(parsed.model, config.max_size, config.model_paths.at(0));
    std::ostringstream out;
    for (const auto& rel : set.relations) {
      if (config.format == ReportFormat::Machine) out << "relation=";
      out << rel.render() << '\n';
    }
    return {0, out.str(), ""};
  }

  if (cmd == "certify") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    const AffectsSet set =
        enumerate_affects(parsed.model, config.max_size, config.model_paths.at(0));
    const CycleCertificate cert = certify_cycle(set);
    const bool cyclic = cert.verdict == CycleVerdict::CyclicCertified;
    const int code = apply_expectation(config.expect, cyclic ? "cyclic" : "dag",
                                       cyclic ? 1 : 0);
    return {code, cert.serialize(), ""};
  }

  if (cmd == "embed-check") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    if (!parsed.embedding) {
      throw std::runtime_error("model file has no [embedding] section");
    }
    const AffectsSet set =
        enumerate_affects(parsed.model, config.max_size, config.model_paths.at(0));
    const EmbeddingReport report = check_embedding(set, *parsed.embedding, config.policy,
                                                   config.allow_coincident);
    std::ostringstream out;
    if (config.format == ReportFormat::Machine) {
      for (const auto& v : report.violations) {
        out << "relation=" << v.relation << " kind=" << v.kind;
        if (v.witness) out << " witness=" << v.witness->render();
        out << '\n';
      }
      out << "compatible=" << (report.compatible ? 1 : 0) << '\n';
    } else {
      out << report.serialize();
    }
    const int code =
        apply_expectation(config.expect, report.compatible ? "compatible" : "incompatible",
                          report.compatible ? 0 : 1);
    return {code, out.str(), ""};
  }

  if (cmd == "simulate") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    if (!config.seed) throw std::runtime_error("simulate requires --seed");
    if (config.samples < 1) throw std::runtime_error("simulate requires --samples >= 1");
    const SimulationReport report =
        simulate_protocol(parsed.model, parse_experiment(config.experiment),
                          config.samples, *config.seed);
    if (config.format == ReportFormat::Text) return {0, report.serialize(), ""};
    std::ostringstream out;
    out << "experiment=" << config.experiment << " samples=" << report.samples
        << " seed=" << report.seed << '\n';
    for (const auto& setting : report.settings) {
      out << "setting=";
      bool first = true;
      for (const auto& [name, value] : setting.intervention) {
        if (!first) out << ',';
        first = false;
        out << name << '=' << value;
      }
      out << '\n'
          << machine_table(setting.empirical)
          << "xor_fraction=" << format_fraction(setting.xor_match_fraction) << '\n';
    }
    return {0, out.str(), ""};
  }

  if (cmd == "finetuning") {
    const ParsedModel parsed = load(config.model_paths.at(0));
    const SolveReport solved = solve(parsed.model);
    std::set<std::string> observed;
    for (const auto& name : parsed.model.graph().observed_names()) observed.insert(name);
    const JointDistribution marg = marginal(solved.distribution, observed);
    const auto tuned = detect_fine_tuning(parsed.model.graph(), marg);
    const auto violations = check_dsep_property(parsed.model.graph(), marg);
    std::ostringstream out;
    for (const auto& t : tuned) {
      out << "finetuned=" << render_mismatch_set(t.x) << '|' << render_mismatch_set(t.y)
          << '|' << render_mismatch_set(t.z) << '\n';
    }
    for (const auto& v : violations) {
      out << "dsep-violation=" << render_mismatch_set(v.x) << '|'
          << render_mismatch_set(v.y) << '|' << render_mismatch_set(v.z) << '\n';
    }
    out << "finetuned_count=" << tuned.size() << " dsep_violations=" << violations.size()
        << '\n';
    return {tuned.empty() ? 0 : 1, out.str(), ""};
  }

  if (cmd == "compare") {
    if (config.model_paths.size() < 2) {
      throw std::runtime_error("compare needs at least two models");
    }
    const std::string report = compare_models(
        config.model_paths, parse_experiment(config.experiment), config.format);
    return {0, report, ""};
  }

  throw std::runtime_error("unknown command '" + cmd + "'");
}

}  // namespace

RunResult run(const RunConfig& config) {
  try {
    if (config.model_paths.empty()) throw std::runtime_error("no model file given");
    if (config.expect) {
      const auto& e = *config.expect;
      if (config.command == "certify") {
        if (e != "cyclic" && e != "dag") {
          throw std::runtime_error("--expect for certify takes cyclic|dag");
        }
      } else if (config.command == "embed-check") {
        if (e != "compatible" && e != "incompatible") {
          throw std::runtime_error("--expect for embed-check takes compatible|incompatible");
        }
      } else {
        throw std::runtime_error("--expect applies to certify and embed-check");
      }
    }
    return dispatch(config);
  } catch (const ParseError& e) {
    return {2, "", std::string(e.what()) + "\n"};
  } catch (const std::exception& e) {
    return {2, "", std::string(e.what()) + "\n"};
  }
}

std::string compare_models(const std::vector<std::string>& paths, Experiment experiment,
                           ReportFormat format) {
  struct Loaded {
    std::string path;
    ParsedModel parsed;
  };
  std::vector<Loaded> models;
  for (const auto& path : paths) models.push_back({path, load(path)});

  const Graph& first = models.front().parsed.model.graph();
  const auto observed = first.observed_names();
  for (const auto& m : models) {
    const auto other = m.parsed.model.graph().observed_names();
    if (other != observed) {
      throw std::runtime_error("models disagree on observed nodes");
    }
    for (const auto& name : observed) {
      if (m.parsed.model.graph().node(m.parsed.model.graph().index_of(name)).alphabet_size !=
          first.node(first.index_of(name)).alphabet_size) {
        throw std::runtime_error("models disagree on the alphabet of '" + name + "'");
      }
    }
  }

  const std::vector<std::string> targets =
      experiment == Experiment::E1 ? std::vector<std::string>{"A", "C"}
                                   : std::vector<std::string>{"B"};
  for (const auto& t : targets) first.index_of(t);  // must exist

  std::vector<int> sizes;
  for (const auto& t : targets) sizes.push_back(first.node(first.index_of(t)).alphabet_size);

  std::ostringstream out;
  out << "experiment=" << (experiment == Experiment::E1 ? "E1" : "E2")
      << " models=" << models.size() << '\n';

  std::vector<int> counter(targets.size(), 0);
  for (;;) {
    Assignment setting;
    std::set<std::string> nodes;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      setting[targets[i]] = counter[i];
      nodes.insert(targets[i]);
    }
    out << "setting do(";
    bool first_item = true;
    for (const auto& [name, value] : setting) {
      if (!first_item) out << ',';
      first_item = false;
      out << name << '=' << value;
    }
    out << ")\n";

    std::vector<JointDistribution> dists;
    for (const auto& m : models) {
      dists.push_back(post_intervention_distribution(m.parsed.model, {nodes, setting}));
      out << "model=" << m.path << '\n'
          << (format == ReportFormat::Machine ? machine_table(dists.back())
                                              : dists.back().serialize());
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (std::size_t j = i + 1; j < models.size(); ++j) {
        const Rational tv = tv_distance(dists[i], dists[j]);
        out << "tv " << models[i].path << ' ' << models[j].path << " = "
            << format_fraction(tv) << " flagged=" << (tv >= Rational(1, 4) ? 1 : 0)
            << '\n';
      }
    }

    std::size_t i = counter.size();
    for (; i-- > 0;) {
      if (++counter[i] < sizes[i]) break;
      counter[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out.str();
}

}  // namespace causalkit
