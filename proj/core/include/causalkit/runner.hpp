#pragma once

#include "causalkit/certify.hpp"
#include "causalkit/modelfile.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace causalkit {

enum class ReportFormat { Text, Machine };

struct RunConfig {
  std::string command;  // solve dsep affects certify embed-check simulate finetuning compare
  std::vector<std::string> model_paths;
  std::string dsep_query;  // "X|Y|Z", members comma-joined, Z may be empty
  int max_size = 2;
  EmbeddingPolicy policy = EmbeddingPolicy::Conservative;
  int samples = 0;
  std::optional<std::uint64_t> seed;  // required by simulate
  std::string experiment;             // "E1" or "E2"
  ReportFormat format = ReportFormat::Text;
  std::optional<std::string> expect;  // cyclic|dag|compatible|incompatible
  bool allow_coincident = false;
};

struct RunResult {
  int exit_code = 0;        // 0 ok, 1 violations/cyclic, 2 input errors
  std::string report;       // stdout payload; byte-stable per (input, config)
  std::string diagnostics;  // stderr payload
};

RunResult run(const RunConfig& config);

// Side-by-side exact post-intervention distributions for models sharing the
// observed interface, with pairwise total-variation distances; settings with
// TV >= 1/4 are flagged as operationally distinguishing.
std::string compare_models(const std::vector<std::string>& paths, Experiment experiment,
                           ReportFormat format = ReportFormat::Text);

}  // namespace causalkit
