#include "causalkit/certify.hpp"
#include "causalkit/modelfile.hpp"
#include "causalkit/runner.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

namespace {

causalkit::ParsedModel load(const char* name) {
  std::ifstream in(std::string(CAUSALKIT_MODELS_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return causalkit::parse_model(buf.str());
}

void BM_SolveCyclic(benchmark::State& state) {
  const auto parsed = load("loop.model");
  for (auto _ : state) {
    benchmark::DoNotOptimize(causalkit::solve_cyclic(parsed.model));
  }
}
BENCHMARK(BM_SolveCyclic);

void BM_EnumerateAffects(benchmark::State& state) {
  const auto parsed = load("loop.model");
  for (auto _ : state) {
    benchmark::DoNotOptimize(causalkit::enumerate_affects(parsed.model, 2));
  }
}
BENCHMARK(BM_EnumerateAffects);

void BM_CertifyCycle(benchmark::State& state) {
  const auto parsed = load("loop.model");
  const auto set = causalkit::enumerate_affects(parsed.model, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(causalkit::certify_cycle(set));
  }
}
BENCHMARK(BM_CertifyCycle);

void BM_DSeparated(benchmark::State& state) {
  // Dense-ish 8-node graph stresses the simple-path enumeration.
  std::mt19937_64 rng(7);
  std::vector<causalkit::Node> nodes;
  for (int i = 0; i < 8; ++i) {
    nodes.push_back({"N" + std::to_string(i), 2, causalkit::NodeKind::Observed});
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i != j && rng() % 2) edges.emplace_back(nodes[i].name, nodes[j].name);
    }
  }
  const causalkit::Graph g(nodes, edges);
  for (auto _ : state) {
    benchmark::DoNotOptimize(causalkit::d_separated(g, {"N0"}, {"N7"}, {"N3", "N4"}));
  }
}
BENCHMARK(BM_DSeparated);

void BM_JointFutureProbe3D(benchmark::State& state) {
  using causalkit::Rational;
  const causalkit::SpacetimePoint a{0, {Rational(-1), Rational(0), Rational(0)}};
  const causalkit::SpacetimePoint c{0, {Rational(1), Rational(0), Rational(0)}};
  for (auto _ : state) {
    causalkit::JointFutureProbe probe({a, c});
    benchmark::DoNotOptimize(
        probe.future_contains({1, {Rational(0), Rational(0), Rational(0)}}));
  }
}
BENCHMARK(BM_JointFutureProbe3D);

}  // namespace

BENCHMARK_MAIN();
