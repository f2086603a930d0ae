#pragma once

#include "causalkit/model.hpp"
#include "causalkit/spacetime.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace causalkit;

inline NoiseSpec uniform_noise(const std::string& name, int alphabet = 2) {
  return {name, std::vector<Rational>(static_cast<std::size_t>(alphabet),
                                      Rational(1, alphabet))};
}

// A = E_A, C = E_C, B = A xor C.
inline CausalModel otp_model() {
  Graph g({{"A", 2, NodeKind::Observed},
           {"B", 2, NodeKind::Observed},
           {"C", 2, NodeKind::Observed}},
          {{"A", "B"}, {"C", "B"}});
  std::vector<Mechanism> mechanisms;
  mechanisms.push_back({"A", Expression::ref("E_A"), {}});
  mechanisms.push_back(
      {"B", Expression::xor_of({Expression::ref("A"), Expression::ref("C")}), {}});
  mechanisms.push_back({"C", Expression::ref("E_C"), {}});
  return CausalModel(std::move(g), std::move(mechanisms),
                     {uniform_noise("E_A"), uniform_noise("E_C")});
}

// Lambda = E_L, A = Lambda, B = E_B, C = B xor Lambda.
inline CausalModel jam_model() {
  Graph g({{"Lambda", 2, NodeKind::Latent},
           {"A", 2, NodeKind::Observed},
           {"B", 2, NodeKind::Observed},
           {"C", 2, NodeKind::Observed}},
          {{"Lambda", "A"}, {"Lambda", "C"}, {"B", "C"}});
  std::vector<Mechanism> mechanisms;
  mechanisms.push_back({"Lambda", Expression::ref("E_L"), {}});
  mechanisms.push_back({"A", Expression::ref("Lambda"), {}});
  mechanisms.push_back({"B", Expression::ref("E_B"), {}});
  mechanisms.push_back(
      {"C", Expression::xor_of({Expression::ref("B"), Expression::ref("Lambda")}), {}});
  return CausalModel(std::move(g), std::move(mechanisms),
                     {uniform_noise("E_L"), uniform_noise("E_B")});
}

// Lambda = E_L, A = Lambda, B = A xor C, C = B xor Lambda; B and C cycle.
inline CausalModel loop_model() {
  Graph g({{"Lambda", 2, NodeKind::Latent},
           {"A", 2, NodeKind::Observed},
           {"B", 2, NodeKind::Observed},
           {"C", 2, NodeKind::Observed}},
          {{"Lambda", "A"}, {"Lambda", "C"}, {"A", "B"}, {"B", "C"}, {"C", "B"}});
  std::vector<Mechanism> mechanisms;
  mechanisms.push_back({"Lambda", Expression::ref("E_L"), {}});
  mechanisms.push_back({"A", Expression::ref("Lambda"), {}});
  mechanisms.push_back(
      {"B", Expression::xor_of({Expression::ref("A"), Expression::ref("C")}), {}});
  mechanisms.push_back(
      {"C", Expression::xor_of({Expression::ref("B"), Expression::ref("Lambda")}), {}});
  return CausalModel(std::move(g), std::move(mechanisms), {uniform_noise("E_L")});
}

// The shared (1+1) fixture embedding: B at the apex of the joint future.
inline Embedding fixture_embedding() {
  Embedding e;
  e.dim = 1;
  e.locations.emplace("A", SpacetimePoint{0, {-1}});
  e.locations.emplace("B", SpacetimePoint{1, {0}});
  e.locations.emplace("C", SpacetimePoint{0, {1}});
  return e;
}

inline std::string models_dir() { return CAUSALKIT_MODELS_DIR; }

}  // namespace fixtures
