#pragma once

#include "causalkit/model.hpp"
#include "causalkit/spacetime.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace causalkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ParsedModel {
  CausalModel model;
  std::optional<Embedding> embedding;
};

// Line-oriented declarative model format:
//
//   [nodes]        NAME observed|latent alphabet=K
//   [edges]        PARENT -> CHILD
//   [mechanisms]   NODE = expr     (int | name | xor/and/or/not(...) | table{...})
//   [noise]        E ~ uniform     or  E ~ (1/2, 1/2)
//   [embedding dim=d]   NODE = (t, x1, ..., xd)
//
// `#` starts a comment; whitespace around tokens is free. Table keys range
// over the node's parents in declaration order; `table[inputs]{...}` names
// the inputs explicitly. `uniform` takes its alphabet from the node whose
// mechanism reads the variable.
ParsedModel parse_model(const std::string& text);

// Canonical rendering; parse(serialize(parse(text))) == parse(text).
std::string serialize_model(const CausalModel& model,
                            const std::optional<Embedding>& embedding);

}  // namespace causalkit
