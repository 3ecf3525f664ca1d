#pragma once

#include <stdexcept>
#include <string>

namespace ecot {

// Raised when a caller breaks an operation's preconditions (shape mismatch,
// out-of-range argument).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed corpus or params input. Messages name the conversation id and
// field where known.
class CorpusFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecot
