#pragma once

#include <stdexcept>
#include <string>

namespace starcore {

// Bad user input: malformed files, out-of-range arguments, missing model
// properties. Mapped to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Request exceeds a documented desk-scale cap (truth table size, exhaustive
// search width, enumeration width). Mapped to CLI exit code 3.
struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated an operation precondition (e.g. passed an assignment
// that does not satisfy the instance).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// A sampler exhausted its retry budget.
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal cross-check failed. Mapped to CLI exit code 4.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace starcore
