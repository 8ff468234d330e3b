#pragma once

#include <stdexcept>
#include <string>

namespace wigsim {

/// Invalid argument or configuration value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file; the message names the file and line.
class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The linear-program solver failed to converge or produced an inaccurate point.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal precondition (e.g. a channel gain that was never sampled).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wigsim
