#pragma once

#include <stdexcept>
#include <string>

namespace zo {

// CLI exit codes: 0 success, 2 config error, 3 numerical error, 4 data/schema error.
enum class ExitCode : int { ok = 0, config = 2, numerical = 3, data = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated precondition of a library operation.
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise malformed numeric input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& msg, double residual = 0.0,
                 long long iteration = -1)
      : std::runtime_error(msg), residual(residual), iteration(iteration) {}
  double residual;
  long long iteration;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return ExitCode::numerical;
  if (dynamic_cast<const DataError*>(&e)) return ExitCode::data;
  return ExitCode::config;
}

}  // namespace zo
