#ifndef NSCV_ERRORS_HPP
#define NSCV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nscv {

// All toolkit failures derive from Error and carry a stage tag so the CLI
// can emit machine-readable {stage, message} diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Bad parameters, bad configuration, bad files: exit code 2 territory.
class ValidationError : public Error {
 public:
  ValidationError(std::string stage, const std::string& message)
      : Error(std::move(stage), message) {}
};

// A computation that started from valid inputs went numerically wrong
// (divergence, NaN, unattainable resolution): exit code 3 territory.
class NumericalError : public Error {
 public:
  NumericalError(std::string stage, const std::string& message)
      : Error(std::move(stage), message) {}
};

}  // namespace nscv

#endif
