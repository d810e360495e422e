#pragma once

#include <stdexcept>
#include <string>

namespace opml {

/// Base class for every error raised by the library. `module()` names the
/// subsystem that failed so the CLI can attribute diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string module, const std::string& what, double residual)
      : Error(std::move(module), what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class RetractionError : public Error {
 public:
  using Error::Error;
};

class FeasibilityError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class PipelineError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace opml
