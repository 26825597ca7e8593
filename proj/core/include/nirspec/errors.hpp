#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nirspec {

/// Base of the library error taxonomy. Every failure surfaced to callers
/// carries a stable kind() name; the CLI prints it verbatim on stderr.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class EmptyDatasetError : public Error {
public:
  explicit EmptyDatasetError(const std::string& m) : Error("EmptyDataset", m) {}
};

class GridMismatchError : public Error {
public:
  explicit GridMismatchError(const std::string& m) : Error("GridMismatch", m) {}
};

class ZeroVarianceError : public Error {
public:
  explicit ZeroVarianceError(const std::string& m) : Error("ZeroVariance", m) {}
};

class InvalidConfigError : public Error {
public:
  explicit InvalidConfigError(const std::string& m) : Error("InvalidConfig", m) {}
};

/// A split, fold, or training set ended up with zero samples of one class.
class DegenerateClassError : public Error {
public:
  explicit DegenerateClassError(const std::string& m) : Error("DegenerateClass", m) {}
};

class ConvergenceFailureError : public Error {
public:
  explicit ConvergenceFailureError(const std::string& m) : Error("ConvergenceFailure", m) {}
};

/// I/O failures carry the offending path in the message.
class IoError : public Error {
public:
  explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace nirspec
