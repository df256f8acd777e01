#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvbfv {

enum class ErrorKind {
  ConfigMismatch,
  SchemeUnsupported,
  GradeMismatch,
  SingularMetric,
  DimensionUnsupported,
  MissingJets,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; the kind is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bvbfv
