#include "bvbfv/error.hpp"

namespace bvbfv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigMismatch: return "ConfigMismatch";
    case ErrorKind::SchemeUnsupported: return "SchemeUnsupported";
    case ErrorKind::GradeMismatch: return "GradeMismatch";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::MissingJets: return "MissingJets";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace bvbfv
