#include "barriers/error.hpp"

namespace barriers {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::UnsupportedGrade: return "unsupported-grade";
    case ErrorCode::ZeroTangent: return "zero-tangent";
    case ErrorCode::InvalidDirection: return "invalid-direction";
    case ErrorCode::DegenerateFlag: return "degenerate-flag";
    case ErrorCode::InsufficientSampling: return "insufficient-sampling";
    case ErrorCode::NotOnQuadric: return "not-on-quadric";
    case ErrorCode::ChartDomain: return "chart-domain";
    case ErrorCode::ImmersionDegeneracy: return "immersion-degeneracy";
    case ErrorCode::Config: return "config";
    case ErrorCode::StalledFlow: return "stalled-flow";
  }
  return "unknown";
}

}  // namespace barriers
