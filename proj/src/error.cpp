#include "xifm/error.hpp"

namespace xifm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Dimension: return "dimension error";
    case ErrorCode::Routing: return "routing error";
    case ErrorCode::Physicality: return "physicality error";
    case ErrorCode::Singularity: return "singularity error";
    case ErrorCode::NonInvertible: return "non-invertible";
    case ErrorCode::Resolution: return "resolution error";
    case ErrorCode::NoSolution: return "no solution";
    case ErrorCode::DegenerateInterval: return "degenerate interval";
  }
  return "unknown error";
}

}  // namespace xifm
