#include "entland/error.hpp"

namespace entland {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_distribution: return "InvalidDistribution";
    case ErrorCode::range_too_narrow: return "RangeTooNarrow";
    case ErrorCode::degenerate_sample: return "DegenerateSample";
    case ErrorCode::non_smooth_kernel: return "NonSmoothKernel";
    case ErrorCode::underflow: return "Underflow";
    case ErrorCode::duplicate_locations: return "DuplicateLocations";
    case ErrorCode::not_unit_norm: return "NotUnitNorm";
    case ErrorCode::degenerate_marginal: return "DegenerateMarginal";
    case ErrorCode::neighborhood_contains_other_candidate: return "NeighborhoodContainsOtherCandidate";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace entland
