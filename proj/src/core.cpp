#include "hybridvar/core.hpp"

namespace hybridvar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveLengthScale: return "NonPositiveLengthScale";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::EnsembleTooSmall: return "EnsembleTooSmall";
    case ErrorCode::EnsembleTooLarge: return "EnsembleTooLarge";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::TooManyObservations: return "TooManyObservations";
    case ErrorCode::IncompatibleObservationCount: return "IncompatibleObservationCount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NearSingularBackground: return "NearSingularBackground";
    case ErrorCode::DegenerateInputs: return "DegenerateInputs";
    case ErrorCode::IndefiniteDetected: return "IndefiniteDetected";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::UnknownFigure: return "UnknownFigure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hybridvar
