#include "gazemark/error.hpp"

namespace gazemark {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorCode::TooFewSaccades: return "TooFewSaccades";
    case ErrorCode::DegenerateAmplitudeRange: return "DegenerateAmplitudeRange";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateAoi: return "DuplicateAoi";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::UnknownStimulus: return "UnknownStimulus";
    case ErrorCode::NoEvents: return "NoEvents";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::SingleClassScores: return "SingleClassScores";
    case ErrorCode::MissingAoi: return "MissingAoi";
    case ErrorCode::InconsistentCounts: return "InconsistentCounts";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace gazemark
