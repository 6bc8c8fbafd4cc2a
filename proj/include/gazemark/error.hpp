#pragma once

#include <stdexcept>
#include <string>

namespace gazemark {

enum class ErrorCode {
  // ingest
  MissingColumn,
  NonMonotoneTime,
  EmptyInput,
  // events
  TooFewSamples,
  // mainseq
  NegativeAmplitude,
  TooFewSaccades,
  DegenerateAmplitudeRange,
  // aoi
  SchemaError,
  DuplicateAoi,
  OutOfBounds,
  UnknownStimulus,
  // features
  NoEvents,
  EmptyTable,
  // ml
  TooFewInstances,
  BadK,
  EmptyGrid,
  SingleClassScores,
  // synth
  MissingAoi,
  // cohort stats
  InconsistentCounts,
  DegenerateVariance,
  // generic
  BadValue,
  IoError,
};

const char* to_string(ErrorCode code);

/// Domain error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gazemark
