#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gazemark/types.hpp"

namespace gazemark::ingest {

// Gaze CSV schema (header required):
//   participant_id,stimulus_id,t_ms,x_px,y_px,pupil_left_mm,pupil_right_mm,valid_left,valid_right
// Empty fields allowed only for the pupil columns; booleans are 0/1.
// Participant metadata CSV: participant_id,age,gender,label

struct ParseResult {
  std::vector<GazeRecording> recordings;  // sorted by (participant_id, stimulus_id)
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::vector<std::string> issues;  // one line per rejected row
};

/// Parses a gaze log into one recording per (participant, stimulus) group.
/// Rows violating per-row invariants are rejected and reported, not dropped
/// silently. Throws MissingColumn, NonMonotoneTime, EmptyInput.
ParseResult parse_gaze_csv(std::istream& in, const ScreenGeometry& geometry);

std::vector<ParticipantMeta> parse_participant_csv(std::istream& in);

std::map<std::string, ParticipantMeta> meta_by_id(std::span<const ParticipantMeta> metas);

void write_gaze_csv(std::ostream& out, std::span<const GazeRecording> recordings);
void write_participant_csv(std::ostream& out, std::span<const ParticipantMeta> metas);

/// Pixel position -> degrees of visual angle, origin at screen center,
/// right/down positive: deg = atan(offset_cm / viewing_distance_cm).
PointDeg pixels_to_degrees(PointPx p, const ScreenGeometry& g);

/// Exact inverse of pixels_to_degrees.
PointPx degrees_to_pixels(PointDeg p, const ScreenGeometry& g);

/// Linearly interpolates invalid runs shorter than max_gap_ms (measured
/// between the bracketing valid samples) and flags them; longer runs and
/// runs touching the recording edges stay invalid. Sample count unchanged.
GazeRecording validate_and_interpolate(const GazeRecording& r, double max_gap_ms);

DegreeRecording to_degrees(const GazeRecording& r, const ScreenGeometry& g);

inline constexpr double kDefaultMaxGapMs = 75.0;

}  // namespace gazemark::ingest
