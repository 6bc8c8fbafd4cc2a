#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gazemark/types.hpp"

namespace gazemark::events {

struct VelocitySample {
  double t_ms = 0.0;
  double speed_dps = 0.0;
  std::size_t sample_index = 0;
};

struct FixationEvent {
  double start_ms = 0.0;
  double end_ms = 0.0;
  double duration_ms = 0.0;
  PointDeg centroid_deg;
  double dispersion_deg = 0.0;  // RMS distance of samples to the centroid
  std::optional<double> mean_pupil_left_mm;
  std::optional<double> mean_pupil_right_mm;
  std::size_t n_samples = 0;
};

struct SaccadeEvent {
  double start_ms = 0.0;
  double end_ms = 0.0;
  double duration_ms = 0.0;
  double amplitude_deg = 0.0;       // planar distance between boundary positions
  double peak_velocity_dps = 0.0;
  double mean_velocity_dps = 0.0;
  PointDeg start_deg;               // launch position
  PointDeg end_deg;                 // landing position (used for AOI assignment)
};

enum class EventKind { Fixation, Saccade };

using GazeEvent = std::variant<FixationEvent, SaccadeEvent>;

inline EventKind kind_of(const GazeEvent& e) {
  return std::holds_alternative<FixationEvent>(e) ? EventKind::Fixation : EventKind::Saccade;
}
inline const FixationEvent* as_fixation(const GazeEvent& e) {
  return std::get_if<FixationEvent>(&e);
}
inline const SaccadeEvent* as_saccade(const GazeEvent& e) {
  return std::get_if<SaccadeEvent>(&e);
}
double start_ms(const GazeEvent& e);
double end_ms(const GazeEvent& e);
double duration_ms(const GazeEvent& e);

/// Velocity-threshold (I-VT) detector settings. The upstream study relied on
/// vendor software and reports no parameters, so these are conventional
/// defaults and everything is configurable.
struct DetectorParams {
  double velocity_threshold_dps = 30.0;
  double min_fixation_ms = 60.0;
  std::size_t min_saccade_samples = 2;
  double merge_angle_deg = 0.5;
  double merge_gap_ms = 75.0;
};

/// Central-difference angular speed over a 3-sample window; one-sided at the
/// edges of each contiguous usable run. Unusable samples yield no velocity.
/// Throws TooFewSamples when fewer than 3 usable samples exist.
std::vector<VelocitySample> compute_velocity_series(const DegreeRecording& r);

/// I-VT segmentation: samples at or above the threshold seed saccades, the
/// rest fixations; candidates shorter than the minima are absorbed into their
/// neighbours. Output is time-ordered, non-overlapping, and alternates kinds
/// within each usable run.
std::vector<GazeEvent> detect_events_ivt(const DegreeRecording& r, const DetectorParams& p);

/// Merges adjacent fixations closer than merge_angle_deg whose gap is below
/// merge_gap_ms (duration-weighted centroid, pooled dispersion; anything
/// between them is absorbed), then drops fixations still shorter than
/// min_fixation_ms.
std::vector<GazeEvent> merge_and_filter_events(std::vector<GazeEvent> evts,
                                               const DetectorParams& p);

/// detect + merge in one call; what the pipeline runs.
std::vector<GazeEvent> detect_and_merge(const DegreeRecording& r, const DetectorParams& p);

struct EventGroup {
  std::string participant_id;
  std::string stimulus_id;
  std::vector<GazeEvent> events;
};

// Export schema:
//   participant_id,stimulus_id,kind,start_ms,end_ms,duration_ms,x_deg,y_deg,
//   amplitude_deg,peak_velocity_dps,dispersion_deg,pupil_left_mm,pupil_right_mm
// Fixation rows leave saccade-only columns empty and vice versa; x/y carry the
// centroid for fixations and the landing point for saccades. An optional
// trailing `source` column is written when `source` is non-empty.
void write_events_csv(std::ostream& out, std::span<const EventGroup> groups,
                      const std::string& source = "");
std::vector<EventGroup> read_events_csv(std::istream& in);

/// Event-level F1 between a ground-truth list and a detected list: events
/// match when kinds agree and temporal overlap covers at least half of the
/// shorter event; greedy in time order, one-to-one.
double event_level_f1(std::span<const GazeEvent> truth, std::span<const GazeEvent> detected);

}  // namespace gazemark::events
