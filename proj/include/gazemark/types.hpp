#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace gazemark {

struct PointPx {
  double x = 0.0;
  double y = 0.0;
};

/// Degrees of visual angle, origin at screen center, right/down positive.
struct PointDeg {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(PointDeg a, PointDeg b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(PointPx a, PointPx b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Monitor geometry used for pixel <-> visual-angle conversion.
/// Defaults model a 21-inch 4:3 monitor at 1280x1024 viewed from 60 cm.
struct ScreenGeometry {
  int width_px = 1280;
  int height_px = 1024;
  double width_cm = 43.2;
  double height_cm = 32.4;
  double viewing_distance_cm = 60.0;

  double pitch_x_cm() const { return width_cm / width_px; }
  double pitch_y_cm() const { return height_cm / height_px; }

  void validate() const;  // throws BadValue
};

enum class Gender { Female, Male, Other };
enum class Label { NonAdhd = 0, Adhd = 1 };  // Adhd is the positive class throughout

std::string to_string(Gender g);
std::string to_string(Label l);
Gender gender_from_string(const std::string& s);  // throws BadValue
Label label_from_string(const std::string& s);    // throws BadValue

struct ParticipantMeta {
  std::string id;
  int age = 0;
  Gender gender = Gender::Other;
  Label label = Label::NonAdhd;
};

struct GazeSample {
  double t_ms = 0.0;
  double x_px = 0.0;
  double y_px = 0.0;
  std::optional<double> pupil_left_mm;
  std::optional<double> pupil_right_mm;
  bool valid_left = false;
  bool valid_right = false;
  bool interpolated = false;  // filled in by dropout repair, never by the tracker

  bool valid() const { return valid_left || valid_right; }
  bool has_position() const { return valid() || interpolated; }
};

/// One (participant, stimulus) block of samples, strictly increasing in t_ms.
struct GazeRecording {
  std::string participant_id;
  std::string stimulus_id;
  std::vector<GazeSample> samples;
  double nominal_rate_hz = 60.0;
};

struct DegreeSample {
  double t_ms = 0.0;
  PointDeg pos;
  bool usable = false;  // valid or interpolated
  bool interpolated = false;
  std::optional<double> pupil_left_mm;
  std::optional<double> pupil_right_mm;
};

/// Degree-space view of a recording; what the event detector consumes.
struct DegreeRecording {
  std::string participant_id;
  std::string stimulus_id;
  std::vector<DegreeSample> samples;
  double nominal_rate_hz = 60.0;
};

}  // namespace gazemark
