#include "gazemark/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include "gazemark/csv.hpp"
#include "gazemark/error.hpp"

namespace gazemark::ingest {

namespace {

constexpr const char* kGazeColumns[] = {
    "participant_id", "stimulus_id",   "t_ms",       "x_px",      "y_px",
    "pupil_left_mm",  "pupil_right_mm", "valid_left", "valid_right"};
constexpr std::size_t kGazeColumnCount = 9;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void check_header(const std::vector<std::string>& header, const char* const* expected,
                  std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const bool present =
        std::find(header.begin(), header.end(), expected[i]) != header.end();
    if (!present) {
      throw Error(ErrorCode::MissingColumn, std::string("header lacks '") + expected[i] + "'");
    }
  }
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

ParseResult parse_gaze_csv(std::istream& in, const ScreenGeometry& geometry) {
  geometry.validate();

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "no header line");
  const auto header = csv::split_line(line);
  check_header(header, kGazeColumns, kGazeColumnCount);

  std::size_t col[kGazeColumnCount];
  for (std::size_t i = 0; i < kGazeColumnCount; ++i) col[i] = column_index(header, kGazeColumns[i]);

  // group rows by (participant, stimulus); order of first appearance is not
  // meaningful, output is sorted
  std::map<std::pair<std::string, std::string>, GazeRecording> groups;

  ParseResult result;
  std::size_t line_no = 1;
  bool any_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    any_row = true;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size()) {
      ++result.rows_rejected;
      result.issues.push_back("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(cells.size()));
      continue;
    }
    GazeSample s;
    std::string participant = csv::trim(cells[col[0]]);
    std::string stimulus = csv::trim(cells[col[1]]);
    try {
      if (participant.empty() || stimulus.empty()) {
        throw Error(ErrorCode::BadValue, "empty participant or stimulus id");
      }
      s.t_ms = csv::parse_double(cells[col[2]]);
      s.x_px = csv::parse_double(cells[col[3]]);
      s.y_px = csv::parse_double(cells[col[4]]);
      s.pupil_left_mm = csv::parse_optional_double(cells[col[5]]);
      s.pupil_right_mm = csv::parse_optional_double(cells[col[6]]);
      s.valid_left = csv::parse_bool01(cells[col[7]]);
      s.valid_right = csv::parse_bool01(cells[col[8]]);
      if (s.valid() && (s.x_px < 0.0 || s.x_px > geometry.width_px || s.y_px < 0.0 ||
                        s.y_px > geometry.height_px)) {
        throw Error(ErrorCode::BadValue, "valid sample off screen");
      }
      for (const auto& pupil : {s.pupil_left_mm, s.pupil_right_mm}) {
        if (pupil && (*pupil <= 0.0 || *pupil >= 12.0)) {
          throw Error(ErrorCode::BadValue, "pupil diameter outside (0, 12) mm");
        }
      }
    } catch (const Error& e) {
      ++result.rows_rejected;
      result.issues.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }

    auto& rec = groups[{participant, stimulus}];
    if (rec.samples.empty()) {
      rec.participant_id = participant;
      rec.stimulus_id = stimulus;
    } else if (s.t_ms <= rec.samples.back().t_ms) {
      throw Error(ErrorCode::NonMonotoneTime,
                  "line " + std::to_string(line_no) + ": t_ms " + csv::format_double(s.t_ms) +
                      " not after " + csv::format_double(rec.samples.back().t_ms) +
                      " within group (" + participant + ", " + stimulus + ")");
    }
    rec.samples.push_back(s);
    ++result.rows_accepted;
  }

  if (!any_row) throw Error(ErrorCode::EmptyInput, "no data rows");

  result.recordings.reserve(groups.size());
  for (auto& [key, rec] : groups) result.recordings.push_back(std::move(rec));
  return result;
}

std::vector<ParticipantMeta> parse_participant_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "no header line");
  const auto header = csv::split_line(line);
  constexpr const char* kMetaColumns[] = {"participant_id", "age", "gender", "label"};
  check_header(header, kMetaColumns, 4);
  std::size_t col[4];
  for (std::size_t i = 0; i < 4; ++i) col[i] = column_index(header, kMetaColumns[i]);

  std::vector<ParticipantMeta> out;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::SchemaError, "metadata row with wrong field count: " + line);
    }
    ParticipantMeta m;
    m.id = csv::trim(cells[col[0]]);
    m.age = static_cast<int>(csv::parse_long(cells[col[1]]));
    m.gender = gender_from_string(csv::trim(cells[col[2]]));
    m.label = label_from_string(csv::trim(cells[col[3]]));
    out.push_back(std::move(m));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "no participant rows");
  return out;
}

std::map<std::string, ParticipantMeta> meta_by_id(std::span<const ParticipantMeta> metas) {
  std::map<std::string, ParticipantMeta> out;
  for (const auto& m : metas) out[m.id] = m;
  return out;
}

void write_gaze_csv(std::ostream& out, std::span<const GazeRecording> recordings) {
  out << "participant_id,stimulus_id,t_ms,x_px,y_px,pupil_left_mm,pupil_right_mm,"
         "valid_left,valid_right\n";
  for (const auto& rec : recordings) {
    for (const auto& s : rec.samples) {
      const std::string cells[] = {rec.participant_id,
                                   rec.stimulus_id,
                                   csv::format_double(s.t_ms),
                                   csv::format_double(s.x_px),
                                   csv::format_double(s.y_px),
                                   csv::format_optional(s.pupil_left_mm),
                                   csv::format_optional(s.pupil_right_mm),
                                   s.valid_left ? "1" : "0",
                                   s.valid_right ? "1" : "0"};
      out << csv::join_row(cells);
    }
  }
}

void write_participant_csv(std::ostream& out, std::span<const ParticipantMeta> metas) {
  out << "participant_id,age,gender,label\n";
  for (const auto& m : metas) {
    const std::string cells[] = {m.id, std::to_string(m.age), to_string(m.gender),
                                 to_string(m.label)};
    out << csv::join_row(cells);
  }
}

PointDeg pixels_to_degrees(PointPx p, const ScreenGeometry& g) {
  const double dx_cm = (p.x - 0.5 * g.width_px) * g.pitch_x_cm();
  const double dy_cm = (p.y - 0.5 * g.height_px) * g.pitch_y_cm();
  return {std::atan(dx_cm / g.viewing_distance_cm) * kRadToDeg,
          std::atan(dy_cm / g.viewing_distance_cm) * kRadToDeg};
}

PointPx degrees_to_pixels(PointDeg p, const ScreenGeometry& g) {
  const double dx_cm = std::tan(p.x / kRadToDeg) * g.viewing_distance_cm;
  const double dy_cm = std::tan(p.y / kRadToDeg) * g.viewing_distance_cm;
  return {dx_cm / g.pitch_x_cm() + 0.5 * g.width_px, dy_cm / g.pitch_y_cm() + 0.5 * g.height_px};
}

GazeRecording validate_and_interpolate(const GazeRecording& r, double max_gap_ms) {
  if (max_gap_ms < 0.0) throw Error(ErrorCode::BadValue, "max_gap_ms must be >= 0");
  GazeRecording out = r;
  auto& s = out.samples;
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (s[i].valid()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !s[j].valid()) ++j;
    // invalid run [i, j); interpolate only between two valid neighbours
    if (i > 0 && j < n) {
      const GazeSample& a = s[i - 1];
      const GazeSample& b = s[j];
      if (b.t_ms - a.t_ms < max_gap_ms) {
        for (std::size_t k = i; k < j; ++k) {
          const double f = (s[k].t_ms - a.t_ms) / (b.t_ms - a.t_ms);
          s[k].x_px = a.x_px + f * (b.x_px - a.x_px);
          s[k].y_px = a.y_px + f * (b.y_px - a.y_px);
          s[k].interpolated = true;
        }
      }
    }
    i = j;
  }
  return out;
}

DegreeRecording to_degrees(const GazeRecording& r, const ScreenGeometry& g) {
  DegreeRecording out;
  out.participant_id = r.participant_id;
  out.stimulus_id = r.stimulus_id;
  out.nominal_rate_hz = r.nominal_rate_hz;
  out.samples.reserve(r.samples.size());
  for (const auto& s : r.samples) {
    DegreeSample d;
    d.t_ms = s.t_ms;
    d.pos = pixels_to_degrees({s.x_px, s.y_px}, g);
    d.usable = s.has_position();
    d.interpolated = s.interpolated;
    d.pupil_left_mm = s.pupil_left_mm;
    d.pupil_right_mm = s.pupil_right_mm;
    out.samples.push_back(d);
  }
  return out;
}

}  // namespace gazemark::ingest
