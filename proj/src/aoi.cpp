#include "gazemark/aoi.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "gazemark/csv.hpp"
#include "gazemark/error.hpp"
#include "gazemark/ingest.hpp"

namespace gazemark::aoi {

std::string to_string(AoiKind k) {
  switch (k) {
    case AoiKind::Sentence: return "AOI1";
    case AoiKind::CriticalWord: return "AOI2";
    case AoiKind::DecisionLetter: return "AOI3";
  }
  return "AOI1";
}

AoiKind aoi_kind_from_string(const std::string& s) {
  if (s == "AOI1") return AoiKind::Sentence;
  if (s == "AOI2") return AoiKind::CriticalWord;
  if (s == "AOI3") return AoiKind::DecisionLetter;
  throw Error(ErrorCode::SchemaError, "unknown AOI kind '" + s + "'");
}

AoiSet AoiSet::load(std::istream& in, const ScreenGeometry& geometry) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "empty AOI file");
  const auto header = csv::split_line(line);
  const std::vector<std::string> expected = {"stimulus_id", "scene_id", "kind",
                                             "x_px",        "y_px",     "w_px", "h_px"};
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::SchemaError, "AOI header lacks '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t idx[7];
  for (std::size_t i = 0; i < expected.size(); ++i) idx[i] = col(expected[i]);

  std::vector<AoiRect> rects;
  std::map<std::string, std::string> scene_map;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::SchemaError, "AOI row with wrong field count: " + line);
    }
    AoiRect r;
    r.stimulus_id = csv::trim(cells[idx[0]]);
    const std::string scene = csv::trim(cells[idx[1]]);
    r.kind = aoi_kind_from_string(csv::trim(cells[idx[2]]));
    r.x_px = csv::parse_double(cells[idx[3]]);
    r.y_px = csv::parse_double(cells[idx[4]]);
    r.w_px = csv::parse_double(cells[idx[5]]);
    r.h_px = csv::parse_double(cells[idx[6]]);
    const auto it = scene_map.find(r.stimulus_id);
    if (it != scene_map.end() && it->second != scene) {
      throw Error(ErrorCode::SchemaError,
                  "stimulus " + r.stimulus_id + " mapped to two scenes");
    }
    scene_map[r.stimulus_id] = scene;
    rects.push_back(std::move(r));
  }
  return from_rects(std::move(rects), std::move(scene_map), geometry);
}

AoiSet AoiSet::from_rects(std::vector<AoiRect> rects, std::map<std::string, std::string> scene_map,
                          const ScreenGeometry& geometry) {
  AoiSet set;
  set.scene_map_ = std::move(scene_map);
  for (auto& r : rects) set.by_stimulus_[r.stimulus_id].push_back(std::move(r));
  set.validate(geometry);
  return set;
}

void AoiSet::validate(const ScreenGeometry& geometry) {
  if (by_stimulus_.empty()) throw Error(ErrorCode::SchemaError, "AOI set has no rects");
  for (auto& [stimulus, rects] : by_stimulus_) {
    std::set<AoiKind> kinds;
    for (const auto& r : rects) {
      if (r.w_px <= 0.0 || r.h_px <= 0.0) {
        throw Error(ErrorCode::SchemaError,
                    "non-positive rect size for " + stimulus + "/" + to_string(r.kind));
      }
      if (r.x_px < 0.0 || r.y_px < 0.0 || r.x_px + r.w_px > geometry.width_px ||
          r.y_px + r.h_px > geometry.height_px) {
        throw Error(ErrorCode::OutOfBounds,
                    "rect " + stimulus + "/" + to_string(r.kind) + " extends past screen bounds");
      }
      if (!kinds.insert(r.kind).second) {
        throw Error(ErrorCode::DuplicateAoi,
                    "duplicate " + to_string(r.kind) + " for stimulus " + stimulus);
      }
    }
    if (kinds.size() != 3) {
      throw Error(ErrorCode::SchemaError,
                  "stimulus " + stimulus + " must have exactly one rect of each kind");
    }
    if (scene_map_.find(stimulus) == scene_map_.end()) {
      throw Error(ErrorCode::SchemaError, "stimulus " + stimulus + " has no scene");
    }
    // stable hit-test order: smallest area first
    std::sort(rects.begin(), rects.end(), [](const AoiRect& a, const AoiRect& b) {
      if (a.area() != b.area()) return a.area() < b.area();
      return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
  }
}

bool AoiSet::has_stimulus(const std::string& stimulus_id) const {
  return by_stimulus_.find(stimulus_id) != by_stimulus_.end();
}

std::span<const AoiRect> AoiSet::rects(const std::string& stimulus_id) const {
  const auto it = by_stimulus_.find(stimulus_id);
  if (it == by_stimulus_.end()) {
    throw Error(ErrorCode::UnknownStimulus, "no AOIs for stimulus '" + stimulus_id + "'");
  }
  return it->second;
}

const std::string& AoiSet::scene_of(const std::string& stimulus_id) const {
  const auto it = scene_map_.find(stimulus_id);
  if (it == scene_map_.end()) {
    throw Error(ErrorCode::UnknownStimulus, "no scene for stimulus '" + stimulus_id + "'");
  }
  return it->second;
}

std::vector<std::string> AoiSet::stimulus_ids() const {
  std::vector<std::string> out;
  out.reserve(by_stimulus_.size());
  for (const auto& [id, rects] : by_stimulus_) out.push_back(id);
  return out;
}

std::map<std::string, std::vector<std::string>> AoiSet::scenes() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [stimulus, scene] : scene_map_) out[scene].push_back(stimulus);
  return out;
}

std::size_t AoiSet::total_rects() const {
  std::size_t n = 0;
  for (const auto& [id, rects] : by_stimulus_) n += rects.size();
  return n;
}

void AoiSet::write_csv(std::ostream& out) const {
  out << "stimulus_id,scene_id,kind,x_px,y_px,w_px,h_px\n";
  for (const auto& [stimulus, rects] : by_stimulus_) {
    // rows in kind order regardless of the area-sorted internal order
    std::vector<AoiRect> ordered = rects;
    std::sort(ordered.begin(), ordered.end(), [](const AoiRect& a, const AoiRect& b) {
      return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    for (const auto& r : ordered) {
      const std::string cells[] = {stimulus,
                                   scene_map_.at(stimulus),
                                   to_string(r.kind),
                                   csv::format_double(r.x_px),
                                   csv::format_double(r.y_px),
                                   csv::format_double(r.w_px),
                                   csv::format_double(r.h_px)};
      out << csv::join_row(cells);
    }
  }
}

std::optional<AoiRect> hit_test(PointPx p, std::span<const AoiRect> rects) {
  const AoiRect* best = nullptr;
  for (const auto& r : rects) {
    if (!r.contains(p)) continue;
    if (best == nullptr || r.area() < best->area()) best = &r;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::vector<MappedEvent> map_events_to_aois(std::span<const events::GazeEvent> evts,
                                            const AoiSet& aois, const std::string& stimulus_id,
                                            const ScreenGeometry& geometry,
                                            bool assign_saccade_by_landing) {
  const auto rects = aois.rects(stimulus_id);  // throws UnknownStimulus
  std::vector<MappedEvent> out;
  out.reserve(evts.size());
  for (const auto& e : evts) {
    PointDeg probe;
    if (const auto* f = events::as_fixation(e)) {
      probe = f->centroid_deg;
    } else {
      const auto* s = events::as_saccade(e);
      probe = assign_saccade_by_landing ? s->end_deg : s->start_deg;
    }
    const PointPx px = ingest::degrees_to_pixels(probe, geometry);
    const auto hit = hit_test(px, rects);
    out.push_back({e, hit ? std::optional<AoiKind>(hit->kind) : std::nullopt});
  }
  return out;
}

}  // namespace gazemark::aoi
