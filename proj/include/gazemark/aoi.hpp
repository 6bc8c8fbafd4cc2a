#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazemark/events.hpp"
#include "gazemark/types.hpp"

namespace gazemark::aoi {

/// The three static regions drawn on every sentence stimulus:
/// AOI1 the full sentence area, AOI2 the critical word, AOI3 the decision
/// letter to be remembered.
enum class AoiKind { Sentence = 1, CriticalWord = 2, DecisionLetter = 3 };

std::string to_string(AoiKind k);                 // "AOI1".."AOI3"
AoiKind aoi_kind_from_string(const std::string&); // throws SchemaError

struct AoiRect {
  std::string stimulus_id;
  AoiKind kind = AoiKind::Sentence;
  double x_px = 0.0;
  double y_px = 0.0;
  double w_px = 0.0;
  double h_px = 0.0;

  double area() const { return w_px * h_px; }
  /// Inclusive left/top edge, exclusive right/bottom edge.
  bool contains(PointPx p) const {
    return p.x >= x_px && p.x < x_px + w_px && p.y >= y_px && p.y < y_px + h_px;
  }
};

/// Validated set of static AOIs plus the stimulus -> scene grouping
/// (which 2-5 sentence set each sentence belongs to).
class AoiSet {
 public:
  // CSV schema: stimulus_id,scene_id,kind,x_px,y_px,w_px,h_px
  // Throws SchemaError, DuplicateAoi, OutOfBounds.
  static AoiSet load(std::istream& in, const ScreenGeometry& geometry);
  static AoiSet from_rects(std::vector<AoiRect> rects,
                           std::map<std::string, std::string> scene_map,
                           const ScreenGeometry& geometry);

  bool has_stimulus(const std::string& stimulus_id) const;
  std::span<const AoiRect> rects(const std::string& stimulus_id) const;  // throws UnknownStimulus
  const std::string& scene_of(const std::string& stimulus_id) const;     // throws UnknownStimulus

  std::vector<std::string> stimulus_ids() const;  // sorted
  /// scene_id -> stimulus ids, both sorted.
  std::map<std::string, std::vector<std::string>> scenes() const;
  const std::map<std::string, std::string>& scene_map() const { return scene_map_; }

  std::size_t total_rects() const;

  void write_csv(std::ostream& out) const;

 private:
  void validate(const ScreenGeometry& geometry);

  std::map<std::string, std::vector<AoiRect>> by_stimulus_;
  std::map<std::string, std::string> scene_map_;
};

/// Returns the matching rect, smallest area first so a nested critical word
/// beats its enclosing sentence; none on a miss.
std::optional<AoiRect> hit_test(PointPx p, std::span<const AoiRect> rects);

struct MappedEvent {
  events::GazeEvent event;
  std::optional<AoiKind> aoi;
};

/// Fixations are assigned by centroid, saccades by landing point (launch
/// point when assign_saccade_by_landing is false). Total over events; misses
/// map to none. Throws UnknownStimulus.
std::vector<MappedEvent> map_events_to_aois(std::span<const events::GazeEvent> evts,
                                            const AoiSet& aois, const std::string& stimulus_id,
                                            const ScreenGeometry& geometry,
                                            bool assign_saccade_by_landing = true);

}  // namespace gazemark::aoi
