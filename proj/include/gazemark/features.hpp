#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gazemark/aoi.hpp"
#include "gazemark/events.hpp"
#include "gazemark/types.hpp"

namespace gazemark::features {

enum class FeatureType { Numeric, Nominal };

struct FeatureSchemaEntry {
  std::string name;
  FeatureType type = FeatureType::Numeric;
  std::vector<std::string> levels;  // nominal only

  bool operator==(const FeatureSchemaEntry&) const = default;
};

using FeatureValue = std::variant<double, std::string>;

struct FeatureVector {
  std::string participant_id;
  std::string instance_id;
  std::vector<FeatureValue> values;  // aligned with the table schema
  Label label = Label::NonAdhd;
};

enum class Granularity { Event, Sentence, Scene, Participant };
std::string to_string(Granularity g);
Granularity granularity_from_string(const std::string& s);

enum class EventFeatureMode { Fixation, Saccade, Combined };
enum class AoiFeatureMode { SceneBased, SentenceBased };

struct FeatureTable {
  std::string name;  // e.g. "fixation_sentence"
  Granularity granularity = Granularity::Sentence;
  std::vector<FeatureSchemaEntry> schema;
  std::vector<FeatureVector> rows;  // ordered by (participant_id, instance_id)
  std::size_t dropped_units = 0;    // units with no events of the required kind

  std::map<Label, std::size_t> class_counts() const;
};

struct BuildOptions {
  bool include_gender = true;
};

/// Event-level feature sets. Fixation mode carries the duration/pupil
/// qualifiers, saccade mode the count/duration/amplitude/peak-velocity
/// statistics, combined their union. "Fixation standard deviation" is the
/// standard deviation of fixation durations in milliseconds (population
/// convention, zero for singletons); spatial dispersion stays in the event
/// export and is not a feature column.
FeatureTable build_event_features(std::span<const events::EventGroup> groups,
                                  const std::map<std::string, ParticipantMeta>& meta,
                                  EventFeatureMode mode, Granularity granularity,
                                  const std::map<std::string, std::string>* scene_map = nullptr,
                                  const BuildOptions& options = {});

struct MappedEventGroup {
  std::string participant_id;
  std::string stimulus_id;
  std::vector<aoi::MappedEvent> events;
};

/// AOI feature sets: per-AOI fixation counts and durations, AOI2 duration
/// statistics, AOI2/AOI3 pupil diameters, and per-AOI saccade amplitude
/// statistics; one row per sentence or per scene. Empty per-AOI statistics
/// are imputed (zero for counts/durations/amplitudes, the participant's own
/// mean for pupils) with companion *_imputed flag columns.
FeatureTable build_aoi_features(std::span<const MappedEventGroup> groups,
                                const aoi::AoiSet& aois,
                                const std::map<std::string, ParticipantMeta>& meta,
                                AoiFeatureMode mode, const BuildOptions& options = {});

// csv: header row `participant_id,instance_id,<features...>,label`
void write_csv(std::ostream& out, const FeatureTable& t);  // throws EmptyTable
FeatureTable read_csv(std::istream& in, const std::string& name = "table",
                      Granularity granularity = Granularity::Sentence);

// arff: typed attributes; numeric columns plus nominal gender/label
void write_arff(std::ostream& out, const FeatureTable& t);  // throws EmptyTable
FeatureTable read_arff(std::istream& in);

}  // namespace gazemark::features
