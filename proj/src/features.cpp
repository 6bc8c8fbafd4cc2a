#include "gazemark/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gazemark/csv.hpp"
#include "gazemark/error.hpp"

namespace gazemark::features {

namespace {

const std::vector<std::string> kGenderLevels = {"female", "male", "other"};
const std::vector<std::string> kLabelLevels = {"ADHD", "NonADHD"};

/// Summary statistics over a value set. Values are sorted before
/// accumulation so results are bitwise independent of event order.
struct Stats {
  double count = 0.0;
  double total = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

Stats stats_of(std::vector<double> values) {
  Stats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.count = static_cast<double>(values.size());
  for (const double v : values) s.total += v;
  s.mean = s.total / s.count;
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / s.count);
  s.min = values.front();
  s.max = values.back();
  return s;
}

struct UnitEvents {
  std::string participant_id;
  std::string instance_id;
  std::vector<events::GazeEvent> events;
};

std::string instance_key(Granularity g, const std::string& participant,
                         const std::string& stimulus,
                         const std::map<std::string, std::string>* scene_map) {
  switch (g) {
    case Granularity::Sentence: return stimulus;
    case Granularity::Participant: return participant;
    case Granularity::Scene: {
      if (scene_map == nullptr) {
        throw Error(ErrorCode::BadValue, "scene granularity requires a scene map");
      }
      const auto it = scene_map->find(stimulus);
      if (it == scene_map->end()) {
        throw Error(ErrorCode::UnknownStimulus, "no scene for stimulus '" + stimulus + "'");
      }
      return it->second;
    }
    case Granularity::Event: return stimulus;  // split into singletons below
  }
  return stimulus;
}

/// Groups (participant, stimulus) event lists into feature units.
std::vector<UnitEvents> make_units(std::span<const events::EventGroup> groups,
                                   Granularity granularity,
                                   const std::map<std::string, std::string>* scene_map) {
  std::map<std::pair<std::string, std::string>, UnitEvents> units;
  for (const auto& g : groups) {
    if (granularity == Granularity::Event) {
      std::size_t n = 0;
      for (const auto& e : g.events) {
        std::ostringstream id;
        id << g.stimulus_id << "#" << n++;
        units[{g.participant_id, id.str()}] = {g.participant_id, id.str(), {e}};
      }
      continue;
    }
    const std::string key = instance_key(granularity, g.participant_id, g.stimulus_id, scene_map);
    auto& u = units[{g.participant_id, key}];
    u.participant_id = g.participant_id;
    u.instance_id = key;
    u.events.insert(u.events.end(), g.events.begin(), g.events.end());
  }
  std::vector<UnitEvents> out;
  out.reserve(units.size());
  for (auto& [key, u] : units) out.push_back(std::move(u));
  return out;
}

const ParticipantMeta& require_meta(const std::map<std::string, ParticipantMeta>& meta,
                                    const std::string& participant) {
  const auto it = meta.find(participant);
  if (it == meta.end()) {
    throw Error(ErrorCode::BadValue, "no metadata for participant '" + participant + "'");
  }
  return it->second;
}

/// Participant-level mean pupil diameters over all fixations carrying pupil
/// data; used to impute units where a pupil statistic has no support.
struct PupilBaseline {
  double left = 0.0;
  double right = 0.0;
  bool has_left = false;
  bool has_right = false;
};

template <typename EventRange>
std::map<std::string, PupilBaseline> pupil_baselines(
    const std::vector<std::pair<std::string, EventRange>>& per_participant) {
  std::map<std::string, PupilBaseline> out;
  for (const auto& [participant, evts] : per_participant) {
    std::vector<double> left, right;
    for (const auto& e : evts) {
      const auto* f = events::as_fixation(e);
      if (f == nullptr) continue;
      if (f->mean_pupil_left_mm) left.push_back(*f->mean_pupil_left_mm);
      if (f->mean_pupil_right_mm) right.push_back(*f->mean_pupil_right_mm);
    }
    PupilBaseline b;
    if (!left.empty()) {
      b.left = stats_of(left).mean;
      b.has_left = true;
    }
    if (!right.empty()) {
      b.right = stats_of(right).mean;
      b.has_right = true;
    }
    out[participant] = b;
  }
  return out;
}

struct ColumnWriter {
  FeatureTable* table;
  FeatureVector* row = nullptr;
  bool building_schema = true;

  void numeric(const std::string& name, double v) {
    if (building_schema) table->schema.push_back({name, FeatureType::Numeric, {}});
    row->values.emplace_back(v);
  }
  void nominal(const std::string& name, const std::string& v,
               const std::vector<std::string>& levels) {
    if (building_schema) table->schema.push_back({name, FeatureType::Nominal, levels});
    row->values.emplace_back(v);
  }
};

void sort_rows(FeatureTable& t) {
  std::sort(t.rows.begin(), t.rows.end(), [](const FeatureVector& a, const FeatureVector& b) {
    if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
    return a.instance_id < b.instance_id;
  });
}

}  // namespace

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::Event: return "event";
    case Granularity::Sentence: return "sentence";
    case Granularity::Scene: return "scene";
    case Granularity::Participant: return "participant";
  }
  return "sentence";
}

Granularity granularity_from_string(const std::string& s) {
  if (s == "event") return Granularity::Event;
  if (s == "sentence") return Granularity::Sentence;
  if (s == "scene") return Granularity::Scene;
  if (s == "participant") return Granularity::Participant;
  throw Error(ErrorCode::BadValue, "unknown granularity '" + s + "'");
}

std::map<Label, std::size_t> FeatureTable::class_counts() const {
  std::map<Label, std::size_t> out;
  for (const auto& r : rows) ++out[r.label];
  return out;
}

FeatureTable build_event_features(std::span<const events::EventGroup> groups,
                                  const std::map<std::string, ParticipantMeta>& meta,
                                  EventFeatureMode mode, Granularity granularity,
                                  const std::map<std::string, std::string>* scene_map,
                                  const BuildOptions& options) {
  const bool want_fix = mode != EventFeatureMode::Saccade;
  const bool want_sac = mode != EventFeatureMode::Fixation;

  FeatureTable table;
  table.granularity = granularity;
  switch (mode) {
    case EventFeatureMode::Fixation: table.name = "fixation"; break;
    case EventFeatureMode::Saccade: table.name = "saccade"; break;
    case EventFeatureMode::Combined: table.name = "combined"; break;
  }
  table.name += "_" + to_string(granularity);

  std::vector<std::pair<std::string, std::vector<events::GazeEvent>>> per_participant;
  {
    std::map<std::string, std::vector<events::GazeEvent>> acc;
    for (const auto& g : groups) {
      acc[g.participant_id].insert(acc[g.participant_id].end(), g.events.begin(), g.events.end());
    }
    for (auto& [p, evts] : acc) per_participant.emplace_back(p, std::move(evts));
  }
  const auto baselines = pupil_baselines(per_participant);

  const auto units = make_units(groups, granularity, scene_map);
  ColumnWriter col{&table};

  for (const auto& u : units) {
    const auto& pm = require_meta(meta, u.participant_id);

    std::vector<double> fix_durations, pupils_l, pupils_r;
    std::vector<double> sac_durations, sac_amplitudes, sac_peaks;
    for (const auto& e : u.events) {
      if (const auto* f = events::as_fixation(e)) {
        fix_durations.push_back(f->duration_ms);
        if (f->mean_pupil_left_mm) pupils_l.push_back(*f->mean_pupil_left_mm);
        if (f->mean_pupil_right_mm) pupils_r.push_back(*f->mean_pupil_right_mm);
      } else {
        const auto* s = events::as_saccade(e);
        sac_durations.push_back(s->duration_ms);
        sac_amplitudes.push_back(s->amplitude_deg);
        sac_peaks.push_back(s->peak_velocity_dps);
      }
    }

    const bool has_required = (want_fix && !fix_durations.empty()) ||
                              (want_sac && !sac_durations.empty());
    if (!has_required) {
      ++table.dropped_units;
      continue;
    }

    FeatureVector row;
    row.participant_id = u.participant_id;
    row.instance_id = u.instance_id;
    row.label = pm.label;
    col.row = &row;

    if (options.include_gender) col.nominal("gender", to_string(pm.gender), kGenderLevels);

    if (want_fix) {
      const Stats fd = stats_of(fix_durations);
      col.numeric("fixation_count", fd.count);
      col.numeric("fixation_duration_total_ms", fd.total);
      col.numeric("fixation_duration_mean_ms", fd.mean);
      col.numeric("fixation_duration_std_ms", fd.stddev);
      const auto& base = baselines.at(u.participant_id);
      const Stats pl = stats_of(pupils_l);
      const Stats pr = stats_of(pupils_r);
      const bool impute_l = pupils_l.empty();
      const bool impute_r = pupils_r.empty();
      col.numeric("pupil_left_mm", impute_l ? (base.has_left ? base.left : 0.0) : pl.mean);
      col.numeric("pupil_left_mm_imputed", impute_l ? 1.0 : 0.0);
      col.numeric("pupil_right_mm", impute_r ? (base.has_right ? base.right : 0.0) : pr.mean);
      col.numeric("pupil_right_mm_imputed", impute_r ? 1.0 : 0.0);
    }
    if (want_sac) {
      const Stats sd = stats_of(sac_durations);
      const Stats sa = stats_of(sac_amplitudes);
      const Stats sp = stats_of(sac_peaks);
      col.numeric("saccade_count", sd.count);
      col.numeric("saccade_duration_total_ms", sd.total);
      col.numeric("saccade_duration_mean_ms", sd.mean);
      col.numeric("saccade_duration_std_ms", sd.stddev);
      col.numeric("saccade_amplitude_max_deg", sa.max);
      col.numeric("saccade_amplitude_min_deg", sa.min);
      col.numeric("saccade_amplitude_mean_deg", sa.mean);
      col.numeric("saccade_amplitude_std_deg", sa.stddev);
      col.numeric("saccade_peak_velocity_max_dps", sp.max);
      col.numeric("saccade_peak_velocity_mean_dps", sp.mean);
      col.numeric("saccade_peak_velocity_std_dps", sp.stddev);
    }

    col.building_schema = false;
    table.rows.push_back(std::move(row));
  }

  sort_rows(table);
  return table;
}

FeatureTable build_aoi_features(std::span<const MappedEventGroup> groups,
                                const aoi::AoiSet& aois,
                                const std::map<std::string, ParticipantMeta>& meta,
                                AoiFeatureMode mode, const BuildOptions& options) {
  const Granularity granularity =
      mode == AoiFeatureMode::SceneBased ? Granularity::Scene : Granularity::Sentence;

  FeatureTable table;
  table.granularity = granularity;
  table.name = (mode == AoiFeatureMode::SceneBased ? "aoi_scene" : "aoi_sentence");

  struct Unit {
    std::string participant_id;
    std::string instance_id;
    std::vector<aoi::MappedEvent> events;
  };
  std::map<std::pair<std::string, std::string>, Unit> unit_map;
  for (const auto& g : groups) {
    const std::string key = granularity == Granularity::Scene ? aois.scene_of(g.stimulus_id)
                                                              : g.stimulus_id;
    auto& u = unit_map[{g.participant_id, key}];
    u.participant_id = g.participant_id;
    u.instance_id = key;
    u.events.insert(u.events.end(), g.events.begin(), g.events.end());
  }

  std::vector<std::pair<std::string, std::vector<events::GazeEvent>>> per_participant;
  {
    std::map<std::string, std::vector<events::GazeEvent>> acc;
    for (const auto& g : groups) {
      for (const auto& me : g.events) acc[g.participant_id].push_back(me.event);
    }
    for (auto& [p, evts] : acc) per_participant.emplace_back(p, std::move(evts));
  }
  const auto baselines = pupil_baselines(per_participant);

  using aoi::AoiKind;
  constexpr AoiKind kKinds[] = {AoiKind::Sentence, AoiKind::CriticalWord, AoiKind::DecisionLetter};
  auto tag = [](AoiKind k) { return std::to_string(static_cast<int>(k)); };

  ColumnWriter col{&table};
  for (auto& [key, u] : unit_map) {
    if (u.events.empty()) {
      ++table.dropped_units;
      continue;
    }
    const auto& pm = require_meta(meta, u.participant_id);

    std::map<AoiKind, std::vector<double>> fix_dur, pup_l, pup_r, sac_amp;
    for (const auto& me : u.events) {
      if (!me.aoi) continue;
      if (const auto* f = events::as_fixation(me.event)) {
        fix_dur[*me.aoi].push_back(f->duration_ms);
        if (f->mean_pupil_left_mm) pup_l[*me.aoi].push_back(*f->mean_pupil_left_mm);
        if (f->mean_pupil_right_mm) pup_r[*me.aoi].push_back(*f->mean_pupil_right_mm);
      } else {
        sac_amp[*me.aoi].push_back(events::as_saccade(me.event)->amplitude_deg);
      }
    }

    FeatureVector row;
    row.participant_id = u.participant_id;
    row.instance_id = u.instance_id;
    row.label = pm.label;
    col.row = &row;

    if (options.include_gender) col.nominal("gender", to_string(pm.gender), kGenderLevels);

    std::map<AoiKind, Stats> fs;
    for (const AoiKind k : kKinds) fs[k] = stats_of(fix_dur[k]);

    for (const AoiKind k : kKinds) col.numeric("fixation_count_aoi" + tag(k), fs[k].count);
    for (const AoiKind k : kKinds) {
      col.numeric("fixation_duration_aoi" + tag(k) + "_ms", fs[k].total);
    }
    col.numeric("fixation_duration_mean_aoi2_ms", fs[AoiKind::CriticalWord].mean);
    col.numeric("fixation_duration_std_aoi2_ms", fs[AoiKind::CriticalWord].stddev);

    const auto& base = baselines.at(u.participant_id);
    for (const AoiKind k : {AoiKind::CriticalWord, AoiKind::DecisionLetter}) {
      const Stats pl = stats_of(pup_l[k]);
      const Stats pr = stats_of(pup_r[k]);
      const bool il = pup_l[k].empty();
      const bool ir = pup_r[k].empty();
      col.numeric("pupil_left_aoi" + tag(k) + "_mm",
                  il ? (base.has_left ? base.left : 0.0) : pl.mean);
      col.numeric("pupil_left_aoi" + tag(k) + "_mm_imputed", il ? 1.0 : 0.0);
      col.numeric("pupil_right_aoi" + tag(k) + "_mm",
                  ir ? (base.has_right ? base.right : 0.0) : pr.mean);
      col.numeric("pupil_right_aoi" + tag(k) + "_mm_imputed", ir ? 1.0 : 0.0);
    }

    std::map<AoiKind, Stats> ss;
    for (const AoiKind k : kKinds) ss[k] = stats_of(sac_amp[k]);
    for (const AoiKind k : kKinds) {
      col.numeric("saccade_amplitude_max_aoi" + tag(k) + "_deg", ss[k].max);
      col.numeric("saccade_amplitude_min_aoi" + tag(k) + "_deg", ss[k].min);
    }
    for (const AoiKind k : kKinds) {
      col.numeric("saccade_amplitude_mean_aoi" + tag(k) + "_deg", ss[k].mean);
    }
    for (const AoiKind k : kKinds) {
      col.numeric("saccade_amplitude_std_aoi" + tag(k) + "_deg", ss[k].stddev);
    }

    col.building_schema = false;
    table.rows.push_back(std::move(row));
  }

  sort_rows(table);
  return table;
}

namespace {

std::string value_to_string(const FeatureValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return csv::format_double(*d);
  return std::get<std::string>(v);
}

}  // namespace

void write_csv(std::ostream& out, const FeatureTable& t) {
  if (t.rows.empty()) throw Error(ErrorCode::EmptyTable, "refusing to export an empty table");
  std::vector<std::string> header = {"participant_id", "instance_id"};
  for (const auto& entry : t.schema) header.push_back(entry.name);
  header.push_back("label");
  out << csv::join_row(header);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells = {row.participant_id, row.instance_id};
    for (const auto& v : row.values) cells.push_back(value_to_string(v));
    cells.push_back(to_string(row.label));
    out << csv::join_row(cells);
  }
}

FeatureTable read_csv(std::istream& in, const std::string& name, Granularity granularity) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "no header line");
  const auto header = csv::split_line(line);
  if (header.size() < 3 || header.front() != "participant_id" || header[1] != "instance_id" ||
      header.back() != "label") {
    throw Error(ErrorCode::SchemaError,
                "feature CSV must start with participant_id,instance_id and end with label");
  }

  FeatureTable t;
  t.name = name;
  t.granularity = granularity;
  for (std::size_t i = 2; i + 1 < header.size(); ++i) {
    if (header[i] == "gender") {
      t.schema.push_back({"gender", FeatureType::Nominal, kGenderLevels});
    } else {
      t.schema.push_back({header[i], FeatureType::Numeric, {}});
    }
  }

  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::SchemaError, "feature row with wrong field count: " + line);
    }
    FeatureVector row;
    row.participant_id = cells[0];
    row.instance_id = cells[1];
    for (std::size_t i = 2; i + 1 < cells.size(); ++i) {
      const auto& entry = t.schema[i - 2];
      if (entry.type == FeatureType::Nominal) {
        row.values.emplace_back(cells[i]);
      } else {
        row.values.emplace_back(csv::parse_double(cells[i]));
      }
    }
    row.label = label_from_string(cells.back());
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw Error(ErrorCode::EmptyTable, "feature CSV has no rows");
  return t;
}

void write_arff(std::ostream& out, const FeatureTable& t) {
  if (t.rows.empty()) throw Error(ErrorCode::EmptyTable, "refusing to export an empty table");
  out << "% granularity: " << to_string(t.granularity) << "\n";
  out << "@relation " << t.name << "\n\n";
  out << "@attribute participant_id string\n";
  out << "@attribute instance_id string\n";
  for (const auto& entry : t.schema) {
    out << "@attribute " << entry.name << " ";
    if (entry.type == FeatureType::Numeric) {
      out << "numeric\n";
    } else {
      out << "{";
      for (std::size_t i = 0; i < entry.levels.size(); ++i) {
        if (i > 0) out << ",";
        out << entry.levels[i];
      }
      out << "}\n";
    }
  }
  out << "@attribute label {ADHD,NonADHD}\n\n@data\n";
  for (const auto& row : t.rows) {
    std::vector<std::string> cells = {row.participant_id, row.instance_id};
    for (const auto& v : row.values) cells.push_back(value_to_string(v));
    cells.push_back(to_string(row.label));
    out << csv::join_row(cells);
  }
}

FeatureTable read_arff(std::istream& in) {
  FeatureTable t;
  t.name = "table";
  std::string line;
  std::vector<FeatureSchemaEntry> attrs;
  bool in_data = false;
  while (std::getline(in, line)) {
    std::string s = csv::trim(line);
    if (s.empty()) continue;
    if (s[0] == '%') {
      const std::string tag = "% granularity:";
      if (s.rfind(tag, 0) == 0) t.granularity = granularity_from_string(csv::trim(s.substr(tag.size())));
      continue;
    }
    if (!in_data) {
      if (s.rfind("@relation", 0) == 0) {
        t.name = csv::trim(s.substr(9));
      } else if (s.rfind("@attribute", 0) == 0) {
        const std::string rest = csv::trim(s.substr(10));
        const std::size_t sp = rest.find_first_of(" \t");
        if (sp == std::string::npos) throw Error(ErrorCode::SchemaError, "bad attribute: " + s);
        FeatureSchemaEntry entry;
        entry.name = rest.substr(0, sp);
        const std::string type = csv::trim(rest.substr(sp));
        if (type == "numeric" || type == "real") {
          entry.type = FeatureType::Numeric;
        } else if (type == "string") {
          entry.type = FeatureType::Nominal;  // id columns, levels unconstrained
        } else if (!type.empty() && type.front() == '{' && type.back() == '}') {
          entry.type = FeatureType::Nominal;
          for (auto& level : csv::split_line(type.substr(1, type.size() - 2))) {
            entry.levels.push_back(csv::trim(level));
          }
        } else {
          throw Error(ErrorCode::SchemaError, "unsupported attribute type: " + type);
        }
        attrs.push_back(std::move(entry));
      } else if (s.rfind("@data", 0) == 0) {
        if (attrs.size() < 4 || attrs.front().name != "participant_id" ||
            attrs[1].name != "instance_id" || attrs.back().name != "label") {
          throw Error(ErrorCode::SchemaError, "arff must declare participant_id, instance_id, "
                                              "feature attributes, and label");
        }
        t.schema.assign(attrs.begin() + 2, attrs.end() - 1);
        in_data = true;
      }
      continue;
    }
    const auto cells = csv::split_line(s);
    if (cells.size() != attrs.size()) {
      throw Error(ErrorCode::SchemaError, "arff row with wrong field count: " + s);
    }
    FeatureVector row;
    row.participant_id = csv::trim(cells[0]);
    row.instance_id = csv::trim(cells[1]);
    for (std::size_t i = 2; i + 1 < cells.size(); ++i) {
      const auto& entry = t.schema[i - 2];
      if (entry.type == FeatureType::Nominal) {
        row.values.emplace_back(csv::trim(cells[i]));
      } else {
        row.values.emplace_back(csv::parse_double(cells[i]));
      }
    }
    row.label = label_from_string(csv::trim(cells.back()));
    t.rows.push_back(std::move(row));
  }
  if (!in_data) throw Error(ErrorCode::SchemaError, "arff file has no @data section");
  if (t.rows.empty()) throw Error(ErrorCode::EmptyTable, "arff file has no rows");
  return t;
}

}  // namespace gazemark::features
