#include "gazemark/events.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "gazemark/csv.hpp"
#include "gazemark/error.hpp"

namespace gazemark::events {

double start_ms(const GazeEvent& e) {
  return std::visit([](const auto& ev) { return ev.start_ms; }, e);
}
double end_ms(const GazeEvent& e) {
  return std::visit([](const auto& ev) { return ev.end_ms; }, e);
}
double duration_ms(const GazeEvent& e) {
  return std::visit([](const auto& ev) { return ev.duration_ms; }, e);
}

std::vector<VelocitySample> compute_velocity_series(const DegreeRecording& r) {
  std::size_t usable = 0;
  for (const auto& s : r.samples) usable += s.usable ? 1 : 0;
  if (usable < 3) {
    throw Error(ErrorCode::TooFewSamples,
                "need >= 3 usable samples, have " + std::to_string(usable));
  }

  std::vector<VelocitySample> out;
  out.reserve(usable);
  const auto& s = r.samples;
  const std::size_t n = s.size();

  std::size_t i = 0;
  while (i < n) {
    if (!s[i].usable) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && s[j].usable) ++j;
    // contiguous usable run [i, j)
    const std::size_t len = j - i;
    if (len >= 2) {
      for (std::size_t k = i; k < j; ++k) {
        const std::size_t lo = (k == i) ? k : k - 1;
        const std::size_t hi = (k + 1 == j) ? k : k + 1;
        const double dt_ms = s[hi].t_ms - s[lo].t_ms;
        const double dist = distance(s[hi].pos, s[lo].pos);
        out.push_back({s[k].t_ms, dist / dt_ms * 1000.0, k});
      }
    }
    i = j;
  }
  return out;
}

namespace {

struct Segment {
  EventKind kind;
  std::size_t first;  // indices into the recording's samples
  std::size_t last;
};

FixationEvent make_fixation(const DegreeRecording& r, std::size_t first, std::size_t last) {
  FixationEvent f;
  f.start_ms = r.samples[first].t_ms;
  f.end_ms = r.samples[last].t_ms;
  f.duration_ms = f.end_ms - f.start_ms;

  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = first; k <= last; ++k) {
    if (!r.samples[k].usable) continue;
    sx += r.samples[k].pos.x;
    sy += r.samples[k].pos.y;
    ++n;
  }
  f.n_samples = n;
  f.centroid_deg = {sx / n, sy / n};

  double sq = 0.0;
  double pl = 0.0, pr = 0.0;
  std::size_t nl = 0, nr = 0;
  for (std::size_t k = first; k <= last; ++k) {
    const auto& smp = r.samples[k];
    if (!smp.usable) continue;
    const double d = distance(smp.pos, f.centroid_deg);
    sq += d * d;
    // interpolated samples carry synthetic positions, not measured pupils
    if (smp.interpolated) continue;
    if (smp.pupil_left_mm) { pl += *smp.pupil_left_mm; ++nl; }
    if (smp.pupil_right_mm) { pr += *smp.pupil_right_mm; ++nr; }
  }
  f.dispersion_deg = std::sqrt(sq / n);
  if (nl > 0) f.mean_pupil_left_mm = pl / nl;
  if (nr > 0) f.mean_pupil_right_mm = pr / nr;
  return f;
}

SaccadeEvent make_saccade(const DegreeRecording& r, const std::vector<VelocitySample>& vel,
                          std::size_t first, std::size_t last) {
  SaccadeEvent s;
  s.start_ms = r.samples[first].t_ms;
  s.end_ms = r.samples[last].t_ms;
  s.duration_ms = s.end_ms - s.start_ms;
  s.start_deg = r.samples[first].pos;
  s.end_deg = r.samples[last].pos;
  s.amplitude_deg = distance(s.start_deg, s.end_deg);

  double peak = 0.0, sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : vel) {
    if (v.sample_index < first || v.sample_index > last) continue;
    peak = std::max(peak, v.speed_dps);
    sum += v.speed_dps;
    ++n;
  }
  s.peak_velocity_dps = peak;
  s.mean_velocity_dps = n > 0 ? sum / n : 0.0;
  return s;
}

double segment_duration_ms(const DegreeRecording& r, const Segment& seg) {
  return r.samples[seg.last].t_ms - r.samples[seg.first].t_ms;
}

bool violates_minimum(const DegreeRecording& r, const Segment& seg, const DetectorParams& p) {
  if (seg.kind == EventKind::Saccade) {
    return seg.last - seg.first + 1 < p.min_saccade_samples;
  }
  return segment_duration_ms(r, seg) < p.min_fixation_ms;
}

void coalesce(std::vector<Segment>& segs) {
  std::vector<Segment> out;
  for (const auto& s : segs) {
    if (!out.empty() && out.back().kind == s.kind) {
      out.back().last = s.last;
    } else {
      out.push_back(s);
    }
  }
  segs = std::move(out);
}

// Absorbs undersized candidates into their neighbours until every surviving
// segment meets its minimum. Saccade minima are enforced first so that noise
// blips become fixation samples before fixation minima are judged.
void enforce_minima(const DegreeRecording& r, std::vector<Segment>& segs,
                    const DetectorParams& p) {
  for (const EventKind pass : {EventKind::Saccade, EventKind::Fixation}) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].kind != pass || !violates_minimum(r, segs[i], p)) continue;
        if (segs.size() == 1) {
          // a lone undersized candidate has nothing to merge into
          if (pass == EventKind::Saccade || segment_duration_ms(r, segs[i]) < p.min_fixation_ms) {
            segs.clear();
          }
          changed = false;
          break;
        }
        segs[i].kind = pass == EventKind::Saccade ? EventKind::Fixation : EventKind::Saccade;
        coalesce(segs);
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

std::vector<GazeEvent> detect_events_ivt(const DegreeRecording& r, const DetectorParams& p) {
  const auto vel = compute_velocity_series(r);

  // speed lookup per sample index
  std::map<std::size_t, double> speed;
  for (const auto& v : vel) speed[v.sample_index] = v.speed_dps;

  std::vector<GazeEvent> events;
  const auto& s = r.samples;
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (!s[i].usable || speed.find(i) == speed.end()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && s[j].usable && speed.find(j) != speed.end()) ++j;
    // run [i, j): classify samples and build alternating segments
    std::vector<Segment> segs;
    for (std::size_t k = i; k < j; ++k) {
      const EventKind kind = speed[k] >= p.velocity_threshold_dps ? EventKind::Saccade
                                                                  : EventKind::Fixation;
      if (!segs.empty() && segs.back().kind == kind) {
        segs.back().last = k;
      } else {
        segs.push_back({kind, k, k});
      }
    }
    enforce_minima(r, segs, p);
    for (const auto& seg : segs) {
      if (seg.kind == EventKind::Fixation) {
        events.emplace_back(make_fixation(r, seg.first, seg.last));
      } else {
        events.emplace_back(make_saccade(r, vel, seg.first, seg.last));
      }
    }
    i = j;
  }
  return events;
}

std::vector<GazeEvent> merge_and_filter_events(std::vector<GazeEvent> evts,
                                               const DetectorParams& p) {
  std::vector<GazeEvent> out;
  std::size_t i = 0;
  while (i < evts.size()) {
    const auto* fix = as_fixation(evts[i]);
    if (fix == nullptr) {
      out.push_back(evts[i]);
      ++i;
      continue;
    }
    FixationEvent cur = *fix;
    std::size_t j = i + 1;
    while (j < evts.size()) {
      // next fixation, if any, possibly with absorbed events in between
      std::size_t k = j;
      while (k < evts.size() && as_fixation(evts[k]) == nullptr) ++k;
      if (k == evts.size()) break;
      const FixationEvent& next = *as_fixation(evts[k]);
      const double gap = next.start_ms - cur.end_ms;
      const double dist = distance(cur.centroid_deg, next.centroid_deg);
      if (gap >= p.merge_gap_ms || dist >= p.merge_angle_deg) break;

      // duration-weighted centroid; dispersions pooled via second moments
      const double wa = cur.duration_ms > 0.0 ? cur.duration_ms : 1.0;
      const double wb = next.duration_ms > 0.0 ? next.duration_ms : 1.0;
      const double w = wa + wb;
      const PointDeg c = {(wa * cur.centroid_deg.x + wb * next.centroid_deg.x) / w,
                          (wa * cur.centroid_deg.y + wb * next.centroid_deg.y) / w};
      const double da = distance(cur.centroid_deg, c);
      const double db = distance(next.centroid_deg, c);
      const double second = (wa * (cur.dispersion_deg * cur.dispersion_deg + da * da) +
                             wb * (next.dispersion_deg * next.dispersion_deg + db * db)) /
                            w;

      FixationEvent merged;
      merged.start_ms = cur.start_ms;
      merged.end_ms = next.end_ms;
      merged.duration_ms = merged.end_ms - merged.start_ms;
      merged.centroid_deg = c;
      merged.dispersion_deg = std::sqrt(second);
      merged.n_samples = cur.n_samples + next.n_samples;
      // pupil means pooled by contributing sample counts would need the raw
      // samples; duration weighting is the same thing for steady sampling
      auto pool = [&](const std::optional<double>& a, const std::optional<double>& b) {
        if (a && b) return std::optional<double>((wa * *a + wb * *b) / w);
        return a ? a : b;
      };
      merged.mean_pupil_left_mm = pool(cur.mean_pupil_left_mm, next.mean_pupil_left_mm);
      merged.mean_pupil_right_mm = pool(cur.mean_pupil_right_mm, next.mean_pupil_right_mm);
      cur = merged;
      j = k + 1;
    }
    if (cur.duration_ms >= p.min_fixation_ms) out.emplace_back(cur);
    i = j;
  }
  return out;
}

std::vector<GazeEvent> detect_and_merge(const DegreeRecording& r, const DetectorParams& p) {
  return merge_and_filter_events(detect_events_ivt(r, p), p);
}

void write_events_csv(std::ostream& out, std::span<const EventGroup> groups,
                      const std::string& source) {
  out << "participant_id,stimulus_id,kind,start_ms,end_ms,duration_ms,x_deg,y_deg,"
         "amplitude_deg,peak_velocity_dps,dispersion_deg,pupil_left_mm,pupil_right_mm";
  if (!source.empty()) out << ",source";
  out << "\n";
  for (const auto& g : groups) {
    for (const auto& e : g.events) {
      std::vector<std::string> cells;
      cells.reserve(14);
      cells.push_back(g.participant_id);
      cells.push_back(g.stimulus_id);
      if (const auto* f = as_fixation(e)) {
        cells.push_back("fixation");
        cells.push_back(csv::format_double(f->start_ms));
        cells.push_back(csv::format_double(f->end_ms));
        cells.push_back(csv::format_double(f->duration_ms));
        cells.push_back(csv::format_double(f->centroid_deg.x));
        cells.push_back(csv::format_double(f->centroid_deg.y));
        cells.push_back("");
        cells.push_back("");
        cells.push_back(csv::format_double(f->dispersion_deg));
        cells.push_back(csv::format_optional(f->mean_pupil_left_mm));
        cells.push_back(csv::format_optional(f->mean_pupil_right_mm));
      } else {
        const auto* s = as_saccade(e);
        cells.push_back("saccade");
        cells.push_back(csv::format_double(s->start_ms));
        cells.push_back(csv::format_double(s->end_ms));
        cells.push_back(csv::format_double(s->duration_ms));
        cells.push_back(csv::format_double(s->end_deg.x));
        cells.push_back(csv::format_double(s->end_deg.y));
        cells.push_back(csv::format_double(s->amplitude_deg));
        cells.push_back(csv::format_double(s->peak_velocity_dps));
        cells.push_back("");
        cells.push_back("");
        cells.push_back("");
      }
      if (!source.empty()) cells.push_back(source);
      out << csv::join_row(cells);
    }
  }
}

std::vector<EventGroup> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "no header line");
  const auto header = csv::split_line(line);
  auto col = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::MissingColumn, std::string("header lacks '") + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_part = col("participant_id"), c_stim = col("stimulus_id"),
                    c_kind = col("kind"), c_start = col("start_ms"), c_end = col("end_ms"),
                    c_dur = col("duration_ms"), c_x = col("x_deg"), c_y = col("y_deg"),
                    c_amp = col("amplitude_deg"), c_pv = col("peak_velocity_dps"),
                    c_disp = col("dispersion_deg"), c_pl = col("pupil_left_mm"),
                    c_pr = col("pupil_right_mm");

  std::map<std::pair<std::string, std::string>, EventGroup> groups;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split_line(line);
    if (cells.size() < header.size()) {
      throw Error(ErrorCode::SchemaError, "event row with wrong field count: " + line);
    }
    const std::string participant = cells[c_part];
    const std::string stimulus = cells[c_stim];
    auto& g = groups[{participant, stimulus}];
    g.participant_id = participant;
    g.stimulus_id = stimulus;
    const std::string kind = csv::trim(cells[c_kind]);
    if (kind == "fixation") {
      FixationEvent f;
      f.start_ms = csv::parse_double(cells[c_start]);
      f.end_ms = csv::parse_double(cells[c_end]);
      f.duration_ms = csv::parse_double(cells[c_dur]);
      f.centroid_deg = {csv::parse_double(cells[c_x]), csv::parse_double(cells[c_y])};
      f.dispersion_deg = csv::parse_double(cells[c_disp]);
      f.mean_pupil_left_mm = csv::parse_optional_double(cells[c_pl]);
      f.mean_pupil_right_mm = csv::parse_optional_double(cells[c_pr]);
      g.events.emplace_back(f);
    } else if (kind == "saccade") {
      SaccadeEvent s;
      s.start_ms = csv::parse_double(cells[c_start]);
      s.end_ms = csv::parse_double(cells[c_end]);
      s.duration_ms = csv::parse_double(cells[c_dur]);
      s.end_deg = {csv::parse_double(cells[c_x]), csv::parse_double(cells[c_y])};
      s.amplitude_deg = csv::parse_double(cells[c_amp]);
      s.peak_velocity_dps = csv::parse_double(cells[c_pv]);
      g.events.emplace_back(s);
    } else {
      throw Error(ErrorCode::SchemaError, "unknown event kind '" + kind + "'");
    }
  }

  std::vector<EventGroup> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) {
    std::stable_sort(g.events.begin(), g.events.end(),
                     [](const GazeEvent& a, const GazeEvent& b) { return start_ms(a) < start_ms(b); });
    out.push_back(std::move(g));
  }
  return out;
}

double event_level_f1(std::span<const GazeEvent> truth, std::span<const GazeEvent> detected) {
  if (truth.empty() && detected.empty()) return 1.0;
  if (truth.empty() || detected.empty()) return 0.0;

  std::vector<bool> used(detected.size(), false);
  std::size_t matched = 0;
  for (const auto& t : truth) {
    const double ts = start_ms(t), te = end_ms(t);
    for (std::size_t i = 0; i < detected.size(); ++i) {
      if (used[i] || kind_of(detected[i]) != kind_of(t)) continue;
      const double ds = start_ms(detected[i]), de = end_ms(detected[i]);
      const double overlap = std::min(te, de) - std::max(ts, ds);
      if (overlap <= 0.0) continue;
      const double shorter = std::min(te - ts, de - ds);
      if (overlap >= 0.5 * shorter) {
        used[i] = true;
        ++matched;
        break;
      }
    }
  }
  const double precision = static_cast<double>(matched) / detected.size();
  const double recall = static_cast<double>(matched) / truth.size();
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace gazemark::events
