#include "gazemark/mainseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazemark/error.hpp"

namespace gazemark::mainseq {

double predict_peak_velocity(double amplitude_deg, const MainSequenceModel& m) {
  if (amplitude_deg < 0.0) {
    throw Error(ErrorCode::NegativeAmplitude, "amplitude must be >= 0");
  }
  return m.theta_max_dps * (1.0 - std::exp(-amplitude_deg / m.c_deg));
}

double predict_duration(double amplitude_deg, const MainSequenceModel& m) {
  if (amplitude_deg < 0.0) {
    throw Error(ErrorCode::NegativeAmplitude, "amplitude must be >= 0");
  }
  return m.slope_ms_per_deg * amplitude_deg + m.intercept_ms;
}

namespace {

struct VelocityData {
  std::vector<double> amp;
  std::vector<double> vel;
};

// For fixed c the optimal theta_max is linear least squares:
// theta = sum(v*g) / sum(g*g) with g = 1 - exp(-a/c).
double best_theta_for_c(const VelocityData& d, double c) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.amp.size(); ++i) {
    const double g = 1.0 - std::exp(-d.amp[i] / c);
    num += d.vel[i] * g;
    den += g * g;
  }
  return den > 0.0 ? num / den : 0.0;
}

double sse_for_c(const VelocityData& d, double c) {
  const double theta = best_theta_for_c(d, c);
  double sse = 0.0;
  for (std::size_t i = 0; i < d.amp.size(); ++i) {
    const double r = d.vel[i] - theta * (1.0 - std::exp(-d.amp[i] / c));
    sse += r * r;
  }
  return sse;
}

// Golden-section minimization of sse_for_c on [lo, hi].
double refine_c(const VelocityData& d, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = sse_for_c(d, x1);
  double f2 = sse_for_c(d, x2);
  while ((b - a) > 1e-6 * std::max(1.0, std::abs(a))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = sse_for_c(d, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = sse_for_c(d, x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FitResult fit_main_sequence(std::span<const events::SaccadeEvent> saccades) {
  if (saccades.size() < kFitMinSaccades) {
    throw Error(ErrorCode::TooFewSaccades, "need >= " + std::to_string(kFitMinSaccades) +
                                               " saccades, have " +
                                               std::to_string(saccades.size()));
  }
  double amin = std::numeric_limits<double>::infinity();
  double amax = -std::numeric_limits<double>::infinity();
  for (const auto& s : saccades) {
    amin = std::min(amin, s.amplitude_deg);
    amax = std::max(amax, s.amplitude_deg);
  }
  if (amax - amin <= kFitMinAmplitudeSpanDeg) {
    throw Error(ErrorCode::DegenerateAmplitudeRange,
                "amplitude span " + std::to_string(amax - amin) + " deg is unidentifiable");
  }

  FitResult out;
  VelocityData vd;
  for (const auto& s : saccades) {
    if (s.peak_velocity_dps > kVelocityOutlierDps) {
      ++out.n_outliers_excluded;
      continue;
    }
    vd.amp.push_back(s.amplitude_deg);
    vd.vel.push_back(s.peak_velocity_dps);
  }
  out.n_used = vd.amp.size();
  if (out.n_used < kFitMinSaccades) {
    throw Error(ErrorCode::TooFewSaccades,
                "only " + std::to_string(out.n_used) + " saccades left after outlier removal");
  }

  // coarse log-spaced grid over c in [2, 50]; theta profiled out exactly
  constexpr double kCLo = 2.0, kCHi = 50.0;
  constexpr int kGrid = 64;
  double best_c = kCLo;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double c = kCLo * std::pow(kCHi / kCLo, static_cast<double>(i) / (kGrid - 1));
    const double sse = sse_for_c(vd, c);
    if (sse < best_sse) {
      best_sse = sse;
      best_c = c;
    }
  }
  const double step = std::pow(kCHi / kCLo, 1.0 / (kGrid - 1));
  const double c = refine_c(vd, std::max(kCLo, best_c / step), std::min(kCHi, best_c * step));
  double theta = best_theta_for_c(vd, c);
  theta = std::clamp(theta, 100.0, 1000.0);

  out.model.theta_max_dps = theta;
  out.model.c_deg = c;

  // duration relation: plain OLS over all retained saccades
  double sa = 0.0, sd = 0.0;
  for (const auto& s : saccades) {
    if (s.peak_velocity_dps > kVelocityOutlierDps) continue;
    sa += s.amplitude_deg;
    sd += s.duration_ms;
  }
  const double n = static_cast<double>(out.n_used);
  const double ma = sa / n, md = sd / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : saccades) {
    if (s.peak_velocity_dps > kVelocityOutlierDps) continue;
    sxx += (s.amplitude_deg - ma) * (s.amplitude_deg - ma);
    sxy += (s.amplitude_deg - ma) * (s.duration_ms - md);
  }
  out.model.slope_ms_per_deg = sxy / sxx;
  out.model.intercept_ms = md - out.model.slope_ms_per_deg * ma;
  return out;
}

std::vector<DeviationReport> deviation_report(std::span<const events::SaccadeEvent> saccades,
                                              std::span<const Label> labels) {
  if (saccades.size() != labels.size()) {
    throw Error(ErrorCode::BadValue, "saccades and labels must be the same length");
  }

  const MainSequenceModel normative;
  auto build = [&](const std::string& group, const std::vector<std::size_t>& idx) {
    DeviationReport rep;
    rep.group = group;
    rep.n_saccades = idx.size();
    std::vector<events::SaccadeEvent> subset;
    subset.reserve(idx.size());
    double sev = 0.0, sed = 0.0;
    for (const std::size_t i : idx) {
      const auto& s = saccades[i];
      subset.push_back(s);
      const double rv = s.peak_velocity_dps - predict_peak_velocity(s.amplitude_deg, normative);
      const double rd = s.duration_ms - predict_duration(s.amplitude_deg, normative);
      sev += rv * rv;
      sed += rd * rd;
      rep.velocity_points.push_back({s.amplitude_deg, s.peak_velocity_dps});
      rep.duration_points.push_back({s.amplitude_deg, s.duration_ms});
    }
    if (!idx.empty()) {
      rep.rmse_velocity_dps = std::sqrt(sev / idx.size());
      rep.rmse_duration_ms = std::sqrt(sed / idx.size());
    }
    rep.fitted = fit_main_sequence(subset);
    return rep;
  };

  std::vector<std::size_t> adhd, non, pooled;
  for (std::size_t i = 0; i < saccades.size(); ++i) {
    pooled.push_back(i);
    (labels[i] == Label::Adhd ? adhd : non).push_back(i);
  }

  std::vector<DeviationReport> out;
  out.push_back(build("ADHD", adhd));
  out.push_back(build("NonADHD", non));
  out.push_back(build("pooled", pooled));
  return out;
}

}  // namespace gazemark::mainseq
