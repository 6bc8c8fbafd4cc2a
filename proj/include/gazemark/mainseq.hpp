#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gazemark/events.hpp"
#include "gazemark/types.hpp"

namespace gazemark::mainseq {

/// Main-sequence parameters. The velocity relation saturates at
/// theta_max_dps with scale constant c_deg; the duration relation is affine.
/// Normative values for healthy adults: 500 dps, 14 deg, 2.2 ms/deg, 21 ms.
struct MainSequenceModel {
  double theta_max_dps = 500.0;
  double c_deg = 14.0;
  double slope_ms_per_deg = 2.2;
  double intercept_ms = 21.0;
};

/// theta_max * (1 - exp(-amplitude / c)); strictly increasing, bounded above
/// by theta_max. Throws NegativeAmplitude.
double predict_peak_velocity(double amplitude_deg, const MainSequenceModel& m);

/// slope * amplitude + intercept. Throws NegativeAmplitude.
double predict_duration(double amplitude_deg, const MainSequenceModel& m);

struct FitResult {
  MainSequenceModel model;
  std::size_t n_used = 0;
  std::size_t n_outliers_excluded = 0;  // peak velocity > 1000 dps, implausible at 60 Hz
};

inline constexpr std::size_t kFitMinSaccades = 8;
inline constexpr double kFitMinAmplitudeSpanDeg = 0.1;
inline constexpr double kVelocityOutlierDps = 1000.0;

/// Least-squares fit of both relations. (theta_max, c) by coarse log-spaced
/// grid over [100,1000] x [2,50] followed by coordinate descent (exact
/// theta_max given c, golden-section over c) to 1e-6 relative steps;
/// (slope, intercept) by ordinary least squares.
/// Throws TooFewSaccades, DegenerateAmplitudeRange.
FitResult fit_main_sequence(std::span<const events::SaccadeEvent> saccades);

struct DeviationReport {
  std::string group;  // "ADHD", "NonADHD", or "pooled"
  double rmse_velocity_dps = 0.0;  // against the normative model
  double rmse_duration_ms = 0.0;
  std::size_t n_saccades = 0;
  FitResult fitted;
  std::vector<std::array<double, 2>> velocity_points;  // (amplitude_deg, peak_velocity_dps)
  std::vector<std::array<double, 2>> duration_points;  // (amplitude_deg, duration_ms)
};

/// Per-group and pooled fits plus RMSE against the normative model, with the
/// point clouds used for the overlay plots.
std::vector<DeviationReport> deviation_report(std::span<const events::SaccadeEvent> saccades,
                                              std::span<const Label> labels);

}  // namespace gazemark::mainseq
