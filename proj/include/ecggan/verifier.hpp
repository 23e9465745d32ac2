#pragma once

#include <string>
#include <vector>

#include "ecggan/beat.hpp"
#include "ecggan/config.hpp"
#include "ecggan/features.hpp"
#include "ecggan/types.hpp"

namespace ecggan {

/// Fiducial detector settings.
struct DetectorConfig {
  double qrs_slope_fraction = 0.03;   // of the peak summed |derivative|
  std::size_t qrs_gap_samples = 4;    // sub-threshold run that ends the complex
  double qrs_min_slope_mv = 0.02;     // summed |derivative| floor per sample
  std::size_t qrs_search_begin = 50;  // window where the QRS peak slope may sit
  std::size_t qrs_search_end = 350;
  std::size_t baseline_from = 8;  // PR-segment baseline: samples before QRS onset
  std::size_t baseline_to = 2;
  double wave_fraction = 0.05;    // P/T boundaries: fraction of the wave's peak
  double p_min_mv = 0.05;         // summed |amplitude| floor for a P wave
  double t_min_mv = 0.05;         // and for a T wave
  double p_search_ms = 300.0;
  double st_offset_ms = 60.0;
  double notch_dip_mv = 0.05;
  std::size_t smooth_samples = 5;  // centered moving average, 1 disables
  double noise_factor = 2.5;       // thresholds never drop below this times the 10th-percentile level

  /// Keys: detect.<field name>.
  static DetectorConfig from(const ConfigMap& cfg);
  ConfigMap to_config() const;
};

/// Classification thresholds. Keys mirror the field names, e.g.
/// `lbbb.qrs_ms`, `acutmi.st_uv.v23.female`, `lvh.voltage_mv`, `on.qtc_ms`.
struct RulesConfig {
  double lbbb_qrs_ms = 120.0;

  double acutmi_st_uv_default = 100.0;
  double acutmi_st_uv_v23_female = 150.0;
  double acutmi_st_uv_v23_male_40_plus = 200.0;
  double acutmi_st_uv_v23_male_under_40 = 250.0;
  double acutmi_male_age_split = 40.0;
  double acutmi_min_age_male = 20.0;
  double acutmi_min_age_female = 30.0;
  int acutmi_min_contiguous = 2;

  double lvh_voltage_mv = 3.5;
  double lvh_borderline_fraction = 0.10;
  double lvh_min_age = 35.0;

  double on_qtc_ms = 340.0;
  double on_st_dep_mv = 0.03;
  double on_st_elev_mv = 0.05;
  double on_st_floor_mv = 0.025;

  double other_qrs_ms = 120.0;
  double other_qtc_ms = 480.0;

  static RulesConfig from(const ConfigMap& cfg);
  /// Every key with its current value, in the config file syntax.
  ConfigMap to_config() const;
};

struct Diagnosis {
  Category category = Category::Normal;
  Severity severity = Severity::NO;
  std::vector<std::string> statements;
  double age_years = 50.0;  // demographics as applied
  Sex sex = Sex::Male;

  friend bool operator==(const Diagnosis&, const Diagnosis&) = default;
};

/// Measures the first beat window of a record. Failures to find a wave are
/// reported through BeatFeatures::undetectable rather than thrown.
BeatFeatures extract_features(const Record10s& record, const DetectorConfig& cfg = {});
BeatFeatures extract_features(const TwelveLeadBeat& beat, double rr_interval_ms, const DetectorConfig& cfg = {});

/// Rule cascade: DE > LBBB > ACUTMI > LVH > Other (AB, then BO, then ON) > Normal.
Diagnosis classify(const BeatFeatures& features, const Demographics& demographics, const RulesConfig& rules = {});

struct Verification {
  bool verified = false;
  Diagnosis diagnosis;
  BeatFeatures features;
};

Verification verify_target(const Record10s& record, Category target, const Demographics& demographics,
                           const RulesConfig& rules = {}, const DetectorConfig& detector = {});

/// Fixed-layout summary: rate, intervals, axes, statements, severity.
std::string render_report(const BeatFeatures& features, const Diagnosis& diagnosis);

}  // namespace ecggan
