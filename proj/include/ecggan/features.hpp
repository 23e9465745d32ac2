#pragma once

#include <array>
#include <optional>
#include <string>

#include "ecggan/types.hpp"

namespace ecggan {

/// Sample indices of the located wave boundaries within the beat window.
struct Fiducials {
  std::size_t p_onset = 0, p_offset = 0, qrs_onset = 0, qrs_offset = 0, t_end = 0;
  friend bool operator==(const Fiducials&, const Fiducials&) = default;
};

/// Interval, axis and per-lead measurements of one beat. Per-lead arrays
/// follow kStandardLeads order.
struct BeatFeatures {
  double rate_bpm = 75.0;
  double pr_ms = 0.0;
  double qrs_dur_ms = 0.0;
  double qt_ms = 0.0;
  double qtc_ms = 0.0;
  double p_axis_deg = 0.0;
  double qrs_axis_deg = 0.0;
  double t_axis_deg = 0.0;
  std::array<double, 12> st_level_uv{};  // at J + 60 ms, relative to baseline
  std::array<bool, 12> r_notched{};
  std::array<double, 12> r_amplitude_mv{};  // largest positive QRS deflection
  std::array<double, 12> s_amplitude_mv{};  // depth of the largest negative QRS deflection
  Fiducials fiducials;
  /// Set when a wave could not be located; such beats classify as defective.
  std::optional<std::string> undetectable;

  double st_uv(Lead lead) const { return st_level_uv[index_of(lead)]; }
  bool notched(Lead lead) const { return r_notched[index_of(lead)]; }
  double r_mv(Lead lead) const { return r_amplitude_mv[index_of(lead)]; }
  double s_mv(Lead lead) const { return s_amplitude_mv[index_of(lead)]; }

  friend bool operator==(const BeatFeatures&, const BeatFeatures&) = default;
};

/// Bazett correction, QT / sqrt(RR in seconds).
double bazett_qtc_ms(double qt_ms, double rr_ms);

/// Frontal-plane axis in degrees from net areas in leads I and aVF, in (-180, 180].
double hexaxial_axis_deg(double area_i, double area_avf);

}  // namespace ecggan
