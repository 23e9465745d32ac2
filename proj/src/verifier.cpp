#include "ecggan/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <type_traits>

#include "ecggan/error.hpp"
#include "ecggan/io.hpp"

namespace ecggan {

double bazett_qtc_ms(double qt_ms, double rr_ms) { return qt_ms / std::sqrt(rr_ms / 1000.0); }

double hexaxial_axis_deg(double area_i, double area_avf) {
  double deg = std::atan2(area_avf, area_i) * 180.0 / std::numbers::pi;
  if (deg <= -180.0) deg += 360.0;
  return deg;
}

namespace {

template <typename F>
void for_each_detector_key(DetectorConfig& d, F&& f) {
  f("detect.qrs_slope_fraction", d.qrs_slope_fraction);
  f("detect.qrs_gap_samples", d.qrs_gap_samples);
  f("detect.qrs_min_slope_mv", d.qrs_min_slope_mv);
  f("detect.qrs_search_begin", d.qrs_search_begin);
  f("detect.qrs_search_end", d.qrs_search_end);
  f("detect.baseline_from", d.baseline_from);
  f("detect.baseline_to", d.baseline_to);
  f("detect.wave_fraction", d.wave_fraction);
  f("detect.p_min_mv", d.p_min_mv);
  f("detect.t_min_mv", d.t_min_mv);
  f("detect.p_search_ms", d.p_search_ms);
  f("detect.st_offset_ms", d.st_offset_ms);
  f("detect.notch_dip_mv", d.notch_dip_mv);
  f("detect.smooth_samples", d.smooth_samples);
  f("detect.noise_factor", d.noise_factor);
}

}  // namespace

DetectorConfig DetectorConfig::from(const ConfigMap& cfg) {
  DetectorConfig d;
  for_each_detector_key(d, [&](const char* key, auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
      v = cfg.get_double(key, v);
    } else {
      const long long n = cfg.get_int(key, static_cast<long long>(v));
      if (n < 0) throw Error(ErrorCode::Config, std::string(key) + " must not be negative");
      v = static_cast<std::size_t>(n);
    }
  });
  if (d.smooth_samples == 0) throw Error(ErrorCode::Config, "detect.smooth_samples must be at least 1");
  if (d.qrs_search_begin >= d.qrs_search_end || d.qrs_search_end > kBeatSamples) {
    throw Error(ErrorCode::Config, "detect.qrs_search_begin/end must describe a window inside the beat");
  }
  return d;
}

ConfigMap DetectorConfig::to_config() const {
  ConfigMap m;
  DetectorConfig copy = *this;
  for_each_detector_key(copy, [&](const char* key, auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) m.set(key, format_double(v));
    else m.set(key, std::to_string(v));
  });
  return m;
}

namespace {

constexpr double kMsPerSample = 1000.0 / kSps;

std::size_t ms_to_samples(double ms) { return static_cast<std::size_t>(std::lround(ms / kMsPerSample)); }

// Two positive local maxima inside [begin, end) separated by a dip of at least `dip`.
bool has_notch(const std::vector<double>& v, std::size_t begin, std::size_t end, double dip) {
  std::vector<std::size_t> peaks;
  for (std::size_t n = std::max<std::size_t>(begin, 1); n + 1 < end && n + 1 < v.size(); ++n)
    if (v[n] > v[n - 1] && v[n] >= v[n + 1] && v[n] > 0.0) peaks.push_back(n);
  for (std::size_t a = 0; a < peaks.size(); ++a)
    for (std::size_t b = a + 1; b < peaks.size(); ++b) {
      const double low = *std::min_element(v.begin() + static_cast<long>(peaks[a]), v.begin() + static_cast<long>(peaks[b]) + 1);
      if (std::min(v[peaks[a]], v[peaks[b]]) - low >= dip) return true;
    }
  return false;
}

// Waves cover most of the window, so the noise level comes from a low quantile.
double noise_level(std::vector<double> v) {
  auto mid = v.begin() + static_cast<long>(v.size() / 10);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

BeatFeatures extract_features(const Record10s& record, const DetectorConfig& cfg) {
  return extract_features(first_beat(record), record.rr_interval_ms, cfg);
}

BeatFeatures extract_features(const TwelveLeadBeat& raw, double rr_interval_ms, const DetectorConfig& cfg) {
  constexpr std::size_t N = kBeatSamples, L = 12;
  BeatFeatures f;
  f.rate_bpm = 60000.0 / rr_interval_ms;

  // Light smoothing so sample noise does not drive the thresholds.
  TwelveLeadBeat beat = raw;
  if (cfg.smooth_samples > 1) {
    const std::size_t half = cfg.smooth_samples / 2;
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t n = 0; n < N; ++n) {
        const std::size_t a = n >= half ? n - half : 0, b = std::min(N, n + half + 1);
        double s = 0.0;
        for (std::size_t m = a; m < b; ++m) s += raw(m, l);
        beat(n, l) = s / static_cast<double>(b - a);
      }
  }

  // QRS: summed absolute first difference, grown outward from its peak.
  std::vector<double> slope(N - 1, 0.0);
  for (std::size_t n = 0; n + 1 < N; ++n)
    for (std::size_t l = 0; l < L; ++l) slope[n] += std::abs(beat(n + 1, l) - beat(n, l));
  const std::size_t lo = std::min(cfg.qrs_search_begin, N - 2), hi = std::min(cfg.qrs_search_end, N - 1);
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(slope.begin() + static_cast<long>(lo), slope.begin() + static_cast<long>(hi)) - slope.begin());
  if (slope[peak] < cfg.qrs_min_slope_mv) {
    f.undetectable = "QRS";
    return f;
  }
  const double threshold = std::max(cfg.qrs_slope_fraction * slope[peak], cfg.noise_factor * noise_level(slope));
  std::size_t first = peak, last = peak;
  for (std::size_t n = peak; n-- > 0;) {
    if (slope[n] >= threshold) first = n;
    else if (first - n > cfg.qrs_gap_samples) break;
  }
  for (std::size_t n = peak + 1; n < slope.size(); ++n) {
    if (slope[n] >= threshold) last = n;
    else if (n - last > cfg.qrs_gap_samples) break;
  }
  const std::size_t onset = first, offset = last + 1;
  f.qrs_dur_ms = static_cast<double>(offset - onset) * kMsPerSample;
  f.fiducials.qrs_onset = onset;
  f.fiducials.qrs_offset = offset;

  // Baseline per lead from the PR segment just ahead of the QRS.
  std::array<double, L> base{};
  {
    const std::size_t b0 = onset >= cfg.baseline_from ? onset - cfg.baseline_from : 0;
    const std::size_t b1 = std::max(b0 + 1, onset >= cfg.baseline_to ? onset - cfg.baseline_to : 0);
    for (std::size_t l = 0; l < L; ++l) {
      double s = 0.0;
      for (std::size_t n = b0; n < b1; ++n) s += beat(n, l);
      base[l] = s / static_cast<double>(b1 - b0);
    }
  }
  auto centered = [&](std::size_t n, std::size_t l) { return beat(n, l) - base[l]; };
  auto magnitude = [&](std::size_t n) {
    double s = 0.0;
    for (std::size_t l = 0; l < L; ++l) s += std::abs(centered(n, l));
    return s;
  };

  // Per-lead QRS voltages, notches and ST level.
  const std::size_t st_at = std::min(N - 1, offset + ms_to_samples(cfg.st_offset_ms));
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<double> v(N);
    for (std::size_t n = 0; n < N; ++n) v[n] = centered(n, l);
    double r = 0.0, s = 0.0;
    for (std::size_t n = onset; n < offset; ++n) {
      r = std::max(r, v[n]);
      s = std::min(s, v[n]);
    }
    f.r_amplitude_mv[l] = r;
    f.s_amplitude_mv[l] = -s;
    f.r_notched[l] = has_notch(v, onset, offset, cfg.notch_dip_mv);
    f.st_level_uv[l] = v[st_at] * 1000.0;
  }

  // Wave boundaries where the summed magnitude drops below a fraction of its peak.
  auto grow = [&](std::size_t at, std::size_t lo_bound, std::size_t hi_bound, double level, std::size_t& begin,
                  std::size_t& end) {
    begin = at;
    while (begin > lo_bound && magnitude(begin - 1) >= level) --begin;
    end = at;
    while (end + 1 < hi_bound && magnitude(end + 1) >= level) ++end;
  };

  // T wave: after the ST sampling point.
  std::size_t t_peak = st_at;
  for (std::size_t n = st_at; n < N; ++n)
    if (magnitude(n) > magnitude(t_peak)) t_peak = n;
  if (magnitude(t_peak) < cfg.t_min_mv) {
    f.undetectable = "T";
    return f;
  }
  std::vector<double> mags(N);
  for (std::size_t n = 0; n < N; ++n) mags[n] = magnitude(n);
  const double mag_floor = cfg.noise_factor * noise_level(mags);
  std::size_t t_begin = 0, t_end = 0;
  grow(t_peak, offset, N, std::max(cfg.wave_fraction * magnitude(t_peak), mag_floor), t_begin, t_end);
  f.qt_ms = static_cast<double>(t_end + 1 - onset) * kMsPerSample;
  f.fiducials.t_end = t_end + 1;
  f.qtc_ms = bazett_qtc_ms(f.qt_ms, rr_interval_ms);

  // P wave: before the baseline window.
  const std::size_t p_hi = onset >= cfg.baseline_from ? onset - cfg.baseline_from : 0;
  const std::size_t p_lo = p_hi > ms_to_samples(cfg.p_search_ms) ? p_hi - ms_to_samples(cfg.p_search_ms) : 0;
  if (p_hi <= p_lo) {
    f.undetectable = "P";
    return f;
  }
  std::size_t p_peak = p_lo;
  for (std::size_t n = p_lo; n < p_hi; ++n)
    if (magnitude(n) > magnitude(p_peak)) p_peak = n;
  if (magnitude(p_peak) < cfg.p_min_mv) {
    f.undetectable = "P";
    return f;
  }
  std::size_t p_begin = 0, p_end = 0;
  grow(p_peak, 0, onset, std::max(cfg.wave_fraction * magnitude(p_peak), mag_floor), p_begin, p_end);
  f.pr_ms = static_cast<double>(onset - p_begin) * kMsPerSample;
  f.fiducials.p_onset = p_begin;
  f.fiducials.p_offset = p_end + 1;

  // Axes from net areas in leads I and aVF.
  auto axis = [&](std::size_t begin, std::size_t end) {
    double a_i = 0.0, a_f = 0.0;
    for (std::size_t n = begin; n < end; ++n) {
      a_i += centered(n, index_of(Lead::I));
      a_f += centered(n, index_of(Lead::aVF));
    }
    return hexaxial_axis_deg(a_i, a_f);
  };
  f.p_axis_deg = axis(p_begin, p_end + 1);
  f.qrs_axis_deg = axis(onset, offset);
  f.t_axis_deg = axis(offset, t_end + 1);
  return f;
}

Verification verify_target(const Record10s& record, Category target, const Demographics& demographics,
                           const RulesConfig& rules, const DetectorConfig& detector) {
  Verification v;
  v.features = extract_features(record, detector);
  v.diagnosis = classify(v.features, demographics, rules);
  v.verified = v.diagnosis.category == target;
  return v;
}

std::string render_report(const BeatFeatures& f, const Diagnosis& d) {
  auto line = [](const char* fmt, auto... args) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf) + "\n";
  };
  std::string out;
  out += line("Rate %.0f BPM", f.rate_bpm);
  if (f.undetectable) {
    out += "Measurements unavailable: " + *f.undetectable + " wave undetectable\n";
  } else {
    out += line("PR %.0f ms", f.pr_ms);
    out += line("QRSd %.0f ms", f.qrs_dur_ms);
    out += line("QT %.0f ms", f.qt_ms);
    out += line("QTc %.0f ms", f.qtc_ms);
    out += line("Axes P %.0f QRS %.0f T %.0f", f.p_axis_deg, f.qrs_axis_deg, f.t_axis_deg);
  }
  out += line("Age %.0f Sex %s", d.age_years, std::string(sex_name(d.sex)).c_str());
  for (const auto& s : d.statements) out += s + "\n";
  out += "Category " + std::string(category_name(d.category)) + "\n";
  out += "Severity " + std::string(severity_code(d.severity)) + " (" + std::string(severity_label(d.severity)) + " ECG)\n";
  return out;
}

}  // namespace ecggan
