#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ecggan/error.hpp"
#include "ecggan/random.hpp"
#include "ecggan/types.hpp"

namespace ecggan {

inline constexpr double kSps = 500.0;
inline constexpr double kRawSps = 1000.0;
inline constexpr std::size_t kBeatSamples = 400;
inline constexpr std::size_t kRawBeatSamples = 1200;
inline constexpr std::size_t kRecordSamples = 5000;
inline constexpr std::size_t kStitchCopies = 13;
inline constexpr double kRrIntervalMs = 800.0;
inline constexpr double kMaxHeartRateBpm = 100.0;

/// Fixed-size sample x lead matrix of millivolt amplitudes, stored sample-major
/// (all leads of sample 0, then sample 1, ...).
template <std::size_t Samples, std::size_t Leads>
class LeadMatrix {
 public:
  static constexpr std::size_t kSamples = Samples;
  static constexpr std::size_t kLeads = Leads;

  LeadMatrix() : data_(Samples * Leads, 0.0) {}

  explicit LeadMatrix(std::vector<double> data) : data_(std::move(data)) {
    if (data_.size() != Samples * Leads) {
      throw Error(ErrorCode::InvalidBeat, "expected " + std::to_string(Samples * Leads) +
                                              " values, got " + std::to_string(data_.size()));
    }
    if (!all_finite()) throw Error(ErrorCode::InvalidBeat, "non-finite amplitude");
  }

  double operator()(std::size_t sample, std::size_t lead) const { return data_[sample * Leads + lead]; }
  double& operator()(std::size_t sample, std::size_t lead) { return data_[sample * Leads + lead]; }

  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  std::vector<double> lead(std::size_t lead) const {
    std::vector<double> out(Samples);
    for (std::size_t s = 0; s < Samples; ++s) out[s] = (*this)(s, lead);
    return out;
  }

  /// Lead-major flattening (all of lead 0, then lead 1, ...).
  std::vector<double> lead_major() const {
    std::vector<double> out;
    out.reserve(data_.size());
    for (std::size_t l = 0; l < Leads; ++l)
      for (std::size_t s = 0; s < Samples; ++s) out.push_back((*this)(s, l));
    return out;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const LeadMatrix&, const LeadMatrix&) = default;

 private:
  std::vector<double> data_;
};

/// 400 x 8 training beat: leads I, II, V1..V6 at 500 SPS.
using BeatMatrix = LeadMatrix<kBeatSamples, 8>;

/// 400 x 12 beat in standard lead order.
using TwelveLeadBeat = LeadMatrix<kBeatSamples, 12>;

struct Record10s {
  LeadMatrix<kRecordSamples, 12> samples;
  double rr_interval_ms = kRrIntervalMs;

  friend bool operator==(const Record10s&, const Record10s&) = default;
};

/// Representative beat as delivered by an upstream analyser: 1200 ms at
/// 1000 SPS with QRS fiducials and the source recording's rate.
struct RawBeat {
  /// 1200 x L sample-major; L is 8 (I, II, V1..V6) or 12 (standard order).
  std::vector<double> samples;
  std::size_t leads = 8;
  double q_onset_ms = 0.0;
  double qrs_dur_ms = 0.0;
  double heart_rate_bpm = 60.0;
  Demographics demographics;
};

/// Augments leads I and II with III, aVR, aVL and aVF; precordial leads are copied.
TwelveLeadBeat derive_limb_leads(const BeatMatrix& beat);

/// Selects the 800 ms window centred at Qo + QRSd/2 and decimates it to 500 SPS.
BeatMatrix extract_centered_window(const RawBeat& raw);

/// Tiles the beat 13 times and keeps the first 10 s.
Record10s stitch_record(const TwelveLeadBeat& beat);

/// First `kBeatSamples` samples of a record; equals the source beat for stitched records.
TwelveLeadBeat first_beat(const Record10s& record);

/// Leads I, II, V1..V6 of a 12-lead beat.
BeatMatrix training_leads(const TwelveLeadBeat& beat);

/// Seeded shuffle of 0..n-1 split into (train, test) index lists.
/// The training part holds floor(n * train_fraction) items.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            double train_fraction,
                                                                            std::uint64_t seed);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(const std::vector<T>& items, double train_fraction,
                                                        std::uint64_t seed) {
  auto [train_idx, test_idx] = split_indices(items.size(), train_fraction, seed);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(train_idx.size());
  out.second.reserve(test_idx.size());
  for (auto i : train_idx) out.first.push_back(items[i]);
  for (auto i : test_idx) out.second.push_back(items[i]);
  return out;
}

}  // namespace ecggan
