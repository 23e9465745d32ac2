#include "ecggan/beat.hpp"

#include <string>

namespace ecggan {

TwelveLeadBeat derive_limb_leads(const BeatMatrix& beat) {
  TwelveLeadBeat out;
  for (std::size_t s = 0; s < kBeatSamples; ++s) {
    const double i = beat(s, 0);
    const double ii = beat(s, 1);
    out(s, index_of(Lead::I)) = i;
    out(s, index_of(Lead::II)) = ii;
    out(s, index_of(Lead::III)) = -i + ii;
    out(s, index_of(Lead::aVR)) = -0.5 * i - 0.5 * ii;
    out(s, index_of(Lead::aVL)) = i - 0.5 * ii;
    out(s, index_of(Lead::aVF)) = -0.5 * i + ii;
    for (std::size_t v = 0; v < 6; ++v) out(s, index_of(Lead::V1) + v) = beat(s, 2 + v);
  }
  return out;
}

BeatMatrix extract_centered_window(const RawBeat& raw) {
  if (!(raw.heart_rate_bpm > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "heart rate must be positive");
  }
  if (raw.heart_rate_bpm > kMaxHeartRateBpm) {
    throw Error(ErrorCode::RateExcluded, "heart rate " + std::to_string(raw.heart_rate_bpm) + " bpm");
  }
  if (raw.leads != 8 && raw.leads != 12) {
    throw Error(ErrorCode::InvalidArgument, "raw beat must have 8 or 12 leads");
  }
  if (raw.samples.size() != kRawBeatSamples * raw.leads) {
    throw Error(ErrorCode::InvalidBeat, "raw beat must hold 1200 samples per lead");
  }

  const double center_ms = raw.q_onset_ms + raw.qrs_dur_ms / 2.0;
  const double duration_ms = static_cast<double>(kRawBeatSamples);
  if (!std::isfinite(center_ms) || raw.q_onset_ms < 0.0 || raw.qrs_dur_ms < 0.0 ||
      raw.q_onset_ms + raw.qrs_dur_ms > duration_ms) {
    throw Error(ErrorCode::WindowOutOfRange, "QRS fiducials outside the 1200 ms beat");
  }

  // 800 raw samples, clamped to stay inside the representative beat.
  constexpr long window = 2 * static_cast<long>(kBeatSamples);
  long start = std::lround(center_ms) - window / 2;
  start = std::clamp(start, 0L, static_cast<long>(kRawBeatSamples) - window);

  // Column of each training lead inside the raw layout.
  std::array<std::size_t, 8> source{};
  for (std::size_t k = 0; k < 8; ++k) {
    source[k] = raw.leads == 12 ? index_of(kTrainingLeads[k]) : k;
  }

  std::vector<double> data(kBeatSamples * 8);
  for (std::size_t s = 0; s < kBeatSamples; ++s) {
    const auto r0 = static_cast<std::size_t>(start) + 2 * s;
    for (std::size_t k = 0; k < 8; ++k) {
      data[s * 8 + k] = 0.5 * (raw.samples[r0 * raw.leads + source[k]] + raw.samples[(r0 + 1) * raw.leads + source[k]]);
    }
  }
  return BeatMatrix(std::move(data));
}

Record10s stitch_record(const TwelveLeadBeat& beat) {
  Record10s record;
  for (std::size_t t = 0; t < kRecordSamples; ++t) {
    const std::size_t s = t % kBeatSamples;
    for (std::size_t l = 0; l < 12; ++l) record.samples(t, l) = beat(s, l);
  }
  record.rr_interval_ms = kRrIntervalMs;
  return record;
}

TwelveLeadBeat first_beat(const Record10s& record) {
  TwelveLeadBeat beat;
  for (std::size_t s = 0; s < kBeatSamples; ++s)
    for (std::size_t l = 0; l < 12; ++l) beat(s, l) = record.samples(s, l);
  return beat;
}

BeatMatrix training_leads(const TwelveLeadBeat& beat) {
  BeatMatrix out;
  for (std::size_t s = 0; s < kBeatSamples; ++s)
    for (std::size_t k = 0; k < 8; ++k) out(s, k) = beat(s, index_of(kTrainingLeads[k]));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double train_fraction,
                                                                            std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5911));
  shuffle(order, rng);

  // The epsilon keeps products such as 10 * 0.9 from landing just below an integer.
  const auto n_train =
      std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 1e-9)));
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<long>(n_train), order.end());
  return {std::move(train), std::move(test)};
}

}  // namespace ecggan
