#include "ecggan/campaign.hpp"

#include "ecggan/error.hpp"
#include "ecggan/evalstats.hpp"

namespace ecggan {

namespace {

constexpr std::uint64_t kCandidateStream = 0xca9d;

}  // namespace

std::optional<double> CampaignReport::success_rate() const {
  if (plausible == 0) return std::nullopt;
  return ecggan::success_rate(plausible, verified);
}

std::uint64_t candidate_noise_seed(std::uint64_t campaign_seed, std::size_t epoch) {
  return derive_seed(campaign_seed, kCandidateStream, epoch);
}

Campaign::Campaign(const GanConfig& config, std::span<const BeatMatrix> training, std::span<const BeatMatrix> testing,
                   Category target, CampaignOptions options)
    : config_(config),
      training_(training),
      target_(target),
      options_(std::move(options)),
      reference_(testing, options_.plausibility),
      state_(make_state(config)) {
  config_.validate();
  if (training.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training beats");
  if (target == Category::Other) throw Error(ErrorCode::InvalidArgument, "Other is not a generation target");
  report_.target = target;
  report_.mode = config.mode;
}

const CampaignEpoch& Campaign::step() {
  if (done()) throw Error(ErrorCode::InvalidArgument, "campaign already ran epochs_max epochs");
  const EpochMetrics m = train_epoch(state_, training_, config_);

  CampaignEpoch e;
  e.epoch = state_.total_epochs;
  e.round = state_.round;
  e.generator_loss = m.generator_loss;
  e.discriminator_loss = m.discriminator_loss;
  e.discriminator_accuracy = m.discriminator_accuracy;

  const BeatMatrix candidate = generate(state_, 1, candidate_noise_seed(config_.seed, e.epoch)).front();
  e.plausibility = check(candidate, reference_, state_.round_epochs, options_.plausibility);
  ++report_.epochs;

  if (e.plausibility.passed) {
    ++report_.plausible;
    const Record10s record = stitch_record(derive_limb_leads(candidate));
    const Verification v = options_.verify ? options_.verify(record, target_)
                                           : verify_target(record, target_, options_.demographics, options_.rules,
                                                           options_.detector);
    e.verification_attempted = true;
    e.verified = v.verified;
    e.diagnosis = v.diagnosis;
    if (v.verified) {
      ++report_.verified;
      report_.accepted.push_back({e.epoch, e.round, state_.init_seed, candidate, record, v.diagnosis});
      if (config_.mode == LearningMode::Relearning) {
        const std::size_t total = state_.total_epochs;
        state_ = make_state(config_, state_.round + 1);
        state_.total_epochs = total;
      }
    }
  }

  report_.log.push_back(std::move(e));
  if (options_.on_epoch) options_.on_epoch(report_.log.back());
  return report_.log.back();
}

const CampaignReport& Campaign::run() {
  while (!done()) step();
  return report_;
}

void Campaign::resume(GanState state, CampaignReport report) {
  if (report.epochs != state.total_epochs) throw Error(ErrorCode::Format, "report and state disagree on epochs run");
  if (report.target != target_ || report.mode != config_.mode) {
    throw Error(ErrorCode::Format, "report belongs to a different campaign");
  }
  state_ = std::move(state);
  report_ = std::move(report);
}

CampaignReport run_generation_campaign(const GanConfig& config, std::span<const BeatMatrix> training,
                                       std::span<const BeatMatrix> testing, Category target, CampaignOptions options) {
  Campaign c(config, training, testing, target, std::move(options));
  return c.run();
}

}  // namespace ecggan
