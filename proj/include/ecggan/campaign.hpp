#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ecggan/gan.hpp"
#include "ecggan/plausibility.hpp"
#include "ecggan/verifier.hpp"

namespace ecggan {

/// Outcome of one campaign epoch: train, generate one candidate, gate it,
/// verify survivors.
struct CampaignEpoch {
  std::size_t epoch = 0;  // 1-based across all rounds
  std::size_t round = 0;
  double generator_loss = 0.0;
  double discriminator_loss = 0.0;
  double discriminator_accuracy = 0.0;
  PlausibilityVerdict plausibility;
  bool verification_attempted = false;
  bool verified = false;
  Diagnosis diagnosis;  // meaningful only when verification was attempted
};

/// A candidate that passed both the plausibility gate and verification.
struct AcceptedBeat {
  std::size_t epoch = 0;
  std::size_t round = 0;
  std::uint64_t init_seed = 0;  // parameter initialisation of the round that produced it
  BeatMatrix beat;
  Record10s record;
  Diagnosis diagnosis;
};

struct CampaignReport {
  Category target = Category::Normal;
  LearningMode mode = LearningMode::AccumulativeLearning;
  std::size_t epochs = 0;
  std::size_t plausible = 0;
  std::size_t verified = 0;
  std::vector<CampaignEpoch> log;
  std::vector<AcceptedBeat> accepted;

  /// verified / plausible in percent; empty when nothing was plausible.
  std::optional<double> success_rate() const;
};

struct CampaignOptions {
  PlausibilityConfig plausibility{};
  RulesConfig rules{};
  DetectorConfig detector{};
  Demographics demographics{};
  /// Replaces the rule verifier when set.
  std::function<Verification(const Record10s&, Category)> verify;
  std::function<void(const CampaignEpoch&)> on_epoch;
};

/// Candidate noise for epoch `epoch`, independent of the training RNG.
std::uint64_t candidate_noise_seed(std::uint64_t campaign_seed, std::size_t epoch);

/// Epoch-by-epoch driver. In Relearning mode the networks, optimisers and
/// training RNG are replaced by a fresh round after every verified beat;
/// accumulative learning keeps training the same state.
class Campaign {
 public:
  Campaign(const GanConfig& config, std::span<const BeatMatrix> training, std::span<const BeatMatrix> testing,
           Category target, CampaignOptions options = {});

  bool done() const { return report_.epochs >= config_.epochs_max; }
  const CampaignEpoch& step();
  const CampaignReport& run();

  GanState& state() { return state_; }
  const CampaignReport& report() const { return report_; }

  /// Continue from a saved state and the report written alongside it.
  void resume(GanState state, CampaignReport report);

 private:
  GanConfig config_;
  std::span<const BeatMatrix> training_;
  Category target_;
  CampaignOptions options_;
  MmdReference reference_;
  GanState state_;
  CampaignReport report_;
};

CampaignReport run_generation_campaign(const GanConfig& config, std::span<const BeatMatrix> training,
                                       std::span<const BeatMatrix> testing, Category target,
                                       CampaignOptions options = {});

}  // namespace ecggan
