#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecggan/beat.hpp"
#include "ecggan/nn/network.hpp"
#include "ecggan/nn/optimizer.hpp"

namespace ecggan {

/// Channel widths of the two networks. The defaults are the full-size
/// architecture; `scaled` divides every width for desk-scale training.
struct ArchitectureWidths {
  std::size_t lstm_hidden = 64;  // per direction
  std::array<std::size_t, 5> generator_channels{128, 64, 32, 16, 1};
  std::array<std::size_t, 4> discriminator_channels{32, 64, 128, 256};

  static ArchitectureWidths scaled(std::size_t divisor);
  friend bool operator==(const ArchitectureWidths&, const ArchitectureWidths&) = default;
};

inline constexpr std::size_t kLatentSteps = 400;
inline constexpr std::size_t kLatentFeatures = 12;

/// BiLSTM(12 -> 2 x hidden), reshaped per time step to 8 leads x (2 x hidden / 8)
/// channels, then five 16x3 convolutions with LeakyReLU between them.
nn::NetworkSpec build_generator(const ArchitectureWidths& widths = {});

/// Four 16x3 convolutions (the 2nd and 4th stride 2 along time) with LeakyReLU,
/// flattened into a single-unit dense layer and a sigmoid.
nn::NetworkSpec build_discriminator(const ArchitectureWidths& widths = {});

enum class LearningMode { Relearning, AccumulativeLearning };

std::string_view mode_name(LearningMode m);
std::optional<LearningMode> parse_mode(std::string_view s);

struct GanConfig {
  std::size_t batch_size = 32;
  std::size_t epochs_max = 1000;
  std::uint64_t seed = 1;
  LearningMode mode = LearningMode::AccumulativeLearning;
  ArchitectureWidths widths{};
  nn::AdamHyper generator_optimizer{};
  nn::AdamHyper discriminator_optimizer{};

  void validate() const;
};

/// Parameters, optimiser moments and RNG of one training round.
struct GanState {
  nn::Network generator;
  nn::Network discriminator;
  nn::AdamState generator_opt;
  nn::AdamState discriminator_opt;
  Rng rng;
  std::uint64_t init_seed = 0;
  std::size_t round = 0;
  std::size_t round_epochs = 0;  // epochs since the last (re)initialisation
  std::size_t total_epochs = 0;  // epochs across all rounds
};

/// Fresh state for training round `round`, seeded from (config.seed, round).
GanState make_state(const GanConfig& config, std::size_t round = 0);

struct EpochMetrics {
  std::size_t epoch = 0;
  double generator_loss = 0.0;
  double discriminator_loss = 0.0;
  double discriminator_accuracy = 0.0;
  std::vector<double> batch_discriminator_loss;
};

struct TrainOptions {
  bool update_generator = true;
  bool update_discriminator = true;
};

/// One shuffled pass over `training`: per batch one discriminator update on
/// real (label 1) and generated (label 0) beats, then one generator update on
/// the non-saturating loss -ln D(G(z)).
EpochMetrics train_epoch(GanState& state, std::span<const BeatMatrix> training, const GanConfig& config,
                         TrainOptions options = {});

nn::Tensor beat_to_tensor(const BeatMatrix& beat);
BeatMatrix tensor_to_beat(const nn::Tensor& t);

/// i.i.d. standard-normal latent sequence of shape 400 x 12.
nn::Tensor sample_noise(Rng& rng);

/// Forward-passes n fresh latent sequences drawn from `noise_seed`.
std::vector<BeatMatrix> generate(GanState& state, std::size_t n, std::uint64_t noise_seed);

/// Fraction of the real (label 1) and fake (label 0) beats the discriminator
/// classifies correctly at threshold 0.5. No parameters change.
double discriminator_accuracy(GanState& state, std::span<const BeatMatrix> real, std::span<const BeatMatrix> fake);

/// Bit-exact binary checkpoint of a state.
std::string save_checkpoint(GanState& state);
void load_checkpoint(std::string_view bytes, GanState& state);

}  // namespace ecggan
