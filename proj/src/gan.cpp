#include "ecggan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecggan/error.hpp"
#include "ecggan/nn/checkpoint.hpp"
#include "ecggan/nn/loss.hpp"

namespace ecggan {

namespace {

constexpr std::uint64_t kInitStream = 0x1a17;
constexpr std::uint64_t kTrainStream = 0x7a41;
constexpr std::uint64_t kCheckpointVersion = 1;
constexpr std::string_view kCheckpointMagic = "ECGGANCK";

}  // namespace

ArchitectureWidths ArchitectureWidths::scaled(std::size_t divisor) {
  ArchitectureWidths full;
  if (divisor == 0 || full.lstm_hidden % divisor != 0 || (2 * full.lstm_hidden / divisor) % 8 != 0) {
    throw Error(ErrorCode::InvalidArgument, "width divisor must be one of 1, 2, 4, 8, 16");
  }
  ArchitectureWidths w;
  w.lstm_hidden = full.lstm_hidden / divisor;
  for (std::size_t i = 0; i < 4; ++i) w.generator_channels[i] = full.generator_channels[i] / divisor;
  w.generator_channels[4] = 1;
  for (std::size_t i = 0; i < 4; ++i) w.discriminator_channels[i] = full.discriminator_channels[i] / divisor;
  return w;
}

nn::NetworkSpec build_generator(const ArchitectureWidths& w) {
  if ((2 * w.lstm_hidden) % 8 != 0) {
    throw Error(ErrorCode::ShapeMismatch, "BiLSTM output width must split evenly across 8 leads");
  }
  const std::size_t lead_channels = 2 * w.lstm_hidden / 8;
  const auto& c = w.generator_channels;
  nn::NetworkSpec net;
  net.name = "generator";
  net.input_shape = {kLatentSteps, kLatentFeatures};
  net.layers = {
      nn::bilstm("BiLSTM", kLatentFeatures, w.lstm_hidden),
      nn::reshape("Reshape", {kLatentSteps, 8, lead_channels}),
      nn::conv2d("Conv2d_1", lead_channels, c[0]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_2", c[0], c[1]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_3", c[1], c[2]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_4", c[2], c[3]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_5", c[3], c[4]),
  };
  return net;
}

nn::NetworkSpec build_discriminator(const ArchitectureWidths& w) {
  const auto& c = w.discriminator_channels;
  const nn::Stride halve{2, 1};
  nn::NetworkSpec net;
  net.name = "discriminator";
  net.input_shape = {kBeatSamples, 8, 1};
  const std::size_t flat = (kBeatSamples / 4) * 8 * c[3];
  net.layers = {
      nn::conv2d("Conv2d_1", 1, c[0]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_2", c[0], c[1], halve),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_3", c[1], c[2]),
      nn::leaky_relu_layer(),
      nn::conv2d("Conv2d_4", c[2], c[3], halve),
      nn::leaky_relu_layer(),
      nn::reshape("Flatten", {flat}),
      nn::dense("Dense", flat, 1),
      nn::sigmoid_layer(),
  };
  return net;
}

std::string_view mode_name(LearningMode m) {
  return m == LearningMode::Relearning ? "relearn" : "accumulate";
}

std::optional<LearningMode> parse_mode(std::string_view s) {
  if (s == "relearn" || s == "relearning" || s == "Relearning") return LearningMode::Relearning;
  if (s == "accumulate" || s == "accumulative" || s == "AccumulativeLearning") return LearningMode::AccumulativeLearning;
  return std::nullopt;
}

void GanConfig::validate() const {
  if (batch_size < 1) throw Error(ErrorCode::Config, "batch_size must be >= 1");
  if (epochs_max < 1) throw Error(ErrorCode::Config, "epochs_max must be >= 1");
  for (const auto* h : {&generator_optimizer, &discriminator_optimizer}) {
    if (!(h->learning_rate > 0.0) || !(h->beta1 >= 0.0 && h->beta1 < 1.0) || !(h->beta2 >= 0.0 && h->beta2 < 1.0) ||
        !(h->epsilon > 0.0)) {
      throw Error(ErrorCode::Config, "invalid Adam hyperparameters");
    }
  }
}

GanState make_state(const GanConfig& config, std::size_t round) {
  const std::uint64_t init_seed = derive_seed(config.seed, kInitStream, round);
  GanState s{nn::Network(build_generator(config.widths)),
             nn::Network(build_discriminator(config.widths)),
             nn::AdamState(),
             nn::AdamState(),
             Rng(derive_seed(init_seed, kTrainStream)),
             init_seed,
             round,
             0,
             0};
  s.generator.init(derive_seed(init_seed, 1));
  s.discriminator.init(derive_seed(init_seed, 2));
  s.generator_opt = nn::AdamState(s.generator.param_count());
  s.discriminator_opt = nn::AdamState(s.discriminator.param_count());
  return s;
}

nn::Tensor beat_to_tensor(const BeatMatrix& beat) {
  auto flat = beat.flat();
  return nn::Tensor({kBeatSamples, 8, 1}, std::vector<double>(flat.begin(), flat.end()));
}

BeatMatrix tensor_to_beat(const nn::Tensor& t) {
  if (t.size() != kBeatSamples * 8) {
    throw Error(ErrorCode::ShapeMismatch, "generator output " + nn::shape_string(t.shape()) + " is not 400x8x1");
  }
  return BeatMatrix(t.values());
}

nn::Tensor sample_noise(Rng& rng) {
  nn::Tensor z({kLatentSteps, kLatentFeatures});
  for (auto& v : z.values()) v = rng.normal();
  return z;
}

namespace {

// Loss and d(loss)/d(p) for one prediction inside a mean over `n` samples.
std::pair<double, double> bce_term(double p, double label, double n) {
  const double pv[1] = {p};
  const double yv[1] = {label};
  const double loss = nn::bce_loss(pv, yv);
  const double grad = nn::bce_grad(pv, yv)[0] / n;
  return {loss, grad};
}

nn::Tensor scalar_tensor(double v) { return nn::Tensor({1}, std::vector<double>{v}); }

}  // namespace

EpochMetrics train_epoch(GanState& state, std::span<const BeatMatrix> training, const GanConfig& config,
                         TrainOptions options) {
  if (training.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training beats");
  config.validate();

  std::vector<std::size_t> order(training.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, state.rng);

  EpochMetrics m;
  m.epoch = state.total_epochs + 1;
  double d_loss_sum = 0.0, g_loss_sum = 0.0, correct = 0.0;
  std::size_t d_count = 0, g_count = 0;

  for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
    const std::size_t b = std::min(config.batch_size, order.size() - start);
    const double n_d = static_cast<double>(2 * b);

    // Discriminator: real beats labelled 1, generated beats labelled 0.
    state.discriminator.zero_grad();
    double batch_d_loss = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
      const double p = state.discriminator.forward(beat_to_tensor(training[order[start + k]]))[0];
      auto [loss, grad] = bce_term(p, 1.0, n_d);
      batch_d_loss += loss;
      correct += p >= 0.5 ? 1.0 : 0.0;
      if (options.update_discriminator) state.discriminator.backward(scalar_tensor(grad));
    }
    for (std::size_t k = 0; k < b; ++k) {
      const nn::Tensor fake = state.generator.forward(sample_noise(state.rng)).reshaped({kBeatSamples, 8, 1});
      const double p = state.discriminator.forward(fake)[0];
      auto [loss, grad] = bce_term(p, 0.0, n_d);
      batch_d_loss += loss;
      correct += p < 0.5 ? 1.0 : 0.0;
      if (options.update_discriminator) state.discriminator.backward(scalar_tensor(grad));
    }
    if (options.update_discriminator) {
      nn::adam_step(state.discriminator.params(), state.discriminator_opt, config.discriminator_optimizer);
    }
    d_loss_sum += batch_d_loss;
    d_count += 2 * b;
    m.batch_discriminator_loss.push_back(batch_d_loss / n_d);

    // Generator: push D(G(z)) towards 1 through a frozen discriminator.
    state.generator.zero_grad();
    for (std::size_t k = 0; k < b; ++k) {
      const nn::Tensor fake = state.generator.forward(sample_noise(state.rng));
      const double p = state.discriminator.forward(fake.reshaped({kBeatSamples, 8, 1}))[0];
      auto [loss, grad] = bce_term(p, 1.0, static_cast<double>(b));
      g_loss_sum += loss;
      ++g_count;
      if (options.update_generator) {
        const nn::Tensor d_fake = state.discriminator.backward(scalar_tensor(grad), false);
        state.generator.backward(d_fake.reshaped(fake.shape()));
      }
    }
    if (options.update_generator) {
      nn::adam_step(state.generator.params(), state.generator_opt, config.generator_optimizer);
    }
  }

  m.discriminator_loss = d_loss_sum / static_cast<double>(d_count);
  m.generator_loss = g_loss_sum / static_cast<double>(g_count);
  m.discriminator_accuracy = correct / static_cast<double>(d_count);
  ++state.total_epochs;
  ++state.round_epochs;
  return m;
}

std::vector<BeatMatrix> generate(GanState& state, std::size_t n, std::uint64_t noise_seed) {
  Rng rng(noise_seed);
  std::vector<BeatMatrix> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(tensor_to_beat(state.generator.forward(sample_noise(rng))));
  return out;
}

double discriminator_accuracy(GanState& state, std::span<const BeatMatrix> real, std::span<const BeatMatrix> fake) {
  const std::size_t total = real.size() + fake.size();
  if (total == 0) throw Error(ErrorCode::EmptySet, "no beats to classify");
  std::size_t correct = 0;
  for (const auto& b : real) correct += state.discriminator.forward(beat_to_tensor(b))[0] >= 0.5 ? 1 : 0;
  for (const auto& b : fake) correct += state.discriminator.forward(beat_to_tensor(b))[0] < 0.5 ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::string save_checkpoint(GanState& state) {
  nn::BinaryWriter w;
  w.str(kCheckpointMagic);
  w.u64(kCheckpointVersion);
  w.u64(state.init_seed);
  w.u64(state.round);
  w.u64(state.round_epochs);
  w.u64(state.total_epochs);
  nn::write_network(w, state.generator);
  nn::write_network(w, state.discriminator);
  nn::write_adam(w, state.generator_opt);
  nn::write_adam(w, state.discriminator_opt);
  nn::write_rng(w, state.rng);
  return w.bytes();
}

void load_checkpoint(std::string_view bytes, GanState& state) {
  nn::BinaryReader r(bytes);
  if (r.str() != kCheckpointMagic) throw Error(ErrorCode::Format, "not a checkpoint");
  if (r.u64() != kCheckpointVersion) throw Error(ErrorCode::Format, "unsupported checkpoint version");
  state.init_seed = r.u64();
  state.round = r.u64();
  state.round_epochs = r.u64();
  state.total_epochs = r.u64();
  nn::read_network(r, state.generator);
  nn::read_network(r, state.discriminator);
  auto g = nn::read_adam(r);
  auto d = nn::read_adam(r);
  if (g.m.size() != state.generator.param_count() || d.m.size() != state.discriminator.param_count()) {
    throw Error(ErrorCode::Format, "optimizer state does not match networks");
  }
  state.generator_opt = std::move(g);
  state.discriminator_opt = std::move(d);
  nn::read_rng(r, state.rng);
  if (!r.done()) throw Error(ErrorCode::Format, "trailing bytes in checkpoint");
}

}  // namespace ecggan
