#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ecggan/nn/layer_spec.hpp"
#include "ecggan/nn/tensor.hpp"
#include "ecggan/random.hpp"

namespace ecggan::nn {

/// A parameter block and its gradient accumulator.
struct ParamView {
  std::span<double> value;
  std::span<double> grad;
};

/// Runtime layer. forward() records whatever backward() needs; backward()
/// returns the input gradient and, when `param_grads` is set, adds into the
/// parameter gradient buffers.
class Layer {
 public:
  virtual ~Layer() = default;

  const LayerSpec& spec() const { return spec_; }

  virtual Tensor forward(const Tensor& input) = 0;
  virtual Tensor backward(const Tensor& upstream, bool param_grads) = 0;
  virtual std::vector<ParamView> params() { return {}; }
  virtual void init(Rng& /*rng*/) {}

 protected:
  explicit Layer(LayerSpec spec) : spec_(std::move(spec)) {}
  [[noreturn]] void not_recorded() const;

  LayerSpec spec_;
};

class Conv2D final : public Layer {
 public:
  explicit Conv2D(LayerSpec spec);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;
  std::vector<ParamView> params() override;
  void init(Rng& rng) override;

  /// Weights laid out [kernel_h][kernel_w][in][out].
  std::vector<double>& weights() { return weights_; }
  std::vector<double>& bias() { return bias_; }

 private:
  struct Geometry {
    std::size_t in_time, in_leads, out_time, out_leads, pad_time, pad_lead, phase_len;
    std::size_t taps_per_phase, time_span, row_len;
  };
  std::size_t patch_size() const { return spec_.kernel.height * spec_.kernel.width * spec_.in_size; }
  Geometry geometry(const Shape& input) const;
  std::size_t phase_offset(const Geometry& g, std::size_t lead, std::size_t channel, std::size_t phase) const;
  long source_lead(const Geometry& g, std::size_t lo, std::size_t kl) const;

  std::vector<double> weights_, bias_, grad_weights_, grad_bias_;
  std::vector<double> phased_input_;
  std::optional<Shape> input_shape_;
};

class BiLSTM final : public Layer {
 public:
  explicit BiLSTM(LayerSpec spec);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;
  std::vector<ParamView> params() override;
  void init(Rng& rng) override;

  /// Per direction (0 = forward in time, 1 = reversed): input weights
  /// [in][4H], recurrent weights [H][4H], bias [4H]; gate order i, f, g, o.
  struct Direction {
    std::vector<double> w, u, b, gw, gu, gb;
    // Trace, indexed by processing step.
    std::vector<double> gates, cell, tanh_cell, hidden;
  };
  Direction& direction(std::size_t d) { return dirs_[d]; }

 private:
  void run_direction(std::size_t d, const Tensor& input, Tensor& output);
  void backprop_direction(std::size_t d, const Tensor& upstream, Tensor& grad_input, bool param_grads);

  Direction dirs_[2];
  std::optional<Tensor> input_;
};

class Dense final : public Layer {
 public:
  explicit Dense(LayerSpec spec);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;
  std::vector<ParamView> params() override;
  void init(Rng& rng) override;

  /// Weights laid out [in][out].
  std::vector<double>& weights() { return weights_; }
  std::vector<double>& bias() { return bias_; }

 private:
  std::vector<double> weights_, bias_, grad_weights_, grad_bias_;
  std::optional<Tensor> input_;
};

class LeakyReLU final : public Layer {
 public:
  explicit LeakyReLU(LayerSpec spec) : Layer(std::move(spec)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;

 private:
  std::optional<Tensor> input_;
};

class Sigmoid final : public Layer {
 public:
  explicit Sigmoid(LayerSpec spec) : Layer(std::move(spec)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;

 private:
  std::optional<Tensor> output_;
};

class Reshape final : public Layer {
 public:
  explicit Reshape(LayerSpec spec) : Layer(std::move(spec)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& upstream, bool param_grads) override;

 private:
  std::optional<Shape> input_shape_;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec);

// Stateless elementwise forms.
Tensor leaky_relu(const Tensor& input, double alpha);
Tensor sigmoid(const Tensor& input);
double sigmoid(double x);

}  // namespace ecggan::nn
