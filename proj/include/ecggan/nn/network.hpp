#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ecggan/nn/layers.hpp"

namespace ecggan::nn {

/// Sequential stack built from a NetworkSpec.
class Network {
 public:
  explicit Network(NetworkSpec spec);

  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const NetworkSpec& spec() const { return spec_; }
  std::size_t param_count() const { return nn::param_count(spec_); }
  std::size_t size() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }

  /// Glorot-uniform conv/dense weights, uniform LSTM weights, zero biases
  /// (LSTM forget-gate bias 1). Deterministic in `seed`.
  void init(std::uint64_t seed);

  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& upstream, bool param_grads = true);

  std::vector<ParamView> params();
  void zero_grad();

  std::vector<double> flat_params();
  void set_flat_params(std::span<const double> values);
  std::vector<double> flat_grads();

 private:
  NetworkSpec spec_;
  std::vector<std::unique_ptr<Layer>> layers_;
  bool recorded_ = false;
};

}  // namespace ecggan::nn
