#include "ecggan/nn/network.hpp"

#include <algorithm>

#include "ecggan/error.hpp"

namespace ecggan::nn {

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  layer_shapes(spec_);
  for (const auto& l : spec_.layers) layers_.push_back(make_layer(l));
}

void Network::init(std::uint64_t seed) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Rng rng(derive_seed(seed, 0x1417, i));
    layers_[i]->init(rng);
  }
}

Tensor Network::forward(const Tensor& input) {
  if (input.shape() != spec_.input_shape) {
    throw Error(ErrorCode::ShapeMismatch, spec_.name + ": input " + shape_string(input.shape()) + ", expected " +
                                              shape_string(spec_.input_shape));
  }
  Tensor x = input;
  for (auto& l : layers_) x = l->forward(x);
  recorded_ = true;
  return x;
}

Tensor Network::backward(const Tensor& upstream, bool param_grads) {
  if (!recorded_) throw Error(ErrorCode::NotRecorded, spec_.name + ": no forward trace");
  Tensor g = upstream;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g, param_grads);
  return g;
}

std::vector<ParamView> Network::params() {
  std::vector<ParamView> out;
  for (auto& l : layers_)
    for (auto& p : l->params()) out.push_back(p);
  return out;
}

void Network::zero_grad() {
  for (auto& p : params()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

std::vector<double> Network::flat_params() {
  std::vector<double> out;
  for (auto& p : params()) out.insert(out.end(), p.value.begin(), p.value.end());
  return out;
}

std::vector<double> Network::flat_grads() {
  std::vector<double> out;
  for (auto& p : params()) out.insert(out.end(), p.grad.begin(), p.grad.end());
  return out;
}

void Network::set_flat_params(std::span<const double> values) {
  std::size_t offset = 0;
  auto views = params();
  std::size_t total = 0;
  for (auto& p : views) total += p.value.size();
  if (total != values.size()) {
    throw Error(ErrorCode::ShapeMismatch, spec_.name + ": expected " + std::to_string(total) + " parameters, got " +
                                              std::to_string(values.size()));
  }
  for (auto& p : views) {
    std::copy_n(values.begin() + static_cast<long>(offset), p.value.size(), p.value.begin());
    offset += p.value.size();
  }
}

}  // namespace ecggan::nn
