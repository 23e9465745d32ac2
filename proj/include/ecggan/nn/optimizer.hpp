#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ecggan/nn/layers.hpp"

namespace ecggan::nn {

struct AdamHyper {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> m, v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One bias-corrected Adam update of a flat parameter vector.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamHyper& hyper);

/// Adam over a network's parameter blocks, treated as one concatenated vector.
void adam_step(std::vector<ParamView> params, AdamState& state, const AdamHyper& hyper);

}  // namespace ecggan::nn
