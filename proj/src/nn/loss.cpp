#include "ecggan/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "ecggan/error.hpp"

namespace ecggan::nn {

namespace {

void validate(std::span<const double> p, std::span<const double> y) {
  if (p.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "bce: predictions and labels differ in length");
  if (p.empty()) throw Error(ErrorCode::ShapeMismatch, "bce: empty batch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) throw Error(ErrorCode::InvalidProbability, "label outside [0, 1]");
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw Error(ErrorCode::InvalidProbability, "prediction outside [0, 1]");
  }
}

}  // namespace

double bce_loss(std::span<const double> p, std::span<const double> y) {
  validate(p, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum += y[i] * std::log(q) + (1.0 - y[i]) * std::log(1.0 - q);
  }
  return -sum / static_cast<double>(p.size());
}

std::vector<double> bce_grad(std::span<const double> p, std::span<const double> y) {
  validate(p, y);
  const double n = static_cast<double>(p.size());
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < kProbabilityClamp || p[i] > 1.0 - kProbabilityClamp) continue;
    g[i] = -(y[i] / p[i] - (1.0 - y[i]) / (1.0 - p[i])) / n;
  }
  return g;
}

}  // namespace ecggan::nn
