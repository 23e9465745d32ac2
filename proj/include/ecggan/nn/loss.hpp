#pragma once

#include <span>
#include <vector>

namespace ecggan::nn {

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean binary cross-entropy with predictions clamped to [1e-7, 1 - 1e-7].
double bce_loss(std::span<const double> predictions, std::span<const double> labels);

/// d(bce_loss)/d(prediction). Zero where the clamp is active.
std::vector<double> bce_grad(std::span<const double> predictions, std::span<const double> labels);

}  // namespace ecggan::nn
