#include "ecggan/nn/optimizer.hpp"

#include <cmath>

#include "ecggan/error.hpp"

namespace ecggan::nn {

namespace {

void update(std::span<double> p, std::span<const double> g, double* m, double* v, double lr_t, const AdamHyper& h) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
    v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
    p[i] -= lr_t * m[i] / (std::sqrt(v[i]) + h.epsilon);
  }
}

// Bias correction folded into the step size; epsilon is applied to the
// uncorrected second moment, which keeps the first step bounded by lr.
double corrected_rate(const AdamState& s, const AdamHyper& h) {
  const double t = static_cast<double>(s.step);
  return h.learning_rate * std::sqrt(1.0 - std::pow(h.beta2, t)) / (1.0 - std::pow(h.beta1, t));
}

}  // namespace

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamHyper& hyper) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam: parameter, gradient and state sizes differ");
  }
  ++state.step;
  update(params, grads, state.m.data(), state.v.data(), corrected_rate(state, hyper), hyper);
}

void adam_step(std::vector<ParamView> params, AdamState& state, const AdamHyper& hyper) {
  std::size_t total = 0;
  for (auto& p : params) total += p.value.size();
  if (state.m.size() != total || state.v.size() != total) {
    throw Error(ErrorCode::ShapeMismatch, "adam: state size does not match parameters");
  }
  ++state.step;
  const double lr_t = corrected_rate(state, hyper);
  std::size_t offset = 0;
  for (auto& p : params) {
    update(p.value, p.grad, state.m.data() + offset, state.v.data() + offset, lr_t, hyper);
    offset += p.value.size();
  }
}

}  // namespace ecggan::nn
