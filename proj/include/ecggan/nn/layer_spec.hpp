#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ecggan/nn/tensor.hpp"

namespace ecggan::nn {

enum class LayerKind { BiLSTM, Conv2D, Dense, LeakyReLU, Sigmoid, Reshape };

std::string_view kind_name(LayerKind kind);

struct Kernel {
  std::size_t height = 16;
  std::size_t width = 3;
  friend bool operator==(const Kernel&, const Kernel&) = default;
};

struct Stride {
  std::size_t time = 1;
  std::size_t lead = 1;
  friend bool operator==(const Stride&, const Stride&) = default;
};

/// Every convolution in both networks uses this kernel.
inline constexpr Kernel kConvKernel{16, 3};

/// Architecture description of one layer.
///
/// Conv2D consumes [time, lead, in_size] and produces [ceil(time/stride.time),
/// ceil(lead/stride.lead), out_size] with "same" padding. BiLSTM consumes
/// [time, in_size]; out_size is the hidden width of *each* direction and the
/// output is [time, 2 * out_size]. Dense maps [in_size] to [out_size].
/// Reshape reinterprets its input as `target_shape` (a flatten when rank 1).
struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::Dense;
  Kernel kernel{};
  std::size_t in_size = 0;
  std::size_t out_size = 0;
  Stride stride{};
  double alpha = 0.2;
  Shape target_shape;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetworkSpec {
  std::string name;
  Shape input_shape;
  std::vector<LayerSpec> layers;
};

LayerSpec conv2d(std::string name, std::size_t in, std::size_t out, Stride stride = {});
LayerSpec bilstm(std::string name, std::size_t in, std::size_t hidden);
LayerSpec dense(std::string name, std::size_t in, std::size_t out);
LayerSpec leaky_relu_layer(double alpha = 0.2);
LayerSpec sigmoid_layer();
LayerSpec reshape(std::string name, Shape target);

/// Trainable parameters of one layer. Throws UnsupportedLayer for layers this
/// kernel cannot build (non 16x3 convolutions, zero widths).
std::size_t param_count(const LayerSpec& layer);
std::size_t param_count(const NetworkSpec& net);

/// Output shape of `layer` applied to `input`; ShapeMismatch when incompatible.
Shape output_shape(const LayerSpec& layer, const Shape& input);
/// Walks the whole network; ShapeMismatch names the first offending layer.
Shape output_shape(const NetworkSpec& net);

/// Shapes entering each layer followed by the network output (layers + 1 entries).
std::vector<Shape> layer_shapes(const NetworkSpec& net);

/// Padding before the first element for TF-style "same" padding.
std::size_t same_pad_before(std::size_t in, std::size_t kernel, std::size_t stride);
std::size_t same_out(std::size_t in, std::size_t stride);

}  // namespace ecggan::nn
