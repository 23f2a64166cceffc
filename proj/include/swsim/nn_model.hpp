#pragma once

#include <cstddef>
#include <string>

#include "swsim/tensor.hpp"

namespace swsim {

enum class LayerKind : uint8_t { Conv = 0, FC = 1, MaxPool = 2 };

const char* to_string(LayerKind kind);
LayerKind parse_layer_kind(const std::string& s);

// One network layer in the six-parameter form. For MaxPool, R is the window
// and F == C. FC layers use U = V = R = S = 1.
struct LayerSpec {
  LayerKind kind = LayerKind::Conv;
  std::size_t F = 1;  // output channels
  std::size_t C = 1;  // input channels
  std::size_t U = 1;  // output height
  std::size_t V = 1;  // output width
  std::size_t R = 1;  // kernel height = width
  std::size_t S = 1;  // stride
  bool relu = false;

  // Inputs are pre-padded: H = (U-1)*S + R.
  std::size_t in_height() const { return (U - 1) * S + R; }
  std::size_t in_width() const { return (V - 1) * S + R; }

  // Throws ShapeMismatch when counts are zero or FC extents are not unit.
  void validate() const;

  bool operator==(const LayerSpec&) const = default;
};

LayerSpec conv_layer(std::size_t F, std::size_t C, std::size_t U, std::size_t V, std::size_t R,
                     std::size_t S = 1, bool relu = false);
LayerSpec fc_layer(std::size_t F, std::size_t C, bool relu = false);

// Dense fixed-point executors used as the correctness oracle.
// Accumulation order per output is c -> kh -> kw, saturating at 32 bits.
Tensor conv_reference(const LayerSpec& layer, const Tensor& ifmap, const Tensor& kernels);
Tensor fc_reference(const Tensor& wmat, const Tensor& ivec, bool relu = false);
Tensor maxpool_reference(const Tensor& ifmap, std::size_t window, std::size_t stride);

// Zero-pads the two spatial axes of a [C,H,W] tensor.
Tensor zero_pad(const Tensor& ifmap, std::size_t pad);

// Arithmetic right shift followed by saturation to `width` bits.
Tensor requantize(const Tensor& t, int shift, int width);

}  // namespace swsim
