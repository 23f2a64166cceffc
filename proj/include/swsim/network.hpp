#pragma once

#include <string>
#include <vector>

#include "swsim/container.hpp"
#include "swsim/nn_model.hpp"
#include "swsim/perf.hpp"
#include "swsim/scheduler.hpp"

namespace swsim {

struct NetworkLayer {
  std::string name;
  LayerSpec spec;
  std::size_t pad = 0;     // zero padding applied to the layer input
  int shift = 0;           // requantization shift applied to the layer output
  double density = 1.0;    // fixture pruning target
};

// Ordered layer list. The network input is the first layer's unpadded input.
struct Network {
  std::string name;
  std::vector<NetworkLayer> layers;

  // Shape of the network input tensor.
  std::vector<std::size_t> input_shape() const;
  // Throws ShapeMismatch when consecutive layers do not chain.
  void validate() const;
  // Indices of conv/fc layers, in order.
  std::vector<std::size_t> weight_layers() const;
};

// Dense weights, one tensor per weight-bearing layer ([F,C,R,R] or [F,C]).
using DenseWeights = std::vector<Tensor>;

// Encodes dense weights for the accelerator (conv groups of N, FC rows of M).
SwscContainer encode_network(const Network& net, const DenseWeights& weights,
                             const SimConfig& cfg);
// Inverse of encode_network.
DenseWeights decode_network(const SwscContainer& c);

// Oracle chain: pad -> dense layer -> requantize (all but the last weight
// layer) -> next layer. The final weight layer keeps 32-bit outputs.
Tensor reference_network(const Network& net, const DenseWeights& weights, const Tensor& input,
                         int act_width);

struct NetworkRun {
  Tensor output;
  PerfReport report;
  std::vector<CycleStats> layer_stats;  // one per layer; pool layers empty
};

NetworkRun run_network(const Network& net, const SwscContainer& weights, const Tensor& input,
                       const SimConfig& cfg);

}  // namespace swsim
