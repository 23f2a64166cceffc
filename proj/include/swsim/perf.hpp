#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swsim/nn_model.hpp"
#include "swsim/scheduler.hpp"

namespace swsim {

struct LayerPerf {
  std::string name;
  LayerKind kind = LayerKind::Conv;
  bool modeled = true;  // pooling runs on the reference path and is not timed
  uint64_t cycles = 0;
  uint64_t compute_cycles = 0;
  uint64_t stall_cycles = 0;
  uint64_t macs = 0;
  double dmi = 1.0;  // mapping efficiency (useful / issued lane slots)
  double dai = 0.0;  // gated fraction of issued PE cycles
  double effective_gops = 0.0;
  double dense_equiv_gops = 0.0;
  double attainable_gops_roofline = 0.0;
  double peak_gops = 0.0;
  uint64_t bytes_moved = 0;
};

struct AggregatePerf {
  double images_per_s = 0.0;
  uint64_t total_cycles = 0;
  double peak_gops = 0.0;
  std::size_t dsp_estimate = 0;
  std::size_t bram_estimate = 0;
  bool dsp_exceeds_device = false;
};

struct PerfReport {
  std::vector<LayerPerf> per_layer;
  AggregatePerf aggregate;
};

// Mapping efficiency: V/(ceil(V/L)*L) for V >= L, otherwise
// U*V/(ceil(U/floor(L/V))*L). L is the lane count per PU.
double dmi(const LayerSpec& layer, std::size_t lanes);

// Fraction of zero elements.
double dai(const Tensor& t);

// Peak ops/s: 2 ops per MAC, one MAC per PE per cycle (two in Int8Dual).
double peak_throughput(const SimConfig& cfg);

struct ResourceEstimate {
  std::size_t dsp = 0;
  std::size_t bram_banks = 0;
  bool exceeds_device = false;
};

// DSPs: N*M + 6 (Fixed16) or 2*N*M + 6 (Int8Dual). BRAM banks: one per PSB,
// one weight buffer per PU, plus 2 ABin, 1 ABout and 2 WIB banks.
ResourceEstimate resource_estimate(const SimConfig& cfg);

struct RooflinePoint {
  double compute_roof = 0.0;    // ops/s
  double bandwidth_roof = 0.0;  // ops/s
  double attainable = 0.0;
  bool compute_bound = true;
};

// FC layers: each weight feeds exactly one MAC, so the bandwidth roof is
// 2 * clock * bus_bits / B regardless of layer size.
RooflinePoint roofline_fc(std::size_t engaged_pes, std::size_t bus_bits, double clock_hz,
                          int weight_bits);
// Number of engaged PEs at which the FC roof flattens: bus_bits / B.
double fc_knee_pes(std::size_t bus_bits, int weight_bits);

// General roofline from a measured operation count and off-chip traffic.
RooflinePoint roofline(double compute_roof, double ops, double bytes, std::size_t bus_bits,
                       double clock_hz);

struct BandwidthFigures {
  uint64_t sparse_wise = 0;   // N*B + M*A
  uint64_t cambricon_s = 0;   // M*A + N*M*B
  uint64_t scnn = 0;          // N*F*B
};

// Bits per cycle required at the PE array boundary.
BandwidthFigures bandwidth_per_cycle(const SimConfig& cfg, std::size_t F = 0);

// Builds the per-layer entry from a run. The dense-equivalent figure counts
// F*C*U*V*R*R MACs regardless of sparsity.
LayerPerf layer_perf(const std::string& name, const LayerSpec& layer, const CycleStats& stats,
                     const SimConfig& cfg);

AggregatePerf aggregate_perf(const std::vector<LayerPerf>& layers, const SimConfig& cfg);

}  // namespace swsim
