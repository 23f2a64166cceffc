#include "swsim/perf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swsim {

double dmi(const LayerSpec& layer, std::size_t lanes) {
  const double U = static_cast<double>(layer.U), V = static_cast<double>(layer.V);
  const double L = static_cast<double>(lanes);
  if (layer.V >= lanes) return V / (std::ceil(V / L) * L);
  const double rows = static_cast<double>(lanes / layer.V);
  return U * V / (std::ceil(U / rows) * L);
}

double dai(const Tensor& t) {
  if (t.size() == 0) return 0.0;
  const auto zeros = std::count(t.data().begin(), t.data().end(), 0);
  return static_cast<double>(zeros) / static_cast<double>(t.size());
}

double peak_throughput(const SimConfig& cfg) {
  return 2.0 * cfg.clock_hz * static_cast<double>(cfg.N * cfg.M * macs_per_pe(cfg.mode));
}

ResourceEstimate resource_estimate(const SimConfig& cfg) {
  ResourceEstimate r;
  r.dsp = macs_per_pe(cfg.mode) * cfg.N * cfg.M + 6;
  r.bram_banks = cfg.N * cfg.M + cfg.N + 2 + 1 + 2;
  r.exceeds_device = r.dsp > cfg.device_dsp;
  return r;
}

RooflinePoint roofline(double compute_roof, double ops, double bytes, std::size_t bus_bits,
                       double clock_hz) {
  RooflinePoint p;
  p.compute_roof = compute_roof;
  const double bytes_per_s = static_cast<double>(bus_bits) / 8.0 * clock_hz;
  p.bandwidth_roof = bytes > 0 ? ops / bytes * bytes_per_s
                               : std::numeric_limits<double>::infinity();
  p.attainable = std::min(p.compute_roof, p.bandwidth_roof);
  p.compute_bound = p.compute_roof <= p.bandwidth_roof;
  return p;
}

RooflinePoint roofline_fc(std::size_t engaged_pes, std::size_t bus_bits, double clock_hz,
                          int weight_bits) {
  RooflinePoint p;
  p.compute_roof = 2.0 * clock_hz * static_cast<double>(engaged_pes);
  p.bandwidth_roof = 2.0 * clock_hz * static_cast<double>(bus_bits) / weight_bits;
  p.attainable = std::min(p.compute_roof, p.bandwidth_roof);
  p.compute_bound = p.compute_roof <= p.bandwidth_roof;
  return p;
}

double fc_knee_pes(std::size_t bus_bits, int weight_bits) {
  return static_cast<double>(bus_bits) / weight_bits;
}

BandwidthFigures bandwidth_per_cycle(const SimConfig& cfg, std::size_t F) {
  const uint64_t N = cfg.N, M = cfg.M, A = cfg.A, B = cfg.B;
  return {N * B + M * A, M * A + N * M * B, N * F * B};
}

LayerPerf layer_perf(const std::string& name, const LayerSpec& layer, const CycleStats& stats,
                     const SimConfig& cfg) {
  LayerPerf p;
  p.name = name;
  p.kind = layer.kind;
  p.peak_gops = peak_throughput(cfg) / 1e9;
  if (layer.kind == LayerKind::MaxPool) {
    p.modeled = false;
    return p;
  }
  p.cycles = stats.total_cycles();
  p.compute_cycles = stats.compute_cycles;
  p.stall_cycles = stats.memory_stall_cycles;
  p.macs = stats.total_macs;
  p.bytes_moved = stats.bytes_moved();
  p.dmi = stats.issued_lane_slots
              ? static_cast<double>(stats.useful_lane_slots) / stats.issued_lane_slots
              : 1.0;
  const uint64_t issued = stats.gated_pe_cycles + stats.active_pe_cycles;
  p.dai = issued ? static_cast<double>(stats.gated_pe_cycles) / issued : 0.0;

  const double seconds = p.cycles ? static_cast<double>(p.cycles) / cfg.clock_hz : 0.0;
  const double ops = 2.0 * static_cast<double>(stats.total_macs);
  const double dense_ops = 2.0 * static_cast<double>(layer.F * layer.C * layer.U * layer.V *
                                                      layer.R * layer.R);
  p.effective_gops = seconds > 0 ? ops / seconds / 1e9 : 0.0;
  p.dense_equiv_gops = seconds > 0 ? dense_ops / seconds / 1e9 : 0.0;

  RooflinePoint roof;
  if (layer.kind == LayerKind::FC)
    roof = roofline_fc(cfg.M, cfg.bus_bits, cfg.clock_hz, cfg.B);
  else
    roof = roofline(peak_throughput(cfg), ops, static_cast<double>(p.bytes_moved), cfg.bus_bits,
                    cfg.clock_hz);
  p.attainable_gops_roofline = roof.attainable / 1e9;
  return p;
}

AggregatePerf aggregate_perf(const std::vector<LayerPerf>& layers, const SimConfig& cfg) {
  AggregatePerf a;
  for (const auto& l : layers)
    if (l.modeled) a.total_cycles += l.cycles;
  a.images_per_s = a.total_cycles ? cfg.clock_hz / static_cast<double>(a.total_cycles) : 0.0;
  a.peak_gops = peak_throughput(cfg) / 1e9;
  const ResourceEstimate r = resource_estimate(cfg);
  a.dsp_estimate = r.dsp;
  a.bram_estimate = r.bram_banks;
  a.dsp_exceeds_device = r.exceeds_device;
  return a;
}

}  // namespace swsim
