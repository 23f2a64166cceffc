#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swsim/nn_model.hpp"
#include "swsim/pe_array.hpp"
#include "swsim/sparse_format.hpp"

namespace swsim {

struct SimConfig {
  std::size_t N = 48;  // PUs
  std::size_t M = 28;  // PEs per PU
  double clock_hz = 200e6;
  int A = 16;  // activation width
  int B = 16;  // weight width
  std::size_t abin_bytes = 2048;
  std::size_t about_bytes = 2048;
  std::size_t wib_bytes = 4096;
  std::size_t wb_bytes = 512;
  std::size_t psb_bytes = 2048;
  std::size_t bus_bits = 128;
  PrecisionMode mode = PrecisionMode::Fixed16;
  std::size_t pipeline_fill = 0;  // extra cycles per non-empty kernel-row pass
  std::size_t shift_penalty = 0;  // extra cycles per select whose step exceeds 1
  std::size_t device_dsp = 2520;

  // 32-bit partial sums per PSB bank.
  std::size_t slice_bram() const { return psb_bytes / 4; }
  // Output lanes per PU: M, doubled in Int8Dual.
  std::size_t lanes() const { return M * macs_per_pe(mode); }

  void validate() const;

  // Applies "key=value" overrides. Setting `mode` without A/B also sets both
  // widths to the mode's operand width.
  void apply_overrides(const std::vector<std::string>& overrides);
  void set(const std::string& key, const std::string& value);
};

struct TilePlan {
  std::size_t U_t = 0;
  std::size_t H_t = 0;
  std::size_t tile_count = 0;
  std::size_t overlap_rows = 0;
};

enum class MappingKind { RowTile, BlockTile };

struct MappingMode {
  MappingKind kind = MappingKind::RowTile;
  std::size_t rows_per_pu = 1;  // output rows handled by one PU pass
  std::size_t cols_per_pu = 1;  // output columns per PU pass
};

struct CycleStats {
  uint64_t compute_cycles = 0;
  uint64_t memory_stall_cycles = 0;
  uint64_t gated_pe_cycles = 0;
  uint64_t active_pe_cycles = 0;
  uint64_t total_macs = 0;  // issued MAC slots on valid lanes, gated included
  uint64_t bytes_in = 0;
  uint64_t bytes_out = 0;
  uint64_t fill_cycles = 0;
  uint64_t entries_visited = 0;      // kw-loop iterations
  uint64_t useful_lane_slots = 0;    // per PU, over all selects
  uint64_t issued_lane_slots = 0;
  uint64_t vgm_loads = 0;
  uint64_t vgm_reloads = 0;
  uint64_t max_datapath_bits = 0;    // per-cycle weight + activation bits into the array
  uint64_t tiles = 0;

  uint64_t total_cycles() const { return compute_cycles + memory_stall_cycles; }
  uint64_t bytes_moved() const { return bytes_in + bytes_out; }
  CycleStats& operator+=(const CycleStats& o);
};

// One VGM select as seen by the PE array.
struct SelectEvent {
  std::size_t tile, group, channel, out_row, out_col, kernel_row, entry;
  unsigned step;
  std::span<const int32_t> acts;
  std::span<const uint8_t> valid;
};
using SelectObserver = std::function<void(const SelectEvent&)>;

TilePlan tile_plan(const LayerSpec& layer, const SimConfig& cfg);
MappingMode map_plan(const LayerSpec& layer, const SimConfig& cfg);

struct LayerRun {
  Tensor output;
  CycleStats stats;
};

// Executes the sparse-wise loop nest: tile -> group -> channel -> output row
// -> column group -> kernel row -> nonzero entry.
LayerRun run_conv_layer(const LayerSpec& layer, std::span<const CompressedGroup> groups,
                        const Tensor& ifmap, const SimConfig& cfg,
                        const SelectObserver& observer = {});

// One PU active; each access brings M weights of adjacent rows against one
// broadcast activation.
LayerRun run_fc_layer(const LayerSpec& layer, const CompressedFc& weights, const Tensor& ivec,
                      const SimConfig& cfg);

}  // namespace swsim
