#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace swsim {

enum class PrecisionMode : uint8_t { Fixed16, Int8Dual };

const char* to_string(PrecisionMode mode);
PrecisionMode parse_precision_mode(const std::string& s);

// Number of MACs one PE performs per cycle.
inline std::size_t macs_per_pe(PrecisionMode mode) {
  return mode == PrecisionMode::Int8Dual ? 2 : 1;
}

struct DrainRegion {
  std::size_t first_slot = 0;
  std::size_t slot_count = 0;
  bool finished = false;  // set by the scheduler once every contribution landed
};

// N PUs x M PEs. Each PE owns a partial-sum bank of slice_bram slots; in
// Int8Dual mode a slot holds two 32-bit accumulators (one per paired lane).
// Lane l of a PU maps to PE l / macs_per_pe, sub-accumulator l % macs_per_pe.
class PeArray {
 public:
  PeArray(std::size_t N, std::size_t M, std::size_t slice_bram, PrecisionMode mode);

  std::size_t pus() const { return N_; }
  std::size_t pes_per_pu() const { return M_; }
  std::size_t lanes() const { return M_ * subs_; }
  std::size_t slots() const { return slots_; }
  PrecisionMode mode() const { return mode_; }

  // One weight broadcast to the M PEs of a PU. A zero activation gates the PE
  // (no accumulate, one gated cycle). Lanes with valid[l] == 0 are idle.
  void pu_cycle(std::size_t pu, int32_t weight, std::span<const int32_t> acts, std::size_t slot,
                std::span<const uint8_t> valid = {});

  // Int8Dual: each PE multiplies two 8-bit activations by one 8-bit weight.
  // acts holds 2*M activations, PE m taking acts[2m] and acts[2m+1].
  void pe_dual8_cycle(std::size_t pu, int32_t weight, std::span<const int32_t> acts,
                      std::size_t slot, std::span<const uint8_t> valid = {});

  // FC pattern: M distinct weights, one broadcast activation.
  void pu_fc_cycle(std::size_t pu, std::span<const int32_t> weights, int32_t act,
                   std::size_t slot, std::span<const uint8_t> valid = {});

  // Returns region values ordered [slot][lane] after optional ReLU, and
  // zeroes the drained accumulators.
  std::vector<int32_t> psb_drain(std::size_t pu, const DrainRegion& region, bool relu);

  int32_t psb(std::size_t pu, std::size_t lane, std::size_t slot) const {
    return psb_[index(pu, lane, slot)];
  }

  uint64_t gated_cycles() const { return gated_; }
  uint64_t active_cycles() const { return active_; }
  uint64_t mac_count() const { return macs_; }
  uint64_t issued_cycles() const { return gated_ + active_; }

 private:
  std::size_t index(std::size_t pu, std::size_t lane, std::size_t slot) const {
    return (pu * lanes() + lane) * slots_ + slot;
  }
  void check(std::size_t pu, std::size_t slot) const;
  void lane_mac(std::size_t pu, std::size_t lane, std::size_t slot, int32_t w, int32_t x);

  std::size_t N_, M_, slots_, subs_;
  PrecisionMode mode_;
  std::vector<int32_t> psb_;
  uint64_t gated_ = 0, active_ = 0, macs_ = 0;
};

}  // namespace swsim
