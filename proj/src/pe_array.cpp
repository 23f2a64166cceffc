#include "swsim/pe_array.hpp"

#include <algorithm>
#include <string>

#include "swsim/errors.hpp"
#include "swsim/tensor.hpp"

namespace swsim {

const char* to_string(PrecisionMode mode) {
  return mode == PrecisionMode::Int8Dual ? "int8dual" : "fixed16";
}

PrecisionMode parse_precision_mode(const std::string& s) {
  if (s == "fixed16" || s == "Fixed16" || s == "16") return PrecisionMode::Fixed16;
  if (s == "int8dual" || s == "Int8Dual" || s == "int8" || s == "8") return PrecisionMode::Int8Dual;
  throw SimError(ErrorKind::InvalidArgument, "unknown precision mode '" + s + "'");
}

PeArray::PeArray(std::size_t N, std::size_t M, std::size_t slice_bram, PrecisionMode mode)
    : N_(N), M_(M), slots_(slice_bram), subs_(macs_per_pe(mode)), mode_(mode),
      psb_(N * M * subs_ * slice_bram, 0) {
  if (N == 0 || M == 0 || slice_bram == 0)
    throw SimError(ErrorKind::InvalidArgument, "PE array dimensions must be non-zero");
}

void PeArray::check(std::size_t pu, std::size_t slot) const {
  if (pu >= N_) throw SimError(ErrorKind::InvalidArgument, "pu " + std::to_string(pu));
  if (slot >= slots_)
    throw SimError(ErrorKind::SlotOutOfRange, "PSB slot " + std::to_string(slot) + " of " +
                                                  std::to_string(slots_));
}

void PeArray::lane_mac(std::size_t pu, std::size_t lane, std::size_t slot, int32_t w,
                       int32_t x) {
  if (x == 0) {
    ++gated_;
    return;
  }
  int32_t& acc = psb_[index(pu, lane, slot)];
  acc = fixed::mac(acc, w, x);
  ++active_;
  ++macs_;
}

void PeArray::pu_cycle(std::size_t pu, int32_t weight, std::span<const int32_t> acts,
                       std::size_t slot, std::span<const uint8_t> valid) {
  check(pu, slot);
  if (acts.size() != M_)
    throw SimError(ErrorKind::LengthMismatch, "pu_cycle expects M activations");
  for (std::size_t m = 0; m < M_; ++m)
    if (valid.empty() || valid[m]) lane_mac(pu, m * subs_, slot, weight, acts[m]);
}

void PeArray::pe_dual8_cycle(std::size_t pu, int32_t weight, std::span<const int32_t> acts,
                             std::size_t slot, std::span<const uint8_t> valid) {
  if (mode_ != PrecisionMode::Int8Dual)
    throw SimError(ErrorKind::ModeMismatch, "dual 8-bit cycle issued in fixed16 mode");
  check(pu, slot);
  if (acts.size() != 2 * M_)
    throw SimError(ErrorKind::LengthMismatch, "pe_dual8_cycle expects 2*M activations");
  if (!fixed::fits(weight, 8))
    throw SimError(ErrorKind::InvalidArgument, "weight does not fit 8 bits");
  for (std::size_t l = 0; l < 2 * M_; ++l) {
    if (!valid.empty() && !valid[l]) continue;
    if (!fixed::fits(acts[l], 8))
      throw SimError(ErrorKind::InvalidArgument, "activation does not fit 8 bits");
    lane_mac(pu, l, slot, weight, acts[l]);
  }
}

void PeArray::pu_fc_cycle(std::size_t pu, std::span<const int32_t> weights, int32_t act,
                          std::size_t slot, std::span<const uint8_t> valid) {
  check(pu, slot);
  if (weights.size() != M_)
    throw SimError(ErrorKind::LengthMismatch, "pu_fc_cycle expects M weights");
  for (std::size_t m = 0; m < M_; ++m)
    if (valid.empty() || valid[m]) lane_mac(pu, m * subs_, slot, weights[m], act);
}

std::vector<int32_t> PeArray::psb_drain(std::size_t pu, const DrainRegion& region, bool relu) {
  if (!region.finished)
    throw SimError(ErrorKind::DrainIncomplete, "region starting at slot " +
                                                   std::to_string(region.first_slot) +
                                                   " still has pending contributions");
  if (region.slot_count == 0) return {};
  check(pu, region.first_slot + region.slot_count - 1);
  std::vector<int32_t> out;
  out.reserve(region.slot_count * lanes());
  for (std::size_t s = region.first_slot; s < region.first_slot + region.slot_count; ++s)
    for (std::size_t l = 0; l < lanes(); ++l) {
      int32_t& acc = psb_[index(pu, l, s)];
      out.push_back(relu ? std::max(acc, 0) : acc);
      acc = 0;
    }
  return out;
}

}  // namespace swsim
