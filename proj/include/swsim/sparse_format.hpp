#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swsim/tensor.hpp"

namespace swsim {

inline constexpr unsigned kMaxStep = 15;  // largest 4-bit step / row count

// Zero/nonzero pattern shared by every kernel of a group, laid out [c][kh][kw].
struct SharedMask {
  std::size_t C = 0;
  std::size_t R = 0;
  std::vector<uint8_t> bits;

  bool at(std::size_t c, std::size_t kh, std::size_t kw) const {
    return bits[(c * R + kh) * R + kw] != 0;
  }
  std::size_t count() const;
};

// Step-indexed CSR encoding of one group of kernels that share a pattern.
//
// Entries are ordered channel-major, then kernel row, then column. The k-th
// entry of a row sits at column k + sum(index[row_start .. row_start+k]).
// values[n] holds kernel n's weights for each entry; kernels past the real
// filter count of the layer are stored as zeros.
struct CompressedGroup {
  std::size_t group_size = 0;
  std::size_t C = 0;
  std::size_t R = 0;
  int elem_width = 16;
  std::vector<uint8_t> index;      // one 4-bit step per entry
  std::vector<uint8_t> r_pointer;  // entries per kernel row, length R*C
  std::vector<uint16_t> offset;    // entries per channel, length C
  std::vector<std::vector<int32_t>> values;

  std::size_t entries() const { return index.size(); }

  // Throws CorruptIndex when the pointer arrays disagree or a decoded
  // position leaves the row.
  void validate() const;

  bool operator==(const CompressedGroup&) const = default;
};

// FC weights for groups of M adjacent rows. Each row group shares one step
// stream over the union of its rows' nonzero columns; gaps wider than 15 are
// bridged with filler entries (step 15, all-zero weights). values holds M
// weights per entry, row-major within the entry.
struct CompressedFc {
  std::size_t M = 1;
  std::size_t F = 0;
  std::size_t C = 0;
  int elem_width = 16;
  std::vector<uint8_t> index;
  std::vector<int32_t> values;
  std::vector<uint32_t> row_starts;  // entry range per row group, length groups+1

  std::size_t row_groups() const { return row_starts.empty() ? 0 : row_starts.size() - 1; }
  std::size_t entries() const { return index.size(); }
  void validate() const;

  bool operator==(const CompressedFc&) const = default;
};

SharedMask validate_group_pattern(const Tensor& kernels);

// `group_size` defaults to the kernel count; larger values pad with zero kernels.
CompressedGroup encode_conv_group(const Tensor& kernels, std::size_t group_size = 0);
Tensor decode_conv_group(const CompressedGroup& g);

// Splits [F,C,R,R] kernels into ceil(F/N) groups of N.
std::vector<CompressedGroup> encode_conv_layer(const Tensor& kernels, std::size_t N);
Tensor decode_conv_layer(const std::vector<CompressedGroup>& groups, std::size_t F);

// Storage in numbers: 2a + R*C + C.
std::size_t storage_count(const CompressedGroup& g);

CompressedFc encode_fc(const Tensor& wmat, std::size_t M);
Tensor decode_fc(const CompressedFc& f, std::size_t F, std::size_t C);

// Fixture pruner: within each group of `group_size` kernels, keeps the
// max(1, floor(density * R*R*C)) positions with the largest group-summed |w|.
// Positions where any kernel is already zero are never kept.
Tensor group_prune(const Tensor& kernels, std::size_t group_size, double target_density);

// Nibble packing, low nibble first.
std::vector<uint8_t> pack_nibbles(const std::vector<uint8_t>& v);
std::vector<uint8_t> unpack_nibbles(const std::vector<uint8_t>& packed, std::size_t count);

}  // namespace swsim
