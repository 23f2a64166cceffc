#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "swsim/nn_model.hpp"
#include "swsim/sparse_format.hpp"

namespace swsim {

// One weight-bearing layer of an SWSC blob. Conv layers hold ceil(F/N)
// groups; FC layers hold a single CompressedFc (group_size == M).
struct EncodedLayer {
  LayerSpec layer;
  std::size_t group_size = 1;
  int elem_width = 16;
  std::variant<std::vector<CompressedGroup>, CompressedFc> weights;

  const std::vector<CompressedGroup>& conv_groups() const;
  const CompressedFc& fc() const;

  bool operator==(const EncodedLayer&) const = default;
};

// Binary weight container, little-endian:
//   "SWSC" u16 version u16 layer_count
//   per layer: u8 kind, u32 F C R S U V, u32 group_size, u8 elem_width
//     conv, per group: u32 a, u16 offset[C], nibbles r_pointer[R*C],
//                      nibbles index[a], values[group_size][a]
//     fc: u32 entries, u32 row_starts[groups+1], nibbles index[entries],
//         values[entries*M]
// Values are stored as elem_width/8-byte two's complement integers.
struct SwscContainer {
  static constexpr uint16_t kVersion = 1;
  std::vector<EncodedLayer> layers;

  bool operator==(const SwscContainer&) const = default;
};

std::vector<uint8_t> serialize(const SwscContainer& c);
SwscContainer parse_swsc(std::span<const uint8_t> bytes);

void write_swsc(const std::filesystem::path& path, const SwscContainer& c);
SwscContainer read_swsc(const std::filesystem::path& path);

// Little-endian helpers shared by the binary formats.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) { put(v, 2); }
  void u32(uint32_t v) { put(v, 4); }
  void u64(uint64_t v) { put(v, 8); }
  void sint(int32_t v, int bytes) { put(static_cast<uint64_t>(static_cast<int64_t>(v)), bytes); }
  void bytes(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  void put(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> b) : b_(b) {}
  uint8_t u8() { return static_cast<uint8_t>(get(1)); }
  uint16_t u16() { return static_cast<uint16_t>(get(2)); }
  uint32_t u32() { return static_cast<uint32_t>(get(4)); }
  uint64_t u64() { return get(8); }
  int32_t sint(int bytes);
  std::vector<uint8_t> bytes(std::size_t n);
  bool done() const { return pos_ == b_.size(); }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  uint64_t get(int n);
  std::span<const uint8_t> b_;
  std::size_t pos_ = 0;
};

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes);

}  // namespace swsim
