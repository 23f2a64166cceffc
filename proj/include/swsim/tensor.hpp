#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "swsim/errors.hpp"

namespace swsim {

// Signed fixed-point container. Elements are held as int32 regardless of
// elem_width; elem_width bounds the representable range.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, int elem_width);
  Tensor(std::vector<std::size_t> shape, int elem_width, std::vector<int32_t> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  int elem_width() const { return elem_width_; }

  std::span<const int32_t> data() const { return data_; }
  std::span<int32_t> data() { return data_; }
  const std::vector<int32_t>& values() const { return data_; }

  template <typename... Idx>
  int32_t& operator()(Idx... idx) {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <typename... Idx>
  int32_t operator()(Idx... idx) const {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  // Throws ShapeMismatch unless the shape equals `expected`.
  void expect_shape(const std::vector<std::size_t>& expected, const char* what) const;

  // Same data, new shape with equal element count.
  Tensor reshaped(std::vector<std::size_t> shape) const;

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t offset(std::initializer_list<std::size_t> idx) const {
    std::size_t off = 0;
    std::size_t axis = 0;
    for (std::size_t i : idx) off = off * shape_[axis++] + i;
    return off;
  }

  std::vector<std::size_t> shape_;
  int elem_width_ = 32;
  std::vector<int32_t> data_;
};

std::string shape_string(const std::vector<std::size_t>& shape);

// Fixed-point arithmetic shared by the reference executor and the PE model.
// Products are full width; accumulation saturates at 32 bits.
namespace fixed {

constexpr int kAccWidth = 32;

inline bool fits(int64_t v, int bits) {
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  return v >= -hi - 1 && v <= hi;
}

inline int32_t saturate(int64_t v, int bits = kAccWidth) {
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  if (v > hi) return static_cast<int32_t>(hi);
  if (v < -hi - 1) return static_cast<int32_t>(-hi - 1);
  return static_cast<int32_t>(v);
}

inline int32_t mac(int32_t acc, int32_t w, int32_t x) {
  return saturate(int64_t{acc} + int64_t{w} * int64_t{x});
}

}  // namespace fixed

}  // namespace swsim
