#include "swsim/tensor.hpp"

#include <functional>
#include <numeric>

namespace swsim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::PatternMismatch: return "PatternMismatch";
    case ErrorKind::RowTooWide: return "RowTooWide";
    case ErrorKind::CorruptIndex: return "CorruptIndex";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SelectOverrun: return "SelectOverrun";
    case ErrorKind::SlotOutOfRange: return "SlotOutOfRange";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::DrainIncomplete: return "DrainIncomplete";
    case ErrorKind::InfeasibleTile: return "InfeasibleTile";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void check_width(int w) {
  if (w != 8 && w != 16 && w != 32)
    throw SimError(ErrorKind::InvalidArgument, "element width must be 8, 16 or 32, got " +
                                                   std::to_string(w));
}

}  // namespace

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape, int elem_width)
    : shape_(std::move(shape)), elem_width_(elem_width) {
  check_width(elem_width_);
  data_.assign(element_count(shape_), 0);
}

Tensor::Tensor(std::vector<std::size_t> shape, int elem_width, std::vector<int32_t> data)
    : shape_(std::move(shape)), elem_width_(elem_width), data_(std::move(data)) {
  check_width(elem_width_);
  if (data_.size() != element_count(shape_))
    throw SimError(ErrorKind::ShapeMismatch,
                   "data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_string(shape_));
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!fixed::fits(data_[i], elem_width_))
      throw SimError(ErrorKind::InvalidArgument,
                     "element " + std::to_string(i) + " = " + std::to_string(data_[i]) +
                         " does not fit in " + std::to_string(elem_width_) + " bits");
}

void Tensor::expect_shape(const std::vector<std::size_t>& expected, const char* what) const {
  if (shape_ != expected)
    throw SimError(ErrorKind::ShapeMismatch, std::string(what) + ": expected " +
                                                 shape_string(expected) + ", got " +
                                                 shape_string(shape_));
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  if (element_count(shape) != data_.size())
    throw SimError(ErrorKind::ShapeMismatch,
                   "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  Tensor t;
  t.shape_ = std::move(shape);
  t.elem_width_ = elem_width_;
  t.data_ = data_;
  return t;
}

}  // namespace swsim
