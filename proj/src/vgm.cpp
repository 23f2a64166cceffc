#include "swsim/vgm.hpp"

#include <algorithm>
#include <string>

#include "swsim/errors.hpp"

namespace swsim {

Vgm::Vgm(std::size_t lanes, std::size_t rows, std::size_t cols, std::size_t stride,
         std::size_t depth)
    : lanes_(lanes), rows_(rows), cols_(cols), stride_(stride), depth_(depth),
      reg0_(rows * depth, 0), reg1_(rows * depth, 0), out_(lanes, 0) {
  if (lanes == 0 || rows == 0 || cols == 0 || stride == 0)
    throw SimError(ErrorKind::InvalidArgument, "VGM geometry must be non-zero");
}

Vgm Vgm::row_mode(std::size_t lanes, std::size_t stride, std::size_t kernel) {
  return Vgm(lanes, 1, lanes, stride, (lanes - 1) * stride + kernel);
}

Vgm Vgm::block_mode(std::size_t lanes, std::size_t width, std::size_t stride,
                    std::size_t kernel) {
  if (width == 0 || width > lanes)
    throw SimError(ErrorKind::InvalidArgument, "block mode needs 0 < V <= lanes");
  return Vgm(lanes, lanes / width, width, stride, (width - 1) * stride + kernel);
}

void Vgm::load(std::span<const int32_t> segment) {
  if (segment.size() != reg1_.size())
    throw SimError(ErrorKind::LengthMismatch, "VGM load of " + std::to_string(segment.size()) +
                                                  " activations into depth " +
                                                  std::to_string(reg1_.size()));
  std::copy(segment.begin(), segment.end(), reg1_.begin());
  ++loads_;
}

void Vgm::reload() {
  reg0_ = reg1_;
  cursor_ = 0;
  if (first_reload_)
    first_reload_ = false;
  else
    ++kh_row_;
  ++reloads_;
}

std::span<const int32_t> Vgm::select(std::size_t step) {
  const std::size_t start = cursor_ + step;
  if (start + (cols_ - 1) * stride_ >= depth_)
    throw SimError(ErrorKind::SelectOverrun,
                   "window at " + std::to_string(start) + " exceeds depth " +
                       std::to_string(depth_));
  for (std::size_t l = 0; l < lanes_; ++l) {
    const std::size_t seg = l / cols_, col = l % cols_;
    out_[l] = seg < rows_ ? reg0_[seg * depth_ + start + col * stride_] : 0;
  }
  cursor_ = start + 1;
  ++selects_;
  return out_;
}

}  // namespace swsim
