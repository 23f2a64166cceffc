#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swsim {

// Vector Generator Module: a staging register (reg1) filled from the input
// buffer and a working register (reg0) that the weight index shifts through.
// Each select emits one activation per output lane, stride-spaced.
//
// Row mode holds one segment of depth (lanes-1)*S + R and maps lane l to
// column l. Block mode (output width V < lanes) holds floor(lanes/V)
// segments of depth (V-1)*S + R and maps lane l to segment l/V, column l%V.
// Lanes past rows*cols always read zero.
class Vgm {
 public:
  static Vgm row_mode(std::size_t lanes, std::size_t stride, std::size_t kernel);
  static Vgm block_mode(std::size_t lanes, std::size_t width, std::size_t stride,
                        std::size_t kernel);

  std::size_t lanes() const { return lanes_; }
  std::size_t segments() const { return rows_; }
  std::size_t columns() const { return cols_; }
  std::size_t depth() const { return depth_; }
  std::size_t cursor() const { return cursor_; }
  std::size_t kh_row() const { return kh_row_; }

  std::span<const int32_t> reg0() const { return reg0_; }
  std::span<const int32_t> reg1() const { return reg1_; }

  // Replaces reg1 with `segments() * depth()` activations, segment-major.
  void load(std::span<const int32_t> segment);
  // reg0 <- reg1, cursor back to the row start, next kernel row.
  void reload();
  // Advances the cursor by `step`, emits the lane vector, then steps past the
  // consumed weight slot. The returned span is valid until the next select.
  std::span<const int32_t> select(std::size_t step);

  // Resets the row counter at the start of a new channel pass.
  void begin_pass() { kh_row_ = 0; first_reload_ = true; }

  std::size_t load_count() const { return loads_; }
  std::size_t reload_count() const { return reloads_; }
  std::size_t select_count() const { return selects_; }

 private:
  Vgm(std::size_t lanes, std::size_t rows, std::size_t cols, std::size_t stride,
      std::size_t depth);

  std::size_t lanes_, rows_, cols_, stride_, depth_;
  std::vector<int32_t> reg0_, reg1_, out_;
  std::size_t cursor_ = 0;
  std::size_t kh_row_ = 0;
  bool first_reload_ = true;
  std::size_t loads_ = 0, reloads_ = 0, selects_ = 0;
};

}  // namespace swsim
