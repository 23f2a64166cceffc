#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swsim {

enum class ErrorKind {
  ShapeMismatch,
  PatternMismatch,
  RowTooWide,
  CorruptIndex,
  LengthMismatch,
  SelectOverrun,
  SlotOutOfRange,
  ModeMismatch,
  DrainIncomplete,
  InfeasibleTile,
  FormatError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class SimError : public std::runtime_error {
 public:
  SimError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind),
        detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Raised when a kernel in a group does not share the group's zero pattern.
// `position` is the flat (c, kh, kw) offset inside one kernel.
class PatternMismatch : public SimError {
 public:
  PatternMismatch(std::size_t kernel_id, std::size_t c, std::size_t kh, std::size_t kw)
      : SimError(ErrorKind::PatternMismatch,
                 "kernel " + std::to_string(kernel_id) + " differs from kernel 0 at (c=" +
                     std::to_string(c) + ", kh=" + std::to_string(kh) +
                     ", kw=" + std::to_string(kw) + ")"),
        kernel_id(kernel_id), c(c), kh(kh), kw(kw) {}

  std::size_t kernel_id, c, kh, kw;
};

}  // namespace swsim
