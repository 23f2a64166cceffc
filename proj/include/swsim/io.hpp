#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swsim/network.hpp"
#include "swsim/perf.hpp"
#include "swsim/scheduler.hpp"

namespace swsim {

// Tensor file record, little-endian: a fixed 16-byte header
//   "SWTN" u8 elem_width u8 rank u16 reserved u64 element_count
// followed by rank u32 extents and element_count two's complement values of
// elem_width/8 bytes. Files may hold several records back to back.
std::vector<uint8_t> encode_tensors(std::span<const Tensor> tensors);
std::vector<Tensor> decode_tensors(std::span<const uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);
void write_tensors(const std::filesystem::path& path, std::span<const Tensor> tensors);
std::vector<Tensor> read_tensors(const std::filesystem::path& path);

// Model spec (JSON):
//   {"name": "...", "layers": [{"kind": "conv", "F":.., "C":.., "U":.., "V":..,
//     "R":.., "S":.., "relu": true, "pad": 1, "shift": 8, "density": 0.4}, ...]}
Network parse_model_spec(const std::string& text);
Network read_model_spec(const std::filesystem::path& path);
std::string model_spec_json(const Network& net);

// Run manifest (JSON). Relative paths resolve against the manifest directory.
struct RunManifest {
  std::filesystem::path model;
  std::filesystem::path weights;
  std::filesystem::path input;
  std::filesystem::path report;
  std::vector<std::string> config;  // key=value overrides
  uint64_t seed = 0;
};

RunManifest read_manifest(const std::filesystem::path& path);
std::string manifest_json(const RunManifest& m);

// Report (JSON) with sorted keys; identical inputs give identical bytes.
std::string report_json(const std::string& model_name, const PerfReport& report,
                        const SimConfig& cfg, std::optional<bool> verified);

}  // namespace swsim
