#include "swsim/container.hpp"

#include <fstream>
#include <iterator>

namespace swsim {

namespace {

[[noreturn]] void format_error(const std::string& what) {
  throw SimError(ErrorKind::FormatError, "SWSC: " + what);
}

void check_width(int w) {
  if (w != 8 && w != 16 && w != 32) format_error("bad element width " + std::to_string(w));
}

}  // namespace

const std::vector<CompressedGroup>& EncodedLayer::conv_groups() const {
  if (const auto* g = std::get_if<std::vector<CompressedGroup>>(&weights)) return *g;
  throw SimError(ErrorKind::FormatError, "layer does not hold conv groups");
}

const CompressedFc& EncodedLayer::fc() const {
  if (const auto* f = std::get_if<CompressedFc>(&weights)) return *f;
  throw SimError(ErrorKind::FormatError, "layer does not hold fc weights");
}

int32_t ByteReader::sint(int bytes) {
  const uint64_t raw = get(bytes);
  const int shift = 64 - 8 * bytes;
  return static_cast<int32_t>(static_cast<int64_t>(raw << shift) >> shift);
}

std::vector<uint8_t> ByteReader::bytes(std::size_t n) {
  if (n > remaining()) format_error("truncated");
  std::vector<uint8_t> out(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                           b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

uint64_t ByteReader::get(int n) {
  if (static_cast<std::size_t>(n) > remaining()) format_error("truncated");
  uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= uint64_t{b_[pos_ + i]} << (8 * i);
  pos_ += n;
  return v;
}

std::vector<uint8_t> serialize(const SwscContainer& c) {
  ByteWriter w;
  w.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("SWSC"), 4));
  w.u16(SwscContainer::kVersion);
  w.u16(static_cast<uint16_t>(c.layers.size()));
  for (const auto& L : c.layers) {
    const int vb = L.elem_width / 8;
    w.u8(static_cast<uint8_t>(L.layer.kind));
    for (std::size_t v : {L.layer.F, L.layer.C, L.layer.R, L.layer.S, L.layer.U, L.layer.V})
      w.u32(static_cast<uint32_t>(v));
    w.u32(static_cast<uint32_t>(L.group_size));
    w.u8(static_cast<uint8_t>(L.elem_width));
    if (L.layer.kind == LayerKind::Conv) {
      for (const auto& g : L.conv_groups()) {
        w.u32(static_cast<uint32_t>(g.entries()));
        for (uint16_t o : g.offset) w.u16(o);
        w.bytes(pack_nibbles(g.r_pointer));
        w.bytes(pack_nibbles(g.index));
        for (const auto& stream : g.values)
          for (int32_t v : stream) w.sint(v, vb);
      }
    } else {
      const auto& f = L.fc();
      w.u32(static_cast<uint32_t>(f.entries()));
      for (uint32_t r : f.row_starts) w.u32(r);
      w.bytes(pack_nibbles(f.index));
      for (int32_t v : f.values) w.sint(v, vb);
    }
  }
  return w.take();
}

SwscContainer parse_swsc(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.bytes(4);
  if (std::string(magic.begin(), magic.end()) != "SWSC") format_error("bad magic");
  if (r.u16() != SwscContainer::kVersion) format_error("unsupported version");
  const std::size_t count = r.u16();
  SwscContainer c;
  for (std::size_t li = 0; li < count; ++li) {
    EncodedLayer L;
    const uint8_t kind = r.u8();
    if (kind > 1) format_error("layer " + std::to_string(li) + " has unknown kind");
    L.layer.kind = static_cast<LayerKind>(kind);
    L.layer.F = r.u32();
    L.layer.C = r.u32();
    L.layer.R = r.u32();
    L.layer.S = r.u32();
    L.layer.U = r.u32();
    L.layer.V = r.u32();
    L.group_size = r.u32();
    L.elem_width = r.u8();
    check_width(L.elem_width);
    if (L.group_size == 0) format_error("zero group size");
    try {
      L.layer.validate();
    } catch (const SimError& e) {
      format_error("layer " + std::to_string(li) + ": " + e.detail());
    }
    const int vb = L.elem_width / 8;
    if (L.layer.kind == LayerKind::Conv) {
      std::vector<CompressedGroup> groups;
      const std::size_t G = (L.layer.F + L.group_size - 1) / L.group_size;
      for (std::size_t gi = 0; gi < G; ++gi) {
        CompressedGroup g;
        g.group_size = L.group_size;
        g.C = L.layer.C;
        g.R = L.layer.R;
        g.elem_width = L.elem_width;
        const std::size_t a = r.u32();
        if (a > g.C * g.R * g.R) format_error("entry count exceeds kernel size");
        for (std::size_t i = 0; i < g.C; ++i) g.offset.push_back(r.u16());
        g.r_pointer = unpack_nibbles(r.bytes((g.R * g.C + 1) / 2), g.R * g.C);
        g.index = unpack_nibbles(r.bytes((a + 1) / 2), a);
        g.values.assign(g.group_size, std::vector<int32_t>(a));
        for (auto& stream : g.values)
          for (auto& v : stream) v = r.sint(vb);
        try {
          g.validate();
        } catch (const SimError& e) {
          format_error("layer " + std::to_string(li) + " group " + std::to_string(gi) + ": " +
                       e.detail());
        }
        groups.push_back(std::move(g));
      }
      L.weights = std::move(groups);
    } else {
      CompressedFc f;
      f.M = L.group_size;
      f.F = L.layer.F;
      f.C = L.layer.C;
      f.elem_width = L.elem_width;
      const std::size_t entries = r.u32();
      const std::size_t G = (f.F + f.M - 1) / f.M;
      if (entries > r.remaining()) format_error("truncated fc layer");
      for (std::size_t i = 0; i <= G; ++i) f.row_starts.push_back(r.u32());
      f.index = unpack_nibbles(r.bytes((entries + 1) / 2), entries);
      f.values.resize(entries * f.M);
      for (auto& v : f.values) v = r.sint(vb);
      try {
        f.validate();
      } catch (const SimError& e) {
        format_error("layer " + std::to_string(li) + ": " + e.detail());
      }
      L.weights = std::move(f);
    }
    c.layers.push_back(std::move(L));
  }
  if (!r.done()) format_error("trailing bytes");
  return c;
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(ErrorKind::IoError, "cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(ErrorKind::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SimError(ErrorKind::IoError, "short write to " + path.string());
}

void write_swsc(const std::filesystem::path& path, const SwscContainer& c) {
  write_file(path, serialize(c));
}

SwscContainer read_swsc(const std::filesystem::path& path) { return parse_swsc(read_file(path)); }

}  // namespace swsim
