#include "swsim/container.hpp"
#include "swsim/io.hpp"

namespace swsim {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw SimError(ErrorKind::FormatError, "tensor file: " + what);
}

}  // namespace

std::vector<uint8_t> encode_tensors(std::span<const Tensor> tensors) {
  ByteWriter w;
  for (const Tensor& t : tensors) {
    w.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("SWTN"), 4));
    w.u8(static_cast<uint8_t>(t.elem_width()));
    w.u8(static_cast<uint8_t>(t.rank()));
    w.u16(0);
    w.u64(t.size());
    for (std::size_t e : t.shape()) w.u32(static_cast<uint32_t>(e));
    for (int32_t v : t.data()) w.sint(v, t.elem_width() / 8);
  }
  return w.take();
}

std::vector<Tensor> decode_tensors(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  std::vector<Tensor> out;
  while (!r.done()) {
    const auto magic = r.bytes(4);
    if (std::string(magic.begin(), magic.end()) != "SWTN") bad("bad magic");
    const int width = r.u8();
    const std::size_t rank = r.u8();
    r.u16();
    const uint64_t count = r.u64();
    if (width != 8 && width != 16 && width != 32) bad("bad element width");
    std::vector<std::size_t> shape(rank);
    uint64_t product = 1;
    for (auto& e : shape) {
      e = r.u32();
      product *= e;
    }
    if (product != count) bad("element count does not match extents");
    if (count * (width / 8) > r.remaining()) bad("truncated data");
    std::vector<int32_t> data(count);
    for (auto& v : data) v = r.sint(width / 8);
    out.emplace_back(std::move(shape), width, std::move(data));
  }
  return out;
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file(path, encode_tensors(std::span<const Tensor>(&t, 1)));
}

Tensor read_tensor(const std::filesystem::path& path) {
  auto ts = decode_tensors(read_file(path));
  if (ts.size() != 1)
    throw SimError(ErrorKind::FormatError,
                   path.string() + ": expected one tensor, found " + std::to_string(ts.size()));
  return std::move(ts[0]);
}

void write_tensors(const std::filesystem::path& path, std::span<const Tensor> tensors) {
  write_file(path, encode_tensors(tensors));
}

std::vector<Tensor> read_tensors(const std::filesystem::path& path) {
  return decode_tensors(read_file(path));
}

}  // namespace swsim
