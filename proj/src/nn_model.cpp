#include "swsim/nn_model.hpp"

#include <algorithm>
#include <tuple>

namespace swsim {

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::FC: return "fc";
    case LayerKind::MaxPool: return "maxpool";
  }
  return "?";
}

LayerKind parse_layer_kind(const std::string& s) {
  if (s == "conv") return LayerKind::Conv;
  if (s == "fc") return LayerKind::FC;
  if (s == "maxpool" || s == "pool") return LayerKind::MaxPool;
  throw SimError(ErrorKind::FormatError, "unknown layer kind '" + s + "'");
}

void LayerSpec::validate() const {
  if (F == 0 || C == 0 || U == 0 || V == 0 || R == 0 || S == 0)
    throw SimError(ErrorKind::ShapeMismatch, "layer counts must be >= 1");
  if (kind == LayerKind::FC && (U != 1 || V != 1 || R != 1 || S != 1))
    throw SimError(ErrorKind::ShapeMismatch, "fc layer requires U=V=R=S=1");
  if (kind == LayerKind::MaxPool && F != C)
    throw SimError(ErrorKind::ShapeMismatch, "maxpool layer requires F == C");
}

LayerSpec conv_layer(std::size_t F, std::size_t C, std::size_t U, std::size_t V, std::size_t R,
                     std::size_t S, bool relu) {
  return LayerSpec{LayerKind::Conv, F, C, U, V, R, S, relu};
}

LayerSpec fc_layer(std::size_t F, std::size_t C, bool relu) {
  return LayerSpec{LayerKind::FC, F, C, 1, 1, 1, 1, relu};
}

Tensor conv_reference(const LayerSpec& layer, const Tensor& ifmap, const Tensor& kernels) {
  layer.validate();
  const auto [F, C, U, V, R, S] =
      std::tuple{layer.F, layer.C, layer.U, layer.V, layer.R, layer.S};
  ifmap.expect_shape({C, layer.in_height(), layer.in_width()}, "conv ifmap");
  kernels.expect_shape({F, C, R, R}, "conv kernels");

  Tensor out({F, U, V}, 32);
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t v = 0; v < V; ++v) {
        int32_t acc = 0;
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t kh = 0; kh < R; ++kh)
            for (std::size_t kw = 0; kw < R; ++kw)
              acc = fixed::mac(acc, kernels(f, c, kh, kw), ifmap(c, u * S + kh, v * S + kw));
        out(f, u, v) = layer.relu ? std::max(acc, 0) : acc;
      }
  return out;
}

Tensor fc_reference(const Tensor& wmat, const Tensor& ivec, bool relu) {
  if (wmat.rank() != 2 || ivec.rank() != 1 || wmat.extent(1) != ivec.extent(0))
    throw SimError(ErrorKind::ShapeMismatch, "fc: weights " + shape_string(wmat.shape()) +
                                                 " vs input " + shape_string(ivec.shape()));
  const std::size_t F = wmat.extent(0), C = wmat.extent(1);
  Tensor out({F}, 32);
  for (std::size_t f = 0; f < F; ++f) {
    int32_t acc = 0;
    for (std::size_t c = 0; c < C; ++c) acc = fixed::mac(acc, wmat(f, c), ivec(c));
    out(f) = relu ? std::max(acc, 0) : acc;
  }
  return out;
}

Tensor maxpool_reference(const Tensor& ifmap, std::size_t window, std::size_t stride) {
  if (ifmap.rank() != 3 || window == 0 || stride == 0)
    throw SimError(ErrorKind::ShapeMismatch, "maxpool expects a [C,H,W] tensor");
  const std::size_t C = ifmap.extent(0), H = ifmap.extent(1), W = ifmap.extent(2);
  if (H < window || W < window || (H - window) % stride || (W - window) % stride)
    throw SimError(ErrorKind::ShapeMismatch,
                   "maxpool window " + std::to_string(window) + "/" + std::to_string(stride) +
                       " leaves a partial window on " + shape_string(ifmap.shape()));
  const std::size_t U = (H - window) / stride + 1, V = (W - window) / stride + 1;
  Tensor out({C, U, V}, ifmap.elem_width());
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t v = 0; v < V; ++v) {
        int32_t best = ifmap(c, u * stride, v * stride);
        for (std::size_t i = 0; i < window; ++i)
          for (std::size_t j = 0; j < window; ++j)
            best = std::max(best, ifmap(c, u * stride + i, v * stride + j));
        out(c, u, v) = best;
      }
  return out;
}

Tensor zero_pad(const Tensor& ifmap, std::size_t pad) {
  if (ifmap.rank() != 3) throw SimError(ErrorKind::ShapeMismatch, "zero_pad expects [C,H,W]");
  if (pad == 0) return ifmap;
  const std::size_t C = ifmap.extent(0), H = ifmap.extent(1), W = ifmap.extent(2);
  Tensor out({C, H + 2 * pad, W + 2 * pad}, ifmap.elem_width());
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t w = 0; w < W; ++w) out(c, h + pad, w + pad) = ifmap(c, h, w);
  return out;
}

Tensor requantize(const Tensor& t, int shift, int width) {
  if (shift < 0 || shift > 31)
    throw SimError(ErrorKind::InvalidArgument, "requantize shift out of range");
  std::vector<int32_t> data(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    data[i] = fixed::saturate(int64_t{t.data()[i]} >> shift, width);
  return Tensor(t.shape(), width, std::move(data));
}

}  // namespace swsim
