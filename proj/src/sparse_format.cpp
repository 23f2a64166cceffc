#include "swsim/sparse_format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace swsim {

std::size_t SharedMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), uint8_t{1}));
}

namespace {

void corrupt(const std::string& what) { throw SimError(ErrorKind::CorruptIndex, what); }

void expect_kernels(const Tensor& kernels) {
  if (kernels.rank() != 4 || kernels.extent(0) == 0 || kernels.extent(2) != kernels.extent(3))
    throw SimError(ErrorKind::ShapeMismatch,
                   "expected [N,C,R,R] kernels, got " + shape_string(kernels.shape()));
}

}  // namespace

SharedMask validate_group_pattern(const Tensor& kernels) {
  expect_kernels(kernels);
  const std::size_t N = kernels.extent(0), C = kernels.extent(1), R = kernels.extent(2);
  SharedMask mask{C, R, std::vector<uint8_t>(C * R * R)};
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t kh = 0; kh < R; ++kh)
      for (std::size_t kw = 0; kw < R; ++kw) {
        const bool nz = kernels(0, c, kh, kw) != 0;
        mask.bits[(c * R + kh) * R + kw] = nz;
        for (std::size_t n = 1; n < N; ++n)
          if ((kernels(n, c, kh, kw) != 0) != nz) throw PatternMismatch(n, c, kh, kw);
      }
  return mask;
}

void CompressedGroup::validate() const {
  if (r_pointer.size() != R * C) corrupt("r_pointer length " + std::to_string(r_pointer.size()));
  if (offset.size() != C) corrupt("offset length " + std::to_string(offset.size()));
  if (values.size() != group_size) corrupt("value stream count != group size");
  for (const auto& v : values)
    if (v.size() != index.size()) corrupt("value stream length != entry count");
  std::size_t i = 0;
  for (std::size_t c = 0; c < C; ++c) {
    std::size_t channel = 0;
    for (std::size_t kh = 0; kh < R; ++kh) {
      const std::size_t count = r_pointer[c * R + kh];
      if (count > kMaxStep) corrupt("r_pointer entry exceeds 4 bits");
      if (i + count > index.size()) corrupt("r_pointer runs past the index array");
      std::size_t jump = 0;
      for (std::size_t kw = 0; kw < count; ++kw) {
        if (index[i + kw] > kMaxStep) corrupt("index entry exceeds 4 bits");
        jump += index[i + kw];
        if (kw + jump >= R)
          corrupt("position " + std::to_string(kw + jump) + " exceeds row width " +
                  std::to_string(R) + " (c=" + std::to_string(c) +
                  ", kh=" + std::to_string(kh) + ")");
      }
      i += count;
      channel += count;
    }
    if (channel != offset[c]) corrupt("offset[" + std::to_string(c) + "] != sum of r_pointer");
  }
  if (i != index.size()) corrupt("offsets do not cover the index array");
}

CompressedGroup encode_conv_group(const Tensor& kernels, std::size_t group_size) {
  const SharedMask mask = validate_group_pattern(kernels);
  const std::size_t N = kernels.extent(0), C = mask.C, R = mask.R;
  if (R > kMaxStep)
    throw SimError(ErrorKind::RowTooWide,
                   "kernel width " + std::to_string(R) + " exceeds the 4-bit row pointer");
  if (group_size == 0) group_size = N;
  if (group_size < N)
    throw SimError(ErrorKind::InvalidArgument, "group size smaller than kernel count");

  CompressedGroup g;
  g.group_size = group_size;
  g.C = C;
  g.R = R;
  g.elem_width = kernels.elem_width();
  g.values.assign(group_size, {});
  g.r_pointer.assign(R * C, 0);
  g.offset.assign(C, 0);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t kh = 0; kh < R; ++kh) {
      std::size_t next = 0;  // first column not yet covered
      for (std::size_t kw = 0; kw < R; ++kw) {
        if (!mask.at(c, kh, kw)) continue;
        g.index.push_back(static_cast<uint8_t>(kw - next));
        next = kw + 1;
        for (std::size_t n = 0; n < group_size; ++n)
          g.values[n].push_back(n < N ? kernels(n, c, kh, kw) : 0);
        ++g.r_pointer[c * R + kh];
        ++g.offset[c];
      }
    }
  return g;
}

Tensor decode_conv_group(const CompressedGroup& g) {
  g.validate();
  Tensor out({g.group_size, g.C, g.R, g.R}, g.elem_width);
  std::size_t i = 0;
  for (std::size_t c = 0; c < g.C; ++c)
    for (std::size_t kh = 0; kh < g.R; ++kh) {
      const std::size_t count = g.r_pointer[c * g.R + kh];
      std::size_t jump = 0;
      for (std::size_t kw = 0; kw < count; ++kw) {
        jump += g.index[i + kw];
        for (std::size_t n = 0; n < g.group_size; ++n)
          out(n, c, kh, kw + jump) = g.values[n][i + kw];
      }
      i += count;
    }
  return out;
}

std::vector<CompressedGroup> encode_conv_layer(const Tensor& kernels, std::size_t N) {
  expect_kernels(kernels);
  if (N == 0) throw SimError(ErrorKind::InvalidArgument, "group size must be >= 1");
  const std::size_t F = kernels.extent(0), C = kernels.extent(1), R = kernels.extent(2);
  const std::size_t per_kernel = C * R * R;
  std::vector<CompressedGroup> groups;
  for (std::size_t f0 = 0; f0 < F; f0 += N) {
    const std::size_t n = std::min(N, F - f0);
    auto first = kernels.values().begin() + static_cast<std::ptrdiff_t>(f0 * per_kernel);
    Tensor slice({n, C, R, R}, kernels.elem_width(),
                 std::vector<int32_t>(first, first + static_cast<std::ptrdiff_t>(n * per_kernel)));
    try {
      groups.push_back(encode_conv_group(slice, N));
    } catch (const PatternMismatch& e) {
      throw PatternMismatch(f0 + e.kernel_id, e.c, e.kh, e.kw);
    }
  }
  return groups;
}

Tensor decode_conv_layer(const std::vector<CompressedGroup>& groups, std::size_t F) {
  if (groups.empty()) throw SimError(ErrorKind::CorruptIndex, "no groups");
  const std::size_t N = groups[0].group_size, C = groups[0].C, R = groups[0].R;
  if ((F + N - 1) / N != groups.size())
    throw SimError(ErrorKind::CorruptIndex, "group count does not cover F");
  Tensor out({F, C, R, R}, groups[0].elem_width);
  const std::size_t per_kernel = C * R * R;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (g.group_size != N || g.C != C || g.R != R)
      throw SimError(ErrorKind::CorruptIndex, "groups disagree on shape");
    const Tensor dense = decode_conv_group(g);
    for (std::size_t n = 0; n < N && gi * N + n < F; ++n)
      std::copy_n(dense.data().begin() + static_cast<std::ptrdiff_t>(n * per_kernel), per_kernel,
                  out.data().begin() + static_cast<std::ptrdiff_t>((gi * N + n) * per_kernel));
  }
  return out;
}

std::size_t storage_count(const CompressedGroup& g) {
  return 2 * g.entries() + g.R * g.C + g.C;
}

void CompressedFc::validate() const {
  if (M == 0) corrupt("M must be >= 1");
  if (row_starts.size() != (F + M - 1) / M + 1) corrupt("row_starts length");
  if (row_starts.front() != 0 || row_starts.back() != index.size())
    corrupt("row_starts do not span the entries");
  if (values.size() != index.size() * M) corrupt("values length != entries * M");
  for (std::size_t g = 0; g + 1 < row_starts.size(); ++g) {
    if (row_starts[g] > row_starts[g + 1]) corrupt("row_starts not monotone");
    std::size_t pos = 0;
    for (std::size_t e = row_starts[g]; e < row_starts[g + 1]; ++e) {
      if (index[e] > kMaxStep) corrupt("index entry exceeds 4 bits");
      pos += index[e] + (e == row_starts[g] ? 0 : 1);
      if (pos >= C)
        corrupt("row group " + std::to_string(g) + " decodes past column " +
                std::to_string(C));
    }
  }
}

CompressedFc encode_fc(const Tensor& wmat, std::size_t M) {
  if (wmat.rank() != 2) throw SimError(ErrorKind::ShapeMismatch, "fc weights must be [F,C]");
  if (M == 0) throw SimError(ErrorKind::InvalidArgument, "M must be >= 1");
  CompressedFc f;
  f.M = M;
  f.F = wmat.extent(0);
  f.C = wmat.extent(1);
  f.elem_width = wmat.elem_width();
  f.row_starts.push_back(0);
  for (std::size_t r0 = 0; r0 < f.F; r0 += M) {
    const std::size_t rows = std::min(M, f.F - r0);
    std::size_t next = 0;  // column the next step is measured from
    for (std::size_t c = 0; c < f.C; ++c) {
      bool any = false;
      for (std::size_t m = 0; m < rows; ++m) any = any || wmat(r0 + m, c) != 0;
      if (!any) continue;
      std::size_t gap = c - next;
      while (gap > kMaxStep) {
        f.index.push_back(kMaxStep);
        f.values.insert(f.values.end(), M, 0);
        gap -= kMaxStep + 1;
      }
      f.index.push_back(static_cast<uint8_t>(gap));
      for (std::size_t m = 0; m < M; ++m) f.values.push_back(m < rows ? wmat(r0 + m, c) : 0);
      next = c + 1;
    }
    f.row_starts.push_back(static_cast<uint32_t>(f.index.size()));
  }
  return f;
}

Tensor decode_fc(const CompressedFc& f, std::size_t F, std::size_t C) {
  if (F != f.F || C != f.C)
    throw SimError(ErrorKind::ShapeMismatch, "fc decode: shape does not match encoding");
  f.validate();
  Tensor out({F, C}, f.elem_width);
  for (std::size_t g = 0; g < f.row_groups(); ++g) {
    std::size_t pos = 0;
    for (std::size_t e = f.row_starts[g]; e < f.row_starts[g + 1]; ++e) {
      pos += f.index[e] + (e == f.row_starts[g] ? 0 : 1);
      for (std::size_t m = 0; m < f.M && g * f.M + m < F; ++m) {
        const int32_t w = f.values[e * f.M + m];
        if (w != 0) out(g * f.M + m, pos) = w;
      }
    }
  }
  return out;
}

Tensor group_prune(const Tensor& kernels, std::size_t group_size, double target_density) {
  expect_kernels(kernels);
  if (!(target_density > 0.0 && target_density <= 1.0))
    throw SimError(ErrorKind::InvalidArgument, "target density must be in (0, 1]");
  if (group_size == 0) throw SimError(ErrorKind::InvalidArgument, "group size must be >= 1");
  const std::size_t F = kernels.extent(0), C = kernels.extent(1), R = kernels.extent(2);
  const std::size_t P = C * R * R;
  const std::size_t keep_target =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(target_density * P + 1e-9)));

  Tensor out = kernels;
  for (std::size_t f0 = 0; f0 < F; f0 += group_size) {
    const std::size_t n = std::min(group_size, F - f0);
    std::vector<int64_t> score(P, 0);
    std::vector<uint8_t> eligible(P, 1);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t p = 0; p < P; ++p) {
        const int32_t w = kernels.data()[(f0 + k) * P + p];
        score[p] += std::abs(int64_t{w});
        if (w == 0) eligible[p] = 0;
      }
    std::vector<std::size_t> order;
    for (std::size_t p = 0; p < P; ++p)
      if (eligible[p]) order.push_back(p);
    // Largest group magnitude first; ties keep the lower position.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    std::vector<uint8_t> keep(P, 0);
    for (std::size_t i = 0; i < std::min(keep_target, order.size()); ++i) keep[order[i]] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t p = 0; p < P; ++p)
        if (!keep[p]) out.data()[(f0 + k) * P + p] = 0;
  }
  return out;
}

std::vector<uint8_t> pack_nibbles(const std::vector<uint8_t>& v) {
  std::vector<uint8_t> packed((v.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0xF) throw SimError(ErrorKind::InvalidArgument, "value does not fit a nibble");
    packed[i / 2] |= static_cast<uint8_t>(v[i] << (4 * (i % 2)));
  }
  return packed;
}

std::vector<uint8_t> unpack_nibbles(const std::vector<uint8_t>& packed, std::size_t count) {
  if (packed.size() != (count + 1) / 2)
    throw SimError(ErrorKind::FormatError, "nibble array length mismatch");
  std::vector<uint8_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = (packed[i / 2] >> (4 * (i % 2))) & 0xF;
  return v;
}

}  // namespace swsim
