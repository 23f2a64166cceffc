#pragma once

// Brute-force references used by the tests. They share no code with the
// library beyond the Tensor container, and index raw vectors directly.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "swsim/tensor.hpp"

namespace oracle {

inline int32_t sat32(int64_t v) {
  if (v > INT32_MAX) return INT32_MAX;
  if (v < INT32_MIN) return INT32_MIN;
  return static_cast<int32_t>(v);
}

// Y[f][u][v] = sum_{c,kh,kw} W[f][c][kh][kw] * X[c][u*S+kh][v*S+kw]
// with saturation after every addition, in c -> kh -> kw order.
inline std::vector<int32_t> conv(const std::vector<int32_t>& x, std::size_t C, std::size_t H,
                                 std::size_t Wd, const std::vector<int32_t>& w, std::size_t F,
                                 std::size_t R, std::size_t S, std::size_t U, std::size_t V,
                                 bool relu) {
  std::vector<int32_t> y(F * U * V, 0);
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t v = 0; v < V; ++v) {
        int32_t acc = 0;
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t kh = 0; kh < R; ++kh)
            for (std::size_t kw = 0; kw < R; ++kw) {
              const int64_t wv = w[((f * C + c) * R + kh) * R + kw];
              const int64_t xv = x[(c * H + u * S + kh) * Wd + v * S + kw];
              if (wv == 0 || xv == 0) continue;
              acc = sat32(int64_t{acc} + wv * xv);
            }
        y[(f * U + u) * V + v] = relu && acc < 0 ? 0 : acc;
      }
  return y;
}

inline std::vector<int32_t> fc(const std::vector<int32_t>& w, std::size_t F, std::size_t C,
                               const std::vector<int32_t>& x, bool relu) {
  std::vector<int32_t> y(F, 0);
  for (std::size_t f = 0; f < F; ++f) {
    int32_t acc = 0;
    for (std::size_t c = 0; c < C; ++c)
      if (w[f * C + c] && x[c]) acc = sat32(int64_t{acc} + int64_t{w[f * C + c]} * x[c]);
    y[f] = relu && acc < 0 ? 0 : acc;
  }
  return y;
}

inline std::vector<int32_t> maxpool(const std::vector<int32_t>& x, std::size_t C, std::size_t H,
                                    std::size_t Wd, std::size_t k, std::size_t s) {
  const std::size_t U = (H - k) / s + 1, V = (Wd - k) / s + 1;
  std::vector<int32_t> y;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t u = 0; u < U; ++u)
      for (std::size_t v = 0; v < V; ++v) {
        int32_t m = INT32_MIN;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m = std::max(m, x[(c * H + u * s + i) * Wd + v * s + j]);
        y.push_back(m);
      }
  return y;
}

// Column positions of one row from its step list: first = step, then
// previous + step + 1.
inline std::vector<std::size_t> positions(const std::vector<uint8_t>& steps) {
  std::vector<std::size_t> p;
  std::size_t cur = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    cur = k == 0 ? steps[0] : cur + steps[k] + 1;
    p.push_back(cur);
  }
  return p;
}

// ---- random data ----

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  int64_t range(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(gen);
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
  bool chance(double p) { return unit() < p; }
};

inline int32_t nonzero(Rng& r, int bits) {
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  int64_t v = 0;
  while (v == 0) v = r.range(-hi - 1, hi);
  return static_cast<int32_t>(v);
}

// Group-shared random pattern: [F,C,R,R] weights, pattern shared by every
// run of N consecutive kernels.
inline swsim::Tensor shared_kernels(Rng& r, std::size_t F, std::size_t C, std::size_t R,
                                    std::size_t N, double density, int bits) {
  swsim::Tensor w({F, C, R, R}, bits);
  const std::size_t P = C * R * R;
  for (std::size_t f0 = 0; f0 < F; f0 += N) {
    std::vector<uint8_t> mask(P);
    for (auto& m : mask) m = r.chance(density);
    for (std::size_t f = f0; f < std::min(F, f0 + N); ++f)
      for (std::size_t p = 0; p < P; ++p)
        w.data()[f * P + p] = mask[p] ? nonzero(r, bits) : 0;
  }
  return w;
}

inline swsim::Tensor random_tensor(Rng& r, std::vector<std::size_t> shape, int bits,
                                   double zero_frac) {
  swsim::Tensor t(std::move(shape), bits);
  for (auto& v : t.data()) v = r.chance(zero_frac) ? 0 : nonzero(r, bits);
  return t;
}

inline std::vector<int32_t> vec(const swsim::Tensor& t) { return t.values(); }

}  // namespace oracle
