#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swsim/nn_model.hpp"

using namespace swsim;

TEST(ConvReference, SingleMac) {
  const Tensor x({1, 1, 1}, 16, {2});
  const Tensor w({1, 1, 1, 1}, 16, {3});
  const Tensor y = conv_reference(conv_layer(1, 1, 1, 1, 1), x, w);
  EXPECT_EQ(y.values(), std::vector<int32_t>{6});
}

TEST(ConvReference, ZeroKernelsGiveZeros) {
  oracle::Rng r(1);
  const auto L = conv_layer(3, 2, 4, 4, 3);
  const Tensor x = oracle::random_tensor(r, {2, 6, 6}, 16, 0.2);
  const Tensor y = conv_reference(L, x, Tensor({3, 2, 3, 3}, 16));
  for (int32_t v : y.data()) EXPECT_EQ(v, 0);
}

TEST(ConvReference, MatchesBruteForce) {
  oracle::Rng r(2);
  for (std::size_t S : {1, 2}) {
    const auto L = conv_layer(3, 2, 4, 4, 3, S);
    const Tensor x = oracle::random_tensor(r, {2, L.in_height(), L.in_width()}, 16, 0.1);
    const Tensor w = oracle::random_tensor(r, {3, 2, 3, 3}, 16, 0.3);
    const Tensor y = conv_reference(L, x, w);
    EXPECT_EQ(y.shape(), (std::vector<std::size_t>{3, 4, 4}));
    EXPECT_EQ(y.values(), oracle::conv(x.values(), 2, L.in_height(), L.in_width(), w.values(), 3,
                                       3, S, 4, 4, false));
  }
}

TEST(ConvReference, SaturatesAt32Bits) {
  const std::size_t C = 8;
  Tensor x({C, 1, 1}, 16), w({1, C, 1, 1}, 16);
  for (std::size_t c = 0; c < C; ++c) {
    x(c, 0, 0) = 32767;
    w(0, c, 0, 0) = 32767;
  }
  EXPECT_EQ(conv_reference(conv_layer(1, C, 1, 1, 1), x, w)(0, 0, 0), INT32_MAX);
}

TEST(ConvReference, ReluAndScaling) {
  oracle::Rng r(3);
  auto L = conv_layer(4, 3, 5, 5, 3, 1, true);
  const Tensor x = oracle::random_tensor(r, {3, 7, 7}, 16, 0.2);
  const Tensor w = oracle::random_tensor(r, {4, 3, 3, 3}, 8, 0.3);
  const Tensor y = conv_reference(L, x, w);
  for (int32_t v : y.data()) EXPECT_GE(v, 0);
  const Tensor zeros = conv_reference(L, Tensor({3, 7, 7}, 16), w);
  for (int32_t v : zeros.data()) EXPECT_EQ(v, 0);
}

TEST(ConvReference, KernelsAreIndependent) {
  oracle::Rng r(4);
  const auto L = conv_layer(3, 2, 3, 3, 3);
  const Tensor x = oracle::random_tensor(r, {2, 5, 5}, 16, 0.1);
  const Tensor w = oracle::random_tensor(r, {3, 2, 3, 3}, 16, 0.3);
  const Tensor all = conv_reference(L, x, w);
  for (std::size_t f = 0; f < 3; ++f) {
    std::vector<int32_t> one(w.values().begin() + f * 18, w.values().begin() + (f + 1) * 18);
    const Tensor y = conv_reference(conv_layer(1, 2, 3, 3, 3), x, Tensor({1, 2, 3, 3}, 16, one));
    for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(y.data()[i], all.data()[f * 9 + i]);
  }
  EXPECT_EQ(conv_reference(L, x, w), all);
}

TEST(ConvReference, RejectsWrongShapes) {
  const auto L = conv_layer(1, 1, 2, 2, 3);
  EXPECT_THROW(conv_reference(L, Tensor({1, 3, 3}, 16), Tensor({1, 1, 3, 3}, 16)), SimError);
  EXPECT_THROW(conv_reference(L, Tensor({1, 4, 4}, 16), Tensor({1, 1, 2, 2}, 16)), SimError);
}

TEST(FcReference, Identity) {
  const Tensor w({2, 2}, 16, {1, 0, 0, 1});
  EXPECT_EQ(fc_reference(w, Tensor({2}, 16, {5, -7})).values(), (std::vector<int32_t>{5, -7}));
  EXPECT_EQ(fc_reference(Tensor({2, 2}, 16), Tensor({2}, 16, {5, -7})).values(),
            (std::vector<int32_t>{0, 0}));
}

TEST(FcReference, MatchesBruteForce) {
  oracle::Rng r(5);
  const Tensor w = oracle::random_tensor(r, {8, 16}, 16, 0.2);
  const Tensor x = oracle::random_tensor(r, {16}, 16, 0.2);
  EXPECT_EQ(fc_reference(w, x).values(), oracle::fc(w.values(), 8, 16, x.values(), false));
  EXPECT_EQ(fc_reference(w, x, true).values(), oracle::fc(w.values(), 8, 16, x.values(), true));
}

TEST(MaxPool, Examples) {
  EXPECT_EQ(maxpool_reference(Tensor({1, 2, 2}, 16, {1, 2, 3, 4}), 2, 2).values(),
            std::vector<int32_t>{4});
  Tensor flat({2, 4, 4}, 16);
  for (auto& v : flat.data()) v = -9;
  const Tensor pooled = maxpool_reference(flat, 2, 2);
  for (int32_t v : pooled.data()) EXPECT_EQ(v, -9);
  oracle::Rng r(6);
  const Tensor x = oracle::random_tensor(r, {1, 4, 4}, 16, 0.0);
  EXPECT_EQ(maxpool_reference(x, 2, 2).values(), oracle::maxpool(x.values(), 1, 4, 4, 2, 2));
  EXPECT_THROW(maxpool_reference(Tensor({1, 5, 5}, 16), 2, 2), SimError);
}

TEST(Requantize, ShiftsAndSaturates) {
  const Tensor t({4}, 32, {1 << 20, -(1 << 20), 300, -3});
  EXPECT_EQ(requantize(t, 4, 16).values(), (std::vector<int32_t>{32767, -32768, 18, -1}));
}

TEST(ZeroPad, Borders) {
  const Tensor t({1, 1, 1}, 16, {7});
  const Tensor p = zero_pad(t, 1);
  EXPECT_EQ(p.shape(), (std::vector<std::size_t>{1, 3, 3}));
  EXPECT_EQ(p(0, 1, 1), 7);
  EXPECT_EQ(p(0, 0, 0), 0);
}
