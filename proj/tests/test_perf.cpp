#include <gtest/gtest.h>

#include <limits>

#include "oracles.hpp"
#include "swsim/perf.hpp"

using namespace swsim;

TEST(Dmi, Formulas) {
  EXPECT_EQ(dmi(conv_layer(1, 1, 224, 224, 3), 28), 1.0);
  EXPECT_DOUBLE_EQ(dmi(conv_layer(1, 1, 55, 55, 11, 4), 28), 55.0 / 56.0);
  EXPECT_DOUBLE_EQ(dmi(conv_layer(1, 1, 13, 13, 3), 28), 169.0 / 196.0);
}

TEST(Dmi, MatchesMeasuredRatio) {
  oracle::Rng r(61);
  for (int iter = 0; iter < 60; ++iter) {
    SimConfig cfg;
    cfg.N = r.range(1, 3);
    cfg.M = r.range(1, 10);
    if (r.chance(0.5)) {
      cfg.mode = PrecisionMode::Int8Dual;
      cfg.A = cfg.B = 8;
    }
    cfg.psb_bytes = 4 * r.range(2, 40);
    const LayerSpec L = conv_layer(r.range(1, 4), 1, r.range(1, 30), r.range(1, 30), 1);
    const Tensor w = oracle::shared_kernels(r, L.F, 1, 1, cfg.N, 1.0, cfg.B);
    const Tensor x = oracle::random_tensor(r, {1, L.U, L.V}, cfg.A, 0.0);
    try {
      const auto run = run_conv_layer(L, encode_conv_layer(w, cfg.N), x, cfg);
      const double measured =
          double(run.stats.useful_lane_slots) / double(run.stats.issued_lane_slots);
      EXPECT_NEAR(measured, dmi(L, cfg.lanes()), 1e-12)
          << "U=" << L.U << " V=" << L.V << " lanes=" << cfg.lanes();
    } catch (const SimError& e) {
      ASSERT_EQ(e.kind(), ErrorKind::InfeasibleTile);
    }
  }
}

TEST(Dai, Counting) {
  EXPECT_EQ(dai(Tensor({4}, 16)), 1.0);
  EXPECT_EQ(dai(Tensor({2}, 16, {1, 2})), 0.0);
  EXPECT_EQ(dai(Tensor({4}, 16, {0, 1, 0, 3})), 0.5);
}

TEST(Peak, Throughput) {
  SimConfig cfg;
  EXPECT_EQ(peak_throughput(cfg), 537.6e9);
  cfg.mode = PrecisionMode::Int8Dual;
  EXPECT_EQ(peak_throughput(cfg), 1075.2e9);
  SimConfig unit;
  unit.N = unit.M = 1;
  unit.clock_hz = 1.0;
  EXPECT_EQ(peak_throughput(unit), 2.0);
}

TEST(Resources, Dsp) {
  SimConfig cfg;
  EXPECT_EQ(resource_estimate(cfg).dsp, 1350u);
  EXPECT_FALSE(resource_estimate(cfg).exceeds_device);
  cfg.mode = PrecisionMode::Int8Dual;
  EXPECT_EQ(resource_estimate(cfg).dsp, 2694u);
  EXPECT_TRUE(resource_estimate(cfg).exceeds_device);
  SimConfig unit;
  unit.N = unit.M = 1;
  EXPECT_EQ(resource_estimate(unit).dsp, 7u);
}

TEST(Roofline, FcKnees) {
  EXPECT_EQ(fc_knee_pes(128, 16), 8.0);
  EXPECT_EQ(fc_knee_pes(128, 8), 16.0);
  const auto at8 = roofline_fc(8, 128, 200e6, 16);
  const auto at7 = roofline_fc(7, 128, 200e6, 16);
  const auto at9 = roofline_fc(9, 128, 200e6, 16);
  EXPECT_TRUE(at7.attainable < at8.attainable);
  EXPECT_EQ(at8.attainable, at9.attainable);
  EXPECT_EQ(roofline_fc(32, 128, 200e6, 8).bandwidth_roof,
            2 * roofline_fc(32, 128, 200e6, 16).bandwidth_roof);
  const auto wide = roofline(537.6e9, 1e9, 1e6, std::numeric_limits<std::size_t>::max() / 16,
                             200e6);
  EXPECT_EQ(wide.attainable, 537.6e9);
}

TEST(Bandwidth, PerCycle) {
  SimConfig cfg;
  const auto b = bandwidth_per_cycle(cfg, 64);
  EXPECT_EQ(b.sparse_wise, 1216u);
  EXPECT_EQ(b.cambricon_s, 21952u);
  EXPECT_EQ(b.scnn, 48u * 64 * 16);
  SimConfig unit;
  unit.N = unit.M = 1;
  unit.A = unit.B = 1;
  EXPECT_EQ(bandwidth_per_cycle(unit).sparse_wise, 2u);
}

TEST(LayerPerf, EffectiveBelowRoofline) {
  oracle::Rng r(62);
  for (int iter = 0; iter < 30; ++iter) {
    SimConfig cfg;
    cfg.N = r.range(1, 6);
    cfg.M = r.range(1, 12);
    cfg.bus_bits = 16 * r.range(1, 16);
    const LayerSpec L = conv_layer(r.range(1, 8), r.range(1, 4), r.range(1, 12), r.range(1, 12),
                                   3, r.range(1, 2));
    const Tensor w = oracle::shared_kernels(r, L.F, L.C, 3, cfg.N, r.unit(), 16);
    const Tensor x = oracle::random_tensor(r, {L.C, L.in_height(), L.in_width()}, 16, 0.3);
    const auto run = run_conv_layer(L, encode_conv_layer(w, cfg.N), x, cfg);
    const auto p = layer_perf("c", L, run.stats, cfg);
    EXPECT_LE(p.effective_gops, p.attainable_gops_roofline * (1 + 1e-12));
    EXPECT_LE(p.attainable_gops_roofline, p.peak_gops * (1 + 1e-12));

    const std::size_t F = r.range(1, 40), C = r.range(1, 60);
    const Tensor fw = oracle::random_tensor(r, {F, C}, 16, r.unit());
    const Tensor fx = oracle::random_tensor(r, {C}, 16, 0.2);
    const auto fr = run_fc_layer(fc_layer(F, C), encode_fc(fw, cfg.M), fx, cfg);
    const auto fp = layer_perf("f", fc_layer(F, C), fr.stats, cfg);
    EXPECT_LE(fp.effective_gops, fp.attainable_gops_roofline * (1 + 1e-12));
    EXPECT_LE(fp.attainable_gops_roofline, fp.peak_gops * (1 + 1e-12));
  }
}

TEST(LayerPerf, DaiEqualsGatedFraction) {
  oracle::Rng r(63);
  SimConfig cfg;
  cfg.N = 3;
  cfg.M = 4;
  const LayerSpec L = conv_layer(3, 2, 1, 4, 1);  // every activation selected once per entry
  const Tensor w = oracle::shared_kernels(r, 3, 2, 1, 3, 1.0, 16);
  const Tensor x = oracle::random_tensor(r, {2, 1, 4}, 16, 0.4);
  const auto run = run_conv_layer(L, encode_conv_layer(w, 3), x, cfg);
  const auto p = layer_perf("c", L, run.stats, cfg);
  EXPECT_DOUBLE_EQ(p.dai, dai(x));
}
