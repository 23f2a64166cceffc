#include <gtest/gtest.h>

#include "oracles.hpp"
#include "swsim/scheduler.hpp"

using namespace swsim;

namespace {

SimConfig small_cfg(std::size_t N, std::size_t M, PrecisionMode mode = PrecisionMode::Fixed16) {
  SimConfig cfg;
  cfg.N = N;
  cfg.M = M;
  cfg.mode = mode;
  cfg.A = cfg.B = mode == PrecisionMode::Int8Dual ? 8 : 16;
  return cfg;
}

std::vector<int32_t> oracle_conv(const LayerSpec& L, const Tensor& x, const Tensor& w) {
  return oracle::conv(x.values(), L.C, L.in_height(), L.in_width(), w.values(), L.F, L.R, L.S,
                      L.U, L.V, L.relu);
}

}  // namespace

TEST(TilePlan, LargeLayer) {
  SimConfig cfg;  // M=28, 512 slots
  const auto p = tile_plan(conv_layer(64, 64, 224, 224, 3), cfg);
  EXPECT_EQ(p.U_t, 64u);
  EXPECT_EQ(p.H_t, 66u);
  EXPECT_EQ(p.tile_count, 4u);
  EXPECT_EQ(p.overlap_rows, 2u);
}

TEST(TilePlan, SmallLayerSingleTile) {
  SimConfig cfg;
  EXPECT_EQ(tile_plan(conv_layer(8, 8, 13, 13, 3), cfg).tile_count, 1u);
  EXPECT_EQ(tile_plan(conv_layer(8, 8, 56, 56, 3), cfg).tile_count, 1u);
}

TEST(TilePlan, StrideTwoHeight) {
  SimConfig cfg = small_cfg(1, 4);
  cfg.psb_bytes = 4 * 10;  // 10 slots, V=4 -> U_t = 10
  const auto p = tile_plan(conv_layer(1, 1, 30, 4, 3, 2), cfg);
  EXPECT_EQ(p.U_t, 10u);
  EXPECT_EQ(p.H_t, 21u);
  EXPECT_EQ(p.overlap_rows, 1u);
}

TEST(TilePlan, Infeasible) {
  SimConfig cfg = small_cfg(1, 2);
  cfg.psb_bytes = 4;  // one slot
  try {
    tile_plan(conv_layer(1, 1, 3, 9, 1), cfg);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasibleTile);
  }
}

TEST(MapPlan, Modes) {
  SimConfig cfg;
  EXPECT_EQ(map_plan(conv_layer(1, 1, 224, 224, 3), cfg).kind, MappingKind::RowTile);
  const auto b = map_plan(conv_layer(1, 1, 13, 13, 3), cfg);
  EXPECT_EQ(b.kind, MappingKind::BlockTile);
  EXPECT_EQ(b.rows_per_pu, 2u);
  EXPECT_EQ(b.cols_per_pu, 13u);
  EXPECT_EQ(map_plan(conv_layer(1, 1, 28, 28, 3), cfg).kind, MappingKind::RowTile);
}

TEST(RunConv, DenseSingleGroupCycles) {
  SimConfig cfg = small_cfg(2, 4);
  const LayerSpec L = conv_layer(2, 1, 4, 4, 3);
  oracle::Rng r(51);
  const Tensor w = oracle::random_tensor(r, {2, 1, 3, 3}, 16, 0.0);
  const Tensor x = oracle::random_tensor(r, {1, 6, 6}, 16, 0.0);
  auto run = run_conv_layer(L, encode_conv_layer(w, 2), x, cfg);
  EXPECT_EQ(run.output.values(), oracle_conv(L, x, w));
  // Four output-row passes, each R*R entries.
  EXPECT_EQ(run.stats.compute_cycles, 4u * 9);
  cfg.pipeline_fill = 2;
  run = run_conv_layer(L, encode_conv_layer(w, 2), x, cfg);
  EXPECT_EQ(run.stats.compute_cycles, 4u * (9 + 3 * 2));
}

TEST(RunConv, EmptyKernelRowCostsNothing) {
  SimConfig cfg = small_cfg(1, 4);
  const LayerSpec L = conv_layer(1, 1, 1, 4, 3);
  Tensor w({1, 1, 3, 3}, 16);
  w(0, 0, 0, 1) = 3;
  w(0, 0, 2, 2) = -2;
  oracle::Rng r(52);
  const Tensor x = oracle::random_tensor(r, {1, 3, 6}, 16, 0.0);
  const auto run = run_conv_layer(L, encode_conv_layer(w, 1), x, cfg);
  EXPECT_EQ(run.stats.compute_cycles, 2u);
  EXPECT_EQ(run.output.values(), oracle_conv(L, x, w));
}

TEST(RunConv, RandomLayersMatchOracle) {
  oracle::Rng r(53);
  for (auto mode : {PrecisionMode::Fixed16, PrecisionMode::Int8Dual})
    for (int iter = 0; iter < 40; ++iter) {
      SimConfig cfg = small_cfg(r.range(1, 5), r.range(1, 8), mode);
      cfg.psb_bytes = 4 * r.range(4, 64);
      const std::size_t R = 2 * r.range(0, 2) + 1;
      LayerSpec L = conv_layer(r.range(1, 8), r.range(1, 4), r.range(1, 16), r.range(1, 20), R,
                               r.range(1, 2), r.chance(0.5));
      const Tensor w = oracle::shared_kernels(r, L.F, L.C, R, cfg.N, 0.05 + 0.95 * r.unit(),
                                              cfg.B);
      const Tensor x =
          oracle::random_tensor(r, {L.C, L.in_height(), L.in_width()}, cfg.A, 0.3);
      try {
        const auto run = run_conv_layer(L, encode_conv_layer(w, cfg.N), x, cfg);
        ASSERT_EQ(run.output.values(), oracle_conv(L, x, w));
      } catch (const SimError& e) {
        ASSERT_EQ(e.kind(), ErrorKind::InfeasibleTile) << e.what();
      }
    }
}

TEST(RunConv, TiledEqualsUntiled) {
  oracle::Rng r(54);
  int tiled_runs = 0;
  for (int iter = 0; iter < 30; ++iter) {
    SimConfig cfg = small_cfg(r.range(1, 3), r.range(2, 6));
    const std::size_t R = 2 * r.range(0, 2) + 1;
    const LayerSpec L = conv_layer(r.range(1, 4), r.range(1, 3), r.range(4, 20), r.range(1, 12), R,
                                   r.range(1, 2));
    const Tensor w = oracle::shared_kernels(r, L.F, L.C, R, cfg.N, 0.5, 16);
    const Tensor x = oracle::random_tensor(r, {L.C, L.in_height(), L.in_width()}, 16, 0.2);
    const auto groups = encode_conv_layer(w, cfg.N);
    const auto whole = run_conv_layer(L, groups, x, cfg);
    ASSERT_EQ(tile_plan(L, cfg).tile_count, 1u);
    SimConfig tight = cfg;
    tight.psb_bytes = 4 * r.range(2, 4);
    try {
      const auto tiled = run_conv_layer(L, groups, x, tight);
      tiled_runs += tile_plan(L, tight).tile_count > 1;
      EXPECT_EQ(tiled.output, whole.output);
    } catch (const SimError& e) {
      ASSERT_EQ(e.kind(), ErrorKind::InfeasibleTile);
    }
  }
  EXPECT_GE(tiled_runs, 15);
}

TEST(RunConv, DensityRatio) {
  oracle::Rng r(55);
  SimConfig cfg = small_cfg(4, 8);
  const LayerSpec L = conv_layer(8, 4, 8, 8, 3);
  const Tensor dense = oracle::random_tensor(r, {8, 4, 3, 3}, 16, 0.0);
  const Tensor x = oracle::random_tensor(r, {4, 10, 10}, 16, 0.0);
  const auto full = run_conv_layer(L, encode_conv_layer(dense, 4), x, cfg);
  const Tensor pruned = group_prune(dense, 4, 0.25);
  const auto sparse = run_conv_layer(L, encode_conv_layer(pruned, 4), x, cfg);
  const double d = (1.0 - std::count(pruned.data().begin(), pruned.data().end(), 0) /
                              double(pruned.size()));
  EXPECT_NEAR(double(sparse.stats.compute_cycles) / full.stats.compute_cycles, d, 1e-12);
}

TEST(RunConv, BandwidthBound) {
  oracle::Rng r(56);
  for (auto mode : {PrecisionMode::Fixed16, PrecisionMode::Int8Dual}) {
    SimConfig cfg = small_cfg(6, 5, mode);
    const LayerSpec L = conv_layer(10, 2, 6, 9, 3);
    const Tensor w = oracle::shared_kernels(r, 10, 2, 3, 6, 0.5, cfg.B);
    const Tensor x = oracle::random_tensor(r, {2, 8, 11}, cfg.A, 0.2);
    const auto run = run_conv_layer(L, encode_conv_layer(w, 6), x, cfg);
    // N weights plus one activation per lane; a lane pair carries two 8-bit values.
    EXPECT_LE(run.stats.max_datapath_bits, cfg.N * cfg.B + cfg.lanes() * cfg.A);
    EXPECT_EQ(cfg.lanes() * cfg.A, cfg.M * 16);
  }
}

TEST(RunConv, GeometryErrors) {
  SimConfig cfg = small_cfg(2, 4);
  const LayerSpec L = conv_layer(3, 1, 2, 2, 3);
  Tensor w({3, 1, 3, 3}, 16);
  const auto groups = encode_conv_layer(w, 2);
  EXPECT_THROW(run_conv_layer(L, groups, Tensor({1, 3, 3}, 16), cfg), SimError);
  EXPECT_THROW(run_conv_layer(L, std::span(groups).first(1), Tensor({1, 4, 4}, 16), cfg),
               SimError);
  SimConfig dual = small_cfg(2, 4, PrecisionMode::Int8Dual);
  Tensor x({1, 4, 4}, 16);
  x(0, 0, 0) = 1000;
  try {
    run_conv_layer(L, groups, x, dual);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ModeMismatch);
  }
}

TEST(RunFc, Trivial) {
  SimConfig cfg = small_cfg(1, 1);
  const auto run = run_fc_layer(fc_layer(1, 1), encode_fc(Tensor({1, 1}, 16, {3}), 1),
                                Tensor({1}, 16, {5}), cfg);
  EXPECT_EQ(run.output.values(), std::vector<int32_t>{15});
  EXPECT_EQ(run.stats.entries_visited, 1u);
}

TEST(RunFc, DenseStallRatio) {
  SimConfig cfg = small_cfg(1, 28);
  oracle::Rng r(57);
  const Tensor w = oracle::random_tensor(r, {56, 64}, 16, 0.0);
  const Tensor x = oracle::random_tensor(r, {64}, 16, 0.0);
  const auto run = run_fc_layer(fc_layer(56, 64), encode_fc(w, 28), x, cfg);
  EXPECT_EQ(run.output.values(), oracle::fc(w.values(), 56, 64, x.values(), false));
  EXPECT_EQ(run.stats.compute_cycles, 128u);
  // 128-bit bus carries 8 weights per cycle against 28 demanded.
  EXPECT_EQ(run.stats.total_cycles() * 8, run.stats.compute_cycles * 28);
}

TEST(RunFc, FillersAndRandomLayers) {
  oracle::Rng r(58);
  for (auto mode : {PrecisionMode::Fixed16, PrecisionMode::Int8Dual})
    for (int iter = 0; iter < 30; ++iter) {
      SimConfig cfg = small_cfg(1, r.range(1, 9), mode);
      const std::size_t F = r.range(1, 20), C = r.range(1, 90);
      const Tensor w = oracle::random_tensor(r, {F, C}, cfg.B, r.unit());
      const Tensor x = oracle::random_tensor(r, {C}, cfg.A, 0.3);
      const bool relu = r.chance(0.5);
      const auto run = run_fc_layer(fc_layer(F, C, relu), encode_fc(w, cfg.M), x, cfg);
      ASSERT_EQ(run.output.values(), oracle::fc(w.values(), F, C, x.values(), relu));
    }
}

TEST(RunFc, MismatchedM) {
  SimConfig cfg = small_cfg(1, 4);
  EXPECT_THROW(run_fc_layer(fc_layer(2, 2), encode_fc(Tensor({2, 2}, 16), 2),
                            Tensor({2}, 16), cfg),
               SimError);
}

TEST(SimConfig, Overrides) {
  SimConfig cfg;
  cfg.apply_overrides({"N=4", "M=7", "mode=int8dual", "slice_bram=64"});
  EXPECT_EQ(cfg.N, 4u);
  EXPECT_EQ(cfg.M, 7u);
  EXPECT_EQ(cfg.A, 8);
  EXPECT_EQ(cfg.B, 8);
  EXPECT_EQ(cfg.slice_bram(), 64u);
  EXPECT_EQ(cfg.lanes(), 14u);
  EXPECT_THROW(cfg.apply_overrides({"nope=1"}), SimError);
  EXPECT_THROW(cfg.apply_overrides({"N"}), SimError);
  EXPECT_THROW(cfg.apply_overrides({"N=abc"}), SimError);
}
