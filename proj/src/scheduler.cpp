#include "swsim/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "swsim/vgm.hpp"

namespace swsim {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw SimError(ErrorKind::InvalidArgument, "config " + key + ": '" + v + "' is not a count");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw SimError(ErrorKind::InvalidArgument, "config " + key + ": '" + v + "' is not a number");
  }
}

void check_fits(const Tensor& t, int bits, const char* what) {
  for (int32_t v : t.data())
    if (!fixed::fits(v, bits))
      throw SimError(ErrorKind::ModeMismatch, std::string(what) + " value " + std::to_string(v) +
                                                   " exceeds " + std::to_string(bits) + " bits");
}

}  // namespace

void SimConfig::validate() const {
  if (N == 0 || M == 0 || clock_hz <= 0 || bus_bits == 0 || slice_bram() == 0)
    throw SimError(ErrorKind::InvalidArgument, "N, M, clock, bus and PSB size must be positive");
  const int max_width = mode == PrecisionMode::Int8Dual ? 8 : 16;
  if (A < 1 || B < 1 || A > max_width || B > max_width)
    throw SimError(ErrorKind::InvalidArgument,
                   "operand widths must be within 1.." + std::to_string(max_width) + " bits in " +
                       to_string(mode));
}

void SimConfig::set(const std::string& key, const std::string& value) {
  if (key == "N") N = parse_count(key, value);
  else if (key == "M") M = parse_count(key, value);
  else if (key == "clock_hz" || key == "clock") clock_hz = parse_real(key, value);
  else if (key == "A") A = static_cast<int>(parse_count(key, value));
  else if (key == "B") B = static_cast<int>(parse_count(key, value));
  else if (key == "abin_bytes") abin_bytes = parse_count(key, value);
  else if (key == "about_bytes") about_bytes = parse_count(key, value);
  else if (key == "wib_bytes") wib_bytes = parse_count(key, value);
  else if (key == "wb_bytes") wb_bytes = parse_count(key, value);
  else if (key == "psb_bytes") psb_bytes = parse_count(key, value);
  else if (key == "slice_bram") psb_bytes = 4 * parse_count(key, value);
  else if (key == "bus_bits") bus_bits = parse_count(key, value);
  else if (key == "mode") mode = parse_precision_mode(value);
  else if (key == "pipeline_fill") pipeline_fill = parse_count(key, value);
  else if (key == "shift_penalty") shift_penalty = parse_count(key, value);
  else if (key == "device_dsp") device_dsp = parse_count(key, value);
  else throw SimError(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
}

void SimConfig::apply_overrides(const std::vector<std::string>& overrides) {
  std::set<std::string> keys;
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw SimError(ErrorKind::InvalidArgument, "config override '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    set(key, kv.substr(eq + 1));
    keys.insert(key);
  }
  if (keys.count("mode")) {
    const int w = mode == PrecisionMode::Int8Dual ? 8 : 16;
    if (!keys.count("A")) A = w;
    if (!keys.count("B")) B = w;
  }
}

CycleStats& CycleStats::operator+=(const CycleStats& o) {
  compute_cycles += o.compute_cycles;
  memory_stall_cycles += o.memory_stall_cycles;
  gated_pe_cycles += o.gated_pe_cycles;
  active_pe_cycles += o.active_pe_cycles;
  total_macs += o.total_macs;
  bytes_in += o.bytes_in;
  bytes_out += o.bytes_out;
  fill_cycles += o.fill_cycles;
  entries_visited += o.entries_visited;
  useful_lane_slots += o.useful_lane_slots;
  issued_lane_slots += o.issued_lane_slots;
  vgm_loads += o.vgm_loads;
  vgm_reloads += o.vgm_reloads;
  max_datapath_bits = std::max(max_datapath_bits, o.max_datapath_bits);
  tiles += o.tiles;
  return *this;
}

MappingMode map_plan(const LayerSpec& layer, const SimConfig& cfg) {
  const std::size_t L = cfg.lanes();
  if (layer.V >= L) return {MappingKind::RowTile, 1, L};
  return {MappingKind::BlockTile, L / layer.V, layer.V};
}

TilePlan tile_plan(const LayerSpec& layer, const SimConfig& cfg) {
  if (layer.kind != LayerKind::Conv)
    throw SimError(ErrorKind::InvalidArgument, "tile_plan applies to conv layers");
  layer.validate();
  const std::size_t L = cfg.lanes(), slice = cfg.slice_bram();
  std::size_t ut = std::min(layer.U, L * slice / layer.V);
  const MappingMode map = map_plan(layer, cfg);
  if (map.kind == MappingKind::RowTile) {
    const std::size_t col_groups = ceil_div(layer.V, L);
    while (ut > 0 && ut * col_groups > slice) --ut;
  } else {
    while (ut > 0 && ceil_div(ut, map.rows_per_pu) > slice) --ut;
    if (ut < layer.U) ut -= ut % map.rows_per_pu;
  }
  if (ut == 0)
    throw SimError(ErrorKind::InfeasibleTile,
                   "V=" + std::to_string(layer.V) + " does not fit " + std::to_string(L) +
                       " lanes x " + std::to_string(slice) + " PSB slots");
  TilePlan plan;
  plan.U_t = ut;
  plan.H_t = (ut - 1) * layer.S + layer.R;
  plan.tile_count = ceil_div(layer.U, ut);
  plan.overlap_rows = layer.R > layer.S ? layer.R - layer.S : 0;
  return plan;
}

LayerRun run_conv_layer(const LayerSpec& layer, std::span<const CompressedGroup> groups,
                        const Tensor& ifmap, const SimConfig& cfg,
                        const SelectObserver& observer) {
  cfg.validate();
  layer.validate();
  if (layer.kind != LayerKind::Conv)
    throw SimError(ErrorKind::InvalidArgument, "run_conv_layer on a non-conv layer");
  const std::size_t F = layer.F, C = layer.C, U = layer.U, V = layer.V, R = layer.R,
                    S = layer.S, N = cfg.N;
  const std::size_t W = layer.in_width();
  ifmap.expect_shape({C, layer.in_height(), W}, "conv ifmap");
  check_fits(ifmap, cfg.A, "activation");
  if (groups.size() != ceil_div(F, N))
    throw SimError(ErrorKind::ShapeMismatch, std::to_string(groups.size()) +
                                                 " weight groups for F=" + std::to_string(F) +
                                                 ", N=" + std::to_string(N));
  for (const auto& g : groups) {
    if (g.group_size != N || g.C != C || g.R != R)
      throw SimError(ErrorKind::ShapeMismatch, "weight group geometry does not match layer");
    g.validate();
    for (const auto& stream : g.values)
      for (int32_t w : stream)
        if (!fixed::fits(w, cfg.B))
          throw SimError(ErrorKind::ModeMismatch, "weight exceeds " + std::to_string(cfg.B) +
                                                       " bits");
  }

  const bool dual = cfg.mode == PrecisionMode::Int8Dual;
  const std::size_t L = cfg.lanes();
  const TilePlan plan = tile_plan(layer, cfg);
  const MappingMode map = map_plan(layer, cfg);
  const bool row_mode = map.kind == MappingKind::RowTile;
  const std::size_t col_groups = row_mode ? ceil_div(V, L) : 1;

  PeArray pe(N, cfg.M, cfg.slice_bram(), cfg.mode);
  Vgm vgm = row_mode ? Vgm::row_mode(L, S, R) : Vgm::block_mode(L, V, S, R);
  std::vector<int32_t> segment(vgm.segments() * vgm.depth());
  std::vector<uint8_t> valid(L);

  Tensor out({F, U, V}, 32);
  CycleStats st;
  uint64_t bits_in = 0, bits_out = 0;

  for (std::size_t t = 0; t < plan.tile_count; ++t) {
    const std::size_t oh = t * plan.U_t;
    const std::size_t rows = std::min(plan.U_t, U - oh);
    const std::size_t passes_per_col = row_mode ? rows : ceil_div(rows, map.rows_per_pu);
    const std::size_t slots_used = passes_per_col * col_groups;
    ++st.tiles;

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const CompressedGroup& g = groups[gi];
      const std::size_t nf = std::min(N, F - gi * N);
      const std::size_t a = g.entries();

      // Weights, values plus the index stream, arrive once per tile and group.
      bits_in += uint64_t{nf} * a * cfg.B + 4 * (a + R * C) + 16 * C;

      std::size_t channel_base = 0;
      for (std::size_t ic = 0; ic < C; ++ic) {
        bits_in += uint64_t{(rows - 1) * S + R} * W * cfg.A;
        for (std::size_t p = 0; p < passes_per_col; ++p) {
          const std::size_t t_oh = oh + (row_mode ? p : p * map.rows_per_pu);
          for (std::size_t cg = 0; cg < col_groups; ++cg) {
            const std::size_t ow = cg * L;
            const std::size_t slot = p * col_groups + cg;
            std::size_t n_valid = 0;
            for (std::size_t l = 0; l < L; ++l) {
              const bool ok = row_mode ? ow + l < V
                                       : l < map.rows_per_pu * V &&
                                             t_oh + l / V < oh + rows;
              valid[l] = ok;
              n_valid += ok;
            }

            std::size_t i = channel_base;  // rewinds for every output pass
            vgm.begin_pass();
            for (std::size_t kh = 0; kh < R; ++kh) {
              for (std::size_t seg = 0; seg < vgm.segments(); ++seg) {
                const std::size_t out_row = t_oh + seg;
                const bool live = out_row < oh + rows;
                for (std::size_t x = 0; x < vgm.depth(); ++x) {
                  const std::size_t col = ow * S + x;
                  segment[seg * vgm.depth() + x] =
                      live && col < W ? ifmap(ic, out_row * S + kh, col) : 0;
                }
              }
              vgm.load(segment);
              vgm.reload();

              const std::size_t kw_max = g.r_pointer[ic * R + kh];
              if (kw_max > 0) {
                st.compute_cycles += kw_max + cfg.pipeline_fill;
                st.fill_cycles += cfg.pipeline_fill;
              }
              for (std::size_t kw = 0; kw < kw_max; ++kw) {
                const unsigned step = g.index[i + kw];
                const auto acts = vgm.select(step);
                if (step > 1) st.compute_cycles += cfg.shift_penalty;
                for (std::size_t n = 0; n < nf; ++n) {
                  const int32_t w = g.values[n][i + kw];
                  if (dual)
                    pe.pe_dual8_cycle(n, w, acts, slot, valid);
                  else
                    pe.pu_cycle(n, w, acts, slot, valid);
                }
                ++st.entries_visited;
                st.useful_lane_slots += n_valid;
                st.issued_lane_slots += L;
                st.total_macs += uint64_t{nf} * n_valid;
                st.max_datapath_bits =
                    std::max<uint64_t>(st.max_datapath_bits, nf * cfg.B + L * cfg.A);
                if (observer)
                  observer(SelectEvent{t, gi, ic, t_oh, ow, kh, kw, step, acts, valid});
              }
              i += kw_max;
            }
          }
        }
        channel_base += g.offset[ic];
      }

      // Every channel has contributed; drain each real PU.
      const DrainRegion region{0, slots_used, true};
      for (std::size_t n = 0; n < nf; ++n) {
        const auto drained = pe.psb_drain(n, region, layer.relu);
        for (std::size_t p = 0; p < passes_per_col; ++p)
          for (std::size_t cg = 0; cg < col_groups; ++cg) {
            const std::size_t slot = p * col_groups + cg;
            for (std::size_t l = 0; l < L; ++l) {
              std::size_t u, v;
              if (row_mode) {
                u = oh + p;
                v = cg * L + l;
                if (v >= V) continue;
              } else {
                if (l >= map.rows_per_pu * V) continue;
                u = oh + p * map.rows_per_pu + l / V;
                v = l % V;
                if (u >= oh + rows) continue;
              }
              out(gi * N + n, u, v) = drained[slot * L + l];
            }
          }
      }
      bits_out += uint64_t{nf} * rows * V * cfg.A;
    }
  }

  st.gated_pe_cycles = pe.gated_cycles();
  st.active_pe_cycles = pe.active_cycles();
  st.vgm_loads = vgm.load_count();
  st.vgm_reloads = vgm.reload_count();
  st.bytes_in = ceil_div(bits_in, 8);
  st.bytes_out = ceil_div(bits_out, 8);
  const uint64_t transfer = ceil_div(8 * st.bytes_moved(), cfg.bus_bits);
  st.memory_stall_cycles = transfer > st.compute_cycles ? transfer - st.compute_cycles : 0;
  return {std::move(out), st};
}

LayerRun run_fc_layer(const LayerSpec& layer, const CompressedFc& weights, const Tensor& ivec,
                      const SimConfig& cfg) {
  cfg.validate();
  layer.validate();
  if (layer.kind != LayerKind::FC)
    throw SimError(ErrorKind::InvalidArgument, "run_fc_layer on a non-fc layer");
  if (weights.F != layer.F || weights.C != layer.C)
    throw SimError(ErrorKind::ShapeMismatch, "fc weights do not match layer extents");
  if (weights.M != cfg.M)
    throw SimError(ErrorKind::ShapeMismatch, "fc weights encoded for M=" +
                                                 std::to_string(weights.M) + ", config has M=" +
                                                 std::to_string(cfg.M));
  ivec.expect_shape({layer.C}, "fc input");
  check_fits(ivec, cfg.A, "activation");
  weights.validate();
  for (int32_t w : weights.values)
    if (!fixed::fits(w, cfg.B))
      throw SimError(ErrorKind::ModeMismatch, "weight exceeds " + std::to_string(cfg.B) + " bits");

  const std::size_t M = cfg.M;
  PeArray pe(cfg.N, M, cfg.slice_bram(), cfg.mode);
  std::vector<uint8_t> valid(M);
  Tensor out({layer.F}, 32);
  CycleStats st;
  uint64_t fetched = 0;

  for (std::size_t g = 0; g < weights.row_groups(); ++g) {
    const std::size_t rows = std::min(M, layer.F - g * M);
    for (std::size_t m = 0; m < M; ++m) valid[m] = m < rows;
    const std::size_t first = weights.row_starts[g], last = weights.row_starts[g + 1];
    std::size_t pos = 0;
    for (std::size_t e = first; e < last; ++e) {
      pos += weights.index[e] + (e == first ? 0 : 1);
      const std::span<const int32_t> w(weights.values.data() + e * M, M);
      pe.pu_fc_cycle(0, w, ivec(pos), 0, valid);
    }
    const std::size_t entries = last - first;
    if (entries > 0) {
      st.compute_cycles += entries + cfg.pipeline_fill;
      st.fill_cycles += cfg.pipeline_fill;
    }
    fetched += uint64_t{entries} * M;
    st.entries_visited += entries;
    st.useful_lane_slots += uint64_t{entries} * rows;
    st.issued_lane_slots += uint64_t{entries} * M;
    st.total_macs += uint64_t{entries} * rows;
    if (entries > 0)
      st.max_datapath_bits = std::max<uint64_t>(st.max_datapath_bits, M * cfg.B + cfg.A);

    const auto drained = pe.psb_drain(0, DrainRegion{0, 1, true}, layer.relu);
    for (std::size_t m = 0; m < rows; ++m) out(g * M + m) = drained[m * macs_per_pe(cfg.mode)];
  }

  st.gated_pe_cycles = pe.gated_cycles();
  st.active_pe_cycles = pe.active_cycles();
  st.bytes_in = ceil_div(fetched * cfg.B + 4 * weights.entries() + uint64_t{layer.C} * cfg.A, 8);
  st.bytes_out = ceil_div(uint64_t{layer.F} * cfg.A, 8);
  const uint64_t transfer = ceil_div(fetched * cfg.B, cfg.bus_bits);
  st.memory_stall_cycles = transfer > st.compute_cycles ? transfer - st.compute_cycles : 0;
  return {std::move(out), st};
}

}  // namespace swsim
