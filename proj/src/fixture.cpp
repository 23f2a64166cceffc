#include "swsim/fixture.hpp"

#include <cmath>

#include "swsim/io.hpp"

namespace swsim {

uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) throw SimError(ErrorKind::InvalidArgument, "empty range");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

int64_t uniform_int(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(uniform_below(rng, static_cast<uint64_t>(hi - lo) + 1));
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

Tensor random_weights(std::mt19937_64& rng, std::vector<std::size_t> shape, int width) {
  Tensor t(std::move(shape), width);
  const int64_t hi = width >= 16 ? 255 : 127;
  for (auto& v : t.data()) {
    const int64_t mag = uniform_int(rng, 1, hi);
    v = static_cast<int32_t>(rng() & 1 ? mag : -mag);
  }
  return t;
}

}  // namespace

Fixture make_fixture(const Network& net, const SimConfig& cfg, const FixtureOptions& opt) {
  net.validate();
  if (opt.density < 0.0 || opt.density > 1.0)
    throw SimError(ErrorKind::InvalidArgument, "density must be in (0, 1]");
  if (!(opt.act_sparsity >= 0.0 && opt.act_sparsity < 1.0))
    throw SimError(ErrorKind::InvalidArgument, "act_sparsity must be in [0, 1)");

  std::mt19937_64 rng(opt.seed);
  Fixture fx;
  for (std::size_t i : net.weight_layers()) {
    const auto& L = net.layers[i];
    const auto& s = L.spec;
    const double d = opt.density > 0.0 ? opt.density : L.density;
    if (s.kind == LayerKind::FC) {
      Tensor w = random_weights(rng, {s.F, s.C}, cfg.B);
      Tensor p = group_prune(w.reshaped({s.F, s.C, 1, 1}), cfg.M, d).reshaped({s.F, s.C});
      fx.dense.push_back(std::move(w));
      fx.pruned.push_back(std::move(p));
    } else {
      Tensor w = random_weights(rng, {s.F, s.C, s.R, s.R}, cfg.B);
      fx.pruned.push_back(group_prune(w, cfg.N, d));
      fx.dense.push_back(std::move(w));
    }
  }
  fx.container = encode_network(net, fx.pruned, cfg);

  fx.input = Tensor(net.input_shape(), cfg.A);
  auto data = fx.input.data();
  const int64_t hi = cfg.A >= 16 ? 255 : 127;
  for (auto& v : data) v = static_cast<int32_t>(uniform_int(rng, 1, hi));
  const std::size_t n = data.size();
  const auto zeros = static_cast<std::size_t>(std::llround(opt.act_sparsity * n));
  // Partial Fisher-Yates over positions picks the zeroed set.
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[k] = k;
  for (std::size_t k = 0; k < zeros; ++k) {
    std::swap(pos[k], pos[k + uniform_below(rng, n - k)]);
    data[pos[k]] = 0;
  }
  return fx;
}

void write_fixture(const std::filesystem::path& dir, const Network& net, const Fixture& fx,
                   const FixtureOptions& opt,
                   const std::vector<std::string>& config_overrides) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimError(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_tensors(dir / "dense.swt", fx.dense);
  write_tensors(dir / "pruned.swt", fx.pruned);
  write_swsc(dir / "weights.swsc", fx.container);
  write_tensor(dir / "input.swt", fx.input);
  const std::string spec = model_spec_json(net);
  write_file(dir / "model.json", std::vector<uint8_t>(spec.begin(), spec.end()));
  RunManifest m;
  m.model = "model.json";
  m.weights = "weights.swsc";
  m.input = "input.swt";
  m.report = "report.json";
  m.config = config_overrides;
  m.seed = opt.seed;
  const std::string mj = manifest_json(m);
  write_file(dir / "manifest.json", std::vector<uint8_t>(mj.begin(), mj.end()));
}

}  // namespace swsim
