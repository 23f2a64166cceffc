#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swsim/fixture.hpp"
#include "swsim/io.hpp"
#include "swsim/network.hpp"
#include "swsim/perf.hpp"

using namespace swsim;

namespace {

enum Exit { kOk = 0, kValidation = 1, kIo = 2, kMismatch = 3 };

int exit_for(const SimError& e) {
  switch (e.kind()) {
    case ErrorKind::IoError:
    case ErrorKind::FormatError: return kIo;
    default: return kValidation;
  }
}

std::string layer_name(const NetworkLayer& L, std::size_t i) {
  return L.name.empty() ? "layer" + std::to_string(i) : L.name;
}

SimConfig make_config(const std::vector<std::string>& overrides) {
  SimConfig cfg;
  cfg.apply_overrides(overrides);
  cfg.validate();
  return cfg;
}

double density_of(const Tensor& w) {
  if (w.size() == 0) return 0.0;
  return 1.0 - dai(w);
}

// ---- encode ----------------------------------------------------------------

struct EncodeArgs {
  std::string model, weights, out;
  double prune = 0.0;
  std::vector<std::string> config;
};

int cmd_encode(const EncodeArgs& a) {
  const SimConfig cfg = make_config(a.config);
  const Network net = read_model_spec(a.model);
  DenseWeights w = read_tensors(a.weights);
  const auto idx = net.weight_layers();
  if (w.size() != idx.size())
    throw SimError(ErrorKind::FormatError, a.weights + " holds " + std::to_string(w.size()) +
                                               " tensors, model has " +
                                               std::to_string(idx.size()) + " weight layers");
  if (a.prune > 0.0) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& s = net.layers[idx[k]].spec;
      if (s.kind == LayerKind::FC)
        w[k] = group_prune(w[k].reshaped({s.F, s.C, 1, 1}), cfg.M, a.prune).reshaped({s.F, s.C});
      else
        w[k] = group_prune(w[k], cfg.N, a.prune);
    }
  }
  const SwscContainer c = encode_network(net, w, cfg);
  write_swsc(a.out, c);

  std::printf("%-12s %-5s %7s %10s %8s\n", "layer", "kind", "groups", "storage", "density");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& L = c.layers[k];
    std::size_t groups = 0, storage = 0;
    if (L.layer.kind == LayerKind::Conv) {
      groups = L.conv_groups().size();
      for (const auto& g : L.conv_groups()) storage += storage_count(g);
    } else {
      const auto& f = L.fc();
      groups = f.row_groups();
      storage = f.index.size() + f.values.size() + f.row_starts.size();
    }
    std::printf("%-12s %-5s %7zu %10zu %8.4f\n", layer_name(net.layers[idx[k]], idx[k]).c_str(),
                to_string(L.layer.kind), groups, storage, density_of(w[k]));
  }
  std::printf("wrote %s\n", a.out.c_str());
  return kOk;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string manifest, out;
  bool verify = false;
  std::vector<std::string> config;
};

int cmd_run(const RunArgs& a) {
  const RunManifest m = read_manifest(a.manifest);
  std::vector<std::string> overrides = m.config;
  overrides.insert(overrides.end(), a.config.begin(), a.config.end());
  const SimConfig cfg = make_config(overrides);
  const Network net = read_model_spec(m.model);
  const SwscContainer weights = read_swsc(m.weights);
  const Tensor input = read_tensor(m.input);

  const NetworkRun run = run_network(net, weights, input, cfg);
  std::optional<bool> verified;
  if (a.verify) {
    const Tensor ref = reference_network(net, decode_network(weights), input, cfg.A);
    verified = ref == run.output;
  }

  std::filesystem::path report = a.out.empty() ? m.report : std::filesystem::path(a.out);
  if (!report.empty()) {
    const std::string j = report_json(net.name, run.report, cfg, verified);
    write_file(report, std::vector<uint8_t>(j.begin(), j.end()));
  }

  const auto& agg = run.report.aggregate;
  std::printf("model        %s\n", net.name.c_str());
  std::printf("images/s     %.6g\n", agg.images_per_s);
  std::printf("total cycles %llu\n", static_cast<unsigned long long>(agg.total_cycles));
  std::printf("peak GOP/s   %.1f\n", agg.peak_gops);
  std::printf("%-12s %-7s %12s %8s %8s %10s\n", "layer", "kind", "cycles", "DMI", "DAI",
              "GOP/s");
  for (const auto& l : run.report.per_layer) {
    if (!l.modeled) {
      std::printf("%-12s %-7s %12s %8s %8s %10s\n", l.name.c_str(), to_string(l.kind),
                  "-", "-", "-", "-");
      continue;
    }
    std::printf("%-12s %-7s %12llu %8.4f %8.4f %10.3f\n", l.name.c_str(),
                to_string(l.kind), static_cast<unsigned long long>(l.cycles), l.dmi,
                l.dai, l.effective_gops);
  }
  if (verified) {
    if (!*verified) {
      std::printf("MISMATCH against the dense reference\n");
      return kMismatch;
    }
    std::printf("VERIFIED bit-exact\n");
  }
  return kOk;
}

// ---- gen-fixture -----------------------------------------------------------

struct FixtureArgs {
  std::string model, out;
  FixtureOptions opt;
  std::vector<std::string> config;
};

int cmd_gen_fixture(const FixtureArgs& a) {
  const SimConfig cfg = make_config(a.config);
  const Network net = read_model_spec(a.model);
  const Fixture fx = make_fixture(net, cfg, a.opt);
  write_fixture(a.out, net, fx, a.opt, a.config);
  for (std::size_t k = 0; k < fx.pruned.size(); ++k)
    std::printf("weights %zu density %.4f\n", k, density_of(fx.pruned[k]));
  std::printf("input zero fraction %.4f\n", dai(fx.input));
  std::printf("wrote %s\n", a.out.c_str());
  return kOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string model;
  std::vector<std::size_t> N, M;
  std::vector<std::string> modes;
  std::vector<std::string> config;
};

int cmd_sweep(const SweepArgs& a) {
  const Network net = read_model_spec(a.model);
  std::printf("%4s %4s %-8s %10s %6s %9s %7s %12s", "N", "M", "mode", "peak_gops", "dsp",
              "over_dev", "fc_knee", "fc_att_gops");
  for (std::size_t i : net.weight_layers()) {
    if (net.layers[i].spec.kind == LayerKind::Conv)
      std::printf(" %10s", ("dmi:" + layer_name(net.layers[i], i)).c_str());
  }
  std::printf("\n");
  for (const auto& mode : a.modes)
    for (std::size_t n : a.N)
      for (std::size_t m : a.M) {
        std::vector<std::string> ov = a.config;
        ov.push_back("mode=" + mode);
        ov.push_back("N=" + std::to_string(n));
        ov.push_back("M=" + std::to_string(m));
        const SimConfig cfg = make_config(ov);
        const auto res = resource_estimate(cfg);
        const auto fc = roofline_fc(cfg.M, cfg.bus_bits, cfg.clock_hz, cfg.B);
        std::printf("%4zu %4zu %-8s %10.1f %6zu %9s %7.1f %12.3f", cfg.N, cfg.M,
                    to_string(cfg.mode), peak_throughput(cfg) / 1e9, res.dsp,
                    res.exceeds_device ? "yes" : "no", fc_knee_pes(cfg.bus_bits, cfg.B),
                    fc.attainable / 1e9);
        for (std::size_t i : net.weight_layers())
          if (net.layers[i].spec.kind == LayerKind::Conv)
            std::printf(" %10.4f", dmi(net.layers[i].spec, cfg.lanes()));
        std::printf("\n");
      }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-wise accelerator simulator"};
  app.require_subcommand(1);
  std::vector<std::string> config;
  app.add_option("--config", config, "SimConfig override key=value (repeatable)");

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Encode dense weights into an SWSC container");
  enc->add_option("--model", ea.model, "Model spec (JSON)")->required();
  enc->add_option("--weights", ea.weights, "Dense weight tensors")->required();
  enc->add_option("--out", ea.out, "Output SWSC path")->required();
  enc->add_option("--prune", ea.prune, "Prune every layer to this density first")
      ->check(CLI::Range(0.0, 1.0));
  enc->add_option("--config", config, "SimConfig override key=value");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Simulate a manifest");
  run->add_option("manifest,--manifest", ra.manifest, "Run manifest (JSON)")->required();
  run->add_option("--out", ra.out, "Report path (overrides the manifest)");
  run->add_flag("--verify", ra.verify, "Compare against the dense reference");
  run->add_option("--config", config, "SimConfig override key=value");

  FixtureArgs fa;
  auto* gen = app.add_subcommand("gen-fixture", "Generate a synthetic pruned network");
  gen->add_option("--model", fa.model, "Model spec (JSON)")->required();
  gen->add_option("--out", fa.out, "Output directory")->required();
  gen->add_option("--density", fa.opt.density, "Weight density for every layer")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--act-sparsity", fa.opt.act_sparsity, "Input zero fraction")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", fa.opt.seed, "RNG seed");
  gen->add_option("--config", config, "SimConfig override key=value");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Tabulate configurations");
  sweep->add_option("--model", sa.model, "Model spec (JSON)")->required();
  sweep->add_option("--N", sa.N, "PU counts")->delimiter(',');
  sweep->add_option("--M", sa.M, "PE counts")->delimiter(',');
  sweep->add_option("--mode", sa.modes, "Precision modes")->delimiter(',');
  sweep->add_option("--config", config, "SimConfig override key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*enc) {
      ea.config = config;
      return cmd_encode(ea);
    }
    if (*run) {
      ra.config = config;
      return cmd_run(ra);
    }
    if (*gen) {
      fa.config = config;
      return cmd_gen_fixture(fa);
    }
    if (*sweep) {
      const SimConfig base = make_config(config);
      if (sa.N.empty()) sa.N = {base.N};
      if (sa.M.empty()) sa.M = {base.M};
      if (sa.modes.empty()) sa.modes = {to_string(base.mode)};
      sa.config = config;
      return cmd_sweep(sa);
    }
  } catch (const SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
  return kOk;
}
