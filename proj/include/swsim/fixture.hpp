#pragma once

#include <cstdint>
#include <filesystem>
#include <random>

#include "swsim/container.hpp"
#include "swsim/network.hpp"
#include "swsim/scheduler.hpp"

namespace swsim {

// Uniform integer in [0, n) by rejection; avoids the library distributions
// so outputs do not depend on the standard library implementation.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t n);
// Uniform integer in [lo, hi].
int64_t uniform_int(std::mt19937_64& rng, int64_t lo, int64_t hi);
// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng);

struct FixtureOptions {
  double density = 0.0;       // > 0 overrides every layer's density
  double act_sparsity = 0.0;  // zero fraction of the input tensor
  uint64_t seed = 0;
};

struct Fixture {
  DenseWeights dense;
  DenseWeights pruned;
  SwscContainer container;
  Tensor input;
};

// Random dense weights with no zeros, pruned per layer (conv groups of N,
// fc row groups of M) and encoded. The input has exactly
// round(act_sparsity * numel) zeros; the rest are positive.
Fixture make_fixture(const Network& net, const SimConfig& cfg, const FixtureOptions& opt);

// Writes dense.swt, pruned.swt, weights.swsc, input.swt, model.json and
// manifest.json into `dir`.
void write_fixture(const std::filesystem::path& dir, const Network& net, const Fixture& fx,
                   const FixtureOptions& opt,
                   const std::vector<std::string>& config_overrides);

}  // namespace swsim
