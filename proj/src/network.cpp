#include "swsim/network.hpp"

namespace swsim {

namespace {

bool has_weights(const LayerSpec& l) { return l.kind != LayerKind::MaxPool; }

std::string where(std::size_t i, const NetworkLayer& l) {
  return "layer " + std::to_string(i) + (l.name.empty() ? "" : " (" + l.name + ")");
}

}  // namespace

std::vector<std::size_t> Network::input_shape() const {
  if (layers.empty()) throw SimError(ErrorKind::ShapeMismatch, "network has no layers");
  const auto& first = layers.front();
  const auto& s = first.spec;
  if (s.kind == LayerKind::FC) return {s.C};
  const std::size_t H = s.in_height(), W = s.in_width();
  if (H < 2 * first.pad + 1 || W < 2 * first.pad + 1)
    throw SimError(ErrorKind::ShapeMismatch, "padding larger than the first layer input");
  return {s.C, H - 2 * first.pad, W - 2 * first.pad};
}

void Network::validate() const {
  std::vector<std::size_t> shape = input_shape();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& L = layers[i];
    try {
      L.spec.validate();
    } catch (const SimError& e) {
      throw SimError(ErrorKind::ShapeMismatch, where(i, L) + ": " + e.detail());
    }
    const auto& s = L.spec;
    if (s.kind == LayerKind::FC) {
      std::size_t numel = 1;
      for (auto e : shape) numel *= e;
      if (numel != s.C)
        throw SimError(ErrorKind::ShapeMismatch, where(i, L) + ": expects " +
                                                     std::to_string(s.C) + " inputs, previous "
                                                     "layer yields " + shape_string(shape));
      if (L.pad) throw SimError(ErrorKind::ShapeMismatch, where(i, L) + ": fc takes no padding");
      shape = {s.F};
      continue;
    }
    if (shape.size() != 3 || shape[0] != s.C ||
        shape[1] + 2 * L.pad != s.in_height() || shape[2] + 2 * L.pad != s.in_width())
      throw SimError(ErrorKind::ShapeMismatch,
                     where(i, L) + ": input " + shape_string(shape) + " + pad " +
                         std::to_string(L.pad) + " does not give [" + std::to_string(s.C) + "," +
                         std::to_string(s.in_height()) + "," + std::to_string(s.in_width()) +
                         "]");
    shape = {s.F, s.U, s.V};
  }
}

std::vector<std::size_t> Network::weight_layers() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (has_weights(layers[i].spec)) idx.push_back(i);
  return idx;
}

SwscContainer encode_network(const Network& net, const DenseWeights& weights,
                             const SimConfig& cfg) {
  net.validate();
  const auto idx = net.weight_layers();
  if (idx.size() != weights.size())
    throw SimError(ErrorKind::FormatError, std::to_string(weights.size()) +
                                               " weight tensors for " +
                                               std::to_string(idx.size()) + " weight layers");
  SwscContainer c;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& s = net.layers[idx[k]].spec;
    const Tensor& w = weights[k];
    EncodedLayer L;
    L.layer = s;
    L.layer.relu = false;
    L.elem_width = w.elem_width();
    if (s.kind == LayerKind::Conv) {
      w.expect_shape({s.F, s.C, s.R, s.R}, ("weights of " + where(idx[k], net.layers[idx[k]])).c_str());
      L.group_size = cfg.N;
      L.weights = encode_conv_layer(w, cfg.N);
    } else {
      w.expect_shape({s.F, s.C}, ("weights of " + where(idx[k], net.layers[idx[k]])).c_str());
      L.group_size = cfg.M;
      L.weights = encode_fc(w, cfg.M);
    }
    c.layers.push_back(std::move(L));
  }
  return c;
}

DenseWeights decode_network(const SwscContainer& c) {
  DenseWeights out;
  for (const auto& L : c.layers) {
    if (L.layer.kind == LayerKind::Conv)
      out.push_back(decode_conv_layer(L.conv_groups(), L.layer.F));
    else
      out.push_back(decode_fc(L.fc(), L.layer.F, L.layer.C));
  }
  return out;
}

namespace {

std::size_t last_weight_layer(const Network& net) {
  const auto idx = net.weight_layers();
  return idx.empty() ? net.layers.size() : idx.back();
}

Tensor flatten(const Tensor& t) { return t.reshaped({t.size()}); }

}  // namespace

Tensor reference_network(const Network& net, const DenseWeights& weights, const Tensor& input,
                         int act_width) {
  net.validate();
  input.expect_shape(net.input_shape(), "network input");
  if (weights.size() != net.weight_layers().size())
    throw SimError(ErrorKind::FormatError, "weight count does not match the network");
  const std::size_t last = last_weight_layer(net);
  Tensor x = input;
  std::size_t k = 0;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& L = net.layers[i];
    switch (L.spec.kind) {
      case LayerKind::Conv: x = conv_reference(L.spec, zero_pad(x, L.pad), weights[k++]); break;
      case LayerKind::FC: x = fc_reference(weights[k++], flatten(x), L.spec.relu); break;
      case LayerKind::MaxPool: x = maxpool_reference(x, L.spec.R, L.spec.S); break;
    }
    if (L.spec.kind != LayerKind::MaxPool && i != last) x = requantize(x, L.shift, act_width);
  }
  return x;
}

NetworkRun run_network(const Network& net, const SwscContainer& weights, const Tensor& input,
                       const SimConfig& cfg) {
  net.validate();
  input.expect_shape(net.input_shape(), "network input");
  const auto idx = net.weight_layers();
  if (idx.size() != weights.layers.size())
    throw SimError(ErrorKind::FormatError,
                   "container holds " + std::to_string(weights.layers.size()) +
                       " layers, model has " + std::to_string(idx.size()) + " weight layers");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const LayerSpec& want = net.layers[idx[k]].spec;
    const LayerSpec& got = weights.layers[k].layer;
    if (want.kind != got.kind || want.F != got.F || want.C != got.C || want.U != got.U ||
        want.V != got.V || want.R != got.R || want.S != got.S)
      throw SimError(ErrorKind::FormatError,
                     "container layer " + std::to_string(k) + " does not match " +
                         where(idx[k], net.layers[idx[k]]));
  }

  const std::size_t last = last_weight_layer(net);
  NetworkRun run;
  Tensor x = input;
  std::size_t k = 0;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& L = net.layers[i];
    CycleStats stats;
    try {
      switch (L.spec.kind) {
        case LayerKind::Conv: {
          auto r = run_conv_layer(L.spec, weights.layers[k++].conv_groups(), zero_pad(x, L.pad),
                                  cfg);
          x = std::move(r.output);
          stats = r.stats;
          break;
        }
        case LayerKind::FC: {
          auto r = run_fc_layer(L.spec, weights.layers[k++].fc(), flatten(x), cfg);
          x = std::move(r.output);
          stats = r.stats;
          break;
        }
        case LayerKind::MaxPool: x = maxpool_reference(x, L.spec.R, L.spec.S); break;
      }
    } catch (const SimError& e) {
      throw SimError(e.kind(), where(i, L) + ": " + e.detail());
    }
    if (L.spec.kind != LayerKind::MaxPool && i != last) x = requantize(x, L.shift, cfg.A);
    run.layer_stats.push_back(stats);
    run.report.per_layer.push_back(
        layer_perf(L.name.empty() ? "layer" + std::to_string(i) : L.name, L.spec, stats, cfg));
  }
  run.report.aggregate = aggregate_perf(run.report.per_layer, cfg);
  run.output = std::move(x);
  return run;
}

}  // namespace swsim
