#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "swsim/fixture.hpp"
#include "swsim/io.hpp"
#include "swsim/network.hpp"
#include "swsim/perf.hpp"
#include "swsim/scheduler.hpp"

namespace py = pybind11;
using namespace swsim;

namespace {

using IntArray = py::array_t<int64_t, py::array::c_style | py::array::forcecast>;

Tensor to_tensor(const IntArray& a, int width) {
  std::vector<std::size_t> shape(a.shape(), a.shape() + a.ndim());
  std::vector<int32_t> data(a.size());
  const int64_t* p = a.data();
  for (py::ssize_t i = 0; i < a.size(); ++i) {
    if (!fixed::fits(p[i], width))
      throw SimError(ErrorKind::InvalidArgument,
                     "value " + std::to_string(p[i]) + " does not fit " + std::to_string(width) +
                         " bits");
    data[i] = static_cast<int32_t>(p[i]);
  }
  return Tensor(std::move(shape), width, std::move(data));
}

py::array_t<int32_t> to_array(const Tensor& t) {
  py::array_t<int32_t> out(t.shape());
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::dict stats_dict(const CycleStats& s) {
  py::dict d;
  d["compute_cycles"] = s.compute_cycles;
  d["memory_stall_cycles"] = s.memory_stall_cycles;
  d["total_cycles"] = s.total_cycles();
  d["gated_pe_cycles"] = s.gated_pe_cycles;
  d["active_pe_cycles"] = s.active_pe_cycles;
  d["total_macs"] = s.total_macs;
  d["bytes_in"] = s.bytes_in;
  d["bytes_out"] = s.bytes_out;
  d["entries_visited"] = s.entries_visited;
  d["useful_lane_slots"] = s.useful_lane_slots;
  d["issued_lane_slots"] = s.issued_lane_slots;
  d["vgm_loads"] = s.vgm_loads;
  d["tiles"] = s.tiles;
  return d;
}

}  // namespace

PYBIND11_MODULE(swsim, m) {
  m.doc() = "Cycle-level simulator for a shape-wise sparse CNN accelerator";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SimError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::enum_<LayerKind>(m, "LayerKind")
      .value("Conv", LayerKind::Conv)
      .value("FC", LayerKind::FC)
      .value("MaxPool", LayerKind::MaxPool);
  py::enum_<PrecisionMode>(m, "PrecisionMode")
      .value("Fixed16", PrecisionMode::Fixed16)
      .value("Int8Dual", PrecisionMode::Int8Dual);

  py::class_<LayerSpec>(m, "LayerSpec")
      .def_readwrite("kind", &LayerSpec::kind)
      .def_readwrite("F", &LayerSpec::F)
      .def_readwrite("C", &LayerSpec::C)
      .def_readwrite("U", &LayerSpec::U)
      .def_readwrite("V", &LayerSpec::V)
      .def_readwrite("R", &LayerSpec::R)
      .def_readwrite("S", &LayerSpec::S)
      .def_readwrite("relu", &LayerSpec::relu)
      .def_property_readonly("in_height", &LayerSpec::in_height)
      .def_property_readonly("in_width", &LayerSpec::in_width);
  m.def("conv_layer", &conv_layer, py::arg("F"), py::arg("C"), py::arg("U"), py::arg("V"),
        py::arg("R"), py::arg("S") = 1, py::arg("relu") = false);
  m.def("fc_layer", &fc_layer, py::arg("F"), py::arg("C"), py::arg("relu") = false);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def(py::init([](const std::vector<std::string>& overrides) {
             SimConfig c;
             c.apply_overrides(overrides);
             c.validate();
             return c;
           }),
           py::arg("overrides"))
      .def_readwrite("N", &SimConfig::N)
      .def_readwrite("M", &SimConfig::M)
      .def_readwrite("clock_hz", &SimConfig::clock_hz)
      .def_readwrite("A", &SimConfig::A)
      .def_readwrite("B", &SimConfig::B)
      .def_readwrite("psb_bytes", &SimConfig::psb_bytes)
      .def_readwrite("bus_bits", &SimConfig::bus_bits)
      .def_readwrite("mode", &SimConfig::mode)
      .def_readwrite("pipeline_fill", &SimConfig::pipeline_fill)
      .def_readwrite("shift_penalty", &SimConfig::shift_penalty)
      .def_property_readonly("slice_bram", &SimConfig::slice_bram)
      .def_property_readonly("lanes", &SimConfig::lanes)
      .def("apply_overrides", &SimConfig::apply_overrides);

  py::class_<CompressedGroup>(m, "CompressedGroup")
      .def_readonly("group_size", &CompressedGroup::group_size)
      .def_readonly("C", &CompressedGroup::C)
      .def_readonly("R", &CompressedGroup::R)
      .def_readonly("index", &CompressedGroup::index)
      .def_readonly("r_pointer", &CompressedGroup::r_pointer)
      .def_readonly("offset", &CompressedGroup::offset)
      .def_readonly("values", &CompressedGroup::values)
      .def_property_readonly("entries", &CompressedGroup::entries);
  py::class_<CompressedFc>(m, "CompressedFc")
      .def_readonly("M", &CompressedFc::M)
      .def_readonly("F", &CompressedFc::F)
      .def_readonly("C", &CompressedFc::C)
      .def_readonly("index", &CompressedFc::index)
      .def_readonly("values", &CompressedFc::values)
      .def_readonly("row_starts", &CompressedFc::row_starts)
      .def_property_readonly("entries", &CompressedFc::entries);

  m.def(
      "conv_reference",
      [](const IntArray& ifmap, const IntArray& kernels, std::size_t stride, bool relu,
         int width) {
        const Tensor x = to_tensor(ifmap, width), w = to_tensor(kernels, width);
        if (x.rank() != 3 || w.rank() != 4)
          throw SimError(ErrorKind::ShapeMismatch, "expected ifmap [C,H,W] and kernels [F,C,R,R]");
        const std::size_t R = w.extent(2);
        const LayerSpec L = conv_layer(w.extent(0), w.extent(1), (x.extent(1) - R) / stride + 1,
                                       (x.extent(2) - R) / stride + 1, R, stride, relu);
        return to_array(conv_reference(L, x, w));
      },
      py::arg("ifmap"), py::arg("kernels"), py::arg("stride") = 1, py::arg("relu") = false,
      py::arg("width") = 16);
  m.def(
      "fc_reference",
      [](const IntArray& w, const IntArray& x, bool relu, int width) {
        return to_array(fc_reference(to_tensor(w, width), to_tensor(x, width), relu));
      },
      py::arg("wmat"), py::arg("ivec"), py::arg("relu") = false, py::arg("width") = 16);

  m.def(
      "encode_conv_layer",
      [](const IntArray& kernels, std::size_t N, int width) {
        return encode_conv_layer(to_tensor(kernels, width), N);
      },
      py::arg("kernels"), py::arg("N"), py::arg("width") = 16);
  m.def(
      "decode_conv_layer",
      [](const std::vector<CompressedGroup>& g, std::size_t F) {
        return to_array(decode_conv_layer(g, F));
      },
      py::arg("groups"), py::arg("F"));
  m.def(
      "encode_fc",
      [](const IntArray& w, std::size_t M, int width) { return encode_fc(to_tensor(w, width), M); },
      py::arg("wmat"), py::arg("M"), py::arg("width") = 16);
  m.def(
      "decode_fc",
      [](const CompressedFc& f) { return to_array(decode_fc(f, f.F, f.C)); }, py::arg("fc"));
  m.def("storage_count", &storage_count);
  m.def(
      "group_prune",
      [](const IntArray& kernels, std::size_t group_size, double density, int width) {
        return to_array(group_prune(to_tensor(kernels, width), group_size, density));
      },
      py::arg("kernels"), py::arg("group_size"), py::arg("density"), py::arg("width") = 16);

  m.def(
      "run_conv_layer",
      [](const LayerSpec& L, const std::vector<CompressedGroup>& groups, const IntArray& ifmap,
         const SimConfig& cfg) {
        const auto run = run_conv_layer(L, groups, to_tensor(ifmap, cfg.A), cfg);
        return py::make_tuple(to_array(run.output), stats_dict(run.stats));
      },
      py::arg("layer"), py::arg("groups"), py::arg("ifmap"), py::arg("cfg"));
  m.def(
      "run_fc_layer",
      [](const LayerSpec& L, const CompressedFc& f, const IntArray& ivec, const SimConfig& cfg) {
        const auto run = run_fc_layer(L, f, to_tensor(ivec, cfg.A), cfg);
        return py::make_tuple(to_array(run.output), stats_dict(run.stats));
      },
      py::arg("layer"), py::arg("fc"), py::arg("ivec"), py::arg("cfg"));

  m.def(
      "tile_plan",
      [](const LayerSpec& L, const SimConfig& cfg) {
        const TilePlan p = tile_plan(L, cfg);
        py::dict d;
        d["U_t"] = p.U_t;
        d["H_t"] = p.H_t;
        d["tile_count"] = p.tile_count;
        d["overlap_rows"] = p.overlap_rows;
        return d;
      },
      py::arg("layer"), py::arg("cfg"));
  m.def("dmi", &dmi, py::arg("layer"), py::arg("lanes"));
  m.def("peak_throughput", &peak_throughput, py::arg("cfg"));
  m.def(
      "resource_estimate",
      [](const SimConfig& cfg) {
        const auto r = resource_estimate(cfg);
        py::dict d;
        d["dsp"] = r.dsp;
        d["bram_banks"] = r.bram_banks;
        d["exceeds_device"] = r.exceeds_device;
        return d;
      },
      py::arg("cfg"));
  m.def(
      "roofline_fc",
      [](std::size_t pes, std::size_t bus_bits, double clock_hz, int weight_bits) {
        const auto r = roofline_fc(pes, bus_bits, clock_hz, weight_bits);
        py::dict d;
        d["compute_roof"] = r.compute_roof;
        d["bandwidth_roof"] = r.bandwidth_roof;
        d["attainable"] = r.attainable;
        return d;
      },
      py::arg("pes"), py::arg("bus_bits") = 128, py::arg("clock_hz") = 200e6,
      py::arg("weight_bits") = 16);

  m.def(
      "run_manifest",
      [](const std::filesystem::path& manifest, bool verify) {
        const RunManifest mf = read_manifest(manifest);
        SimConfig cfg;
        cfg.apply_overrides(mf.config);
        cfg.validate();
        const Network net = read_model_spec(mf.model);
        const SwscContainer w = read_swsc(mf.weights);
        const Tensor x = read_tensor(mf.input);
        const NetworkRun run = run_network(net, w, x, cfg);
        std::optional<bool> verified;
        if (verify) verified = reference_network(net, decode_network(w), x, cfg.A) == run.output;
        return py::make_tuple(to_array(run.output),
                              report_json(net.name, run.report, cfg, verified));
      },
      py::arg("manifest"), py::arg("verify") = false);
  m.def(
      "gen_fixture",
      [](const std::filesystem::path& model, const std::filesystem::path& out, double density,
         double act_sparsity, uint64_t seed, const std::vector<std::string>& config) {
        SimConfig cfg;
        cfg.apply_overrides(config);
        cfg.validate();
        const Network net = read_model_spec(model);
        const FixtureOptions opt{density, act_sparsity, seed};
        write_fixture(out, net, make_fixture(net, cfg, opt), opt, config);
      },
      py::arg("model"), py::arg("out"), py::arg("density") = 0.0, py::arg("act_sparsity") = 0.0,
      py::arg("seed") = 0, py::arg("config") = std::vector<std::string>{});
}
