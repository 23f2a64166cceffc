#include "json.hpp"
#include "swsim/io.hpp"

namespace swsim {

using nlohmann::json;

std::string report_json(const std::string& model_name, const PerfReport& report,
                        const SimConfig& cfg, std::optional<bool> verified) {
  json layers = json::array();
  for (const auto& l : report.per_layer) {
    json e{{"name", l.name}, {"kind", to_string(l.kind)}, {"modeled", l.modeled}};
    if (l.modeled) {
      e["cycles"] = l.cycles;
      e["compute_cycles"] = l.compute_cycles;
      e["stall_cycles"] = l.stall_cycles;
      e["macs"] = l.macs;
      e["dmi"] = l.dmi;
      e["dai"] = l.dai;
      e["effective_gops"] = l.effective_gops;
      e["dense_equiv_gops"] = l.dense_equiv_gops;
      e["attainable_gops_roofline"] = l.attainable_gops_roofline;
      e["bytes_moved"] = l.bytes_moved;
    } else {
      e["note"] = "executed on the reference path; cycles excluded";
    }
    layers.push_back(e);
  }
  const auto& a = report.aggregate;
  json cfg_j{{"N", cfg.N},
             {"M", cfg.M},
             {"clock_hz", cfg.clock_hz},
             {"A", cfg.A},
             {"B", cfg.B},
             {"slice_bram", cfg.slice_bram()},
             {"bus_bits", cfg.bus_bits},
             {"mode", to_string(cfg.mode)},
             {"pipeline_fill", cfg.pipeline_fill}};
  json j{{"model", model_name},
         {"config", cfg_j},
         {"per_layer", layers},
         {"aggregate",
          {{"images_per_s", a.images_per_s},
           {"total_cycles", a.total_cycles},
           {"peak_gops", a.peak_gops},
           {"peak_ops_per_s", a.peak_gops * 1e9},
           {"dsp_estimate", a.dsp_estimate},
           {"dsp_exceeds_device", a.dsp_exceeds_device},
           {"bram_estimate", a.bram_estimate}}}};
  if (verified) j["verified"] = *verified;
  return j.dump(2) + "\n";
}

}  // namespace swsim
