#include "reusemap/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reusemap/errors.hpp"

namespace reusemap {

using nlohmann::json;

namespace {

LayerKind parse_kind(const std::string& s) {
  if (s == "conv") return LayerKind::kConv;
  if (s == "fc") return LayerKind::kFc;
  if (s == "depthwise" || s == "depthwise-conv") return LayerKind::kDepthwise;
  throw ConfigError("unknown layer kind '" + s + "' (expected conv|fc|depthwise)");
}

template <typename T>
void get_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

LayerShape parse_layer(const json& j) {
  LayerShape l;
  l.name = j.at("name").get<std::string>();
  l.kind = parse_kind(j.value("kind", "conv"));
  if (l.kind == LayerKind::kFc) {
    l.I = j.at("I").get<std::int64_t>();
    l.J = j.at("J").get<std::int64_t>();
  } else {
    l.H = j.at("H").get<std::int64_t>();
    l.W = j.value("W", l.H);
    l.I = j.at("I").get<std::int64_t>();
    l.P = j.at("P").get<std::int64_t>();
    l.Q = j.value("Q", l.P);
    l.J = j.value("J", l.I);
    l.str = j.value("str", std::int64_t{1});
  }
  if (j.contains("bits")) l.bit_ifm = l.bit_wgh = l.bit_ofm = j.at("bits").get<int>();
  get_opt(j, "bit_ifm", l.bit_ifm);
  get_opt(j, "bit_wgh", l.bit_wgh);
  get_opt(j, "bit_ofm", l.bit_ofm);
  if (j.contains("M") || j.contains("N")) {
    const auto d = output_dims(l);
    if (j.value("M", d.M) != d.M || j.value("N", d.N) != d.N)
      throw ConfigError("layer '" + l.name + "': explicit M/N disagree with the shape");
  }
  return l;
}

json layer_json(const LayerShape& l) {
  json j{{"name", l.name}, {"kind", to_string(l.kind)}, {"I", l.I}, {"J", l.J}};
  if (l.kind != LayerKind::kFc) {
    j["H"] = l.H;
    j["W"] = l.W;
    j["P"] = l.P;
    j["Q"] = l.Q;
    j["str"] = l.str;
  }
  if (l.bit_ifm == l.bit_wgh && l.bit_wgh == l.bit_ofm) {
    j["bits"] = l.bit_ifm;
  } else {
    j["bit_ifm"] = l.bit_ifm;
    j["bit_wgh"] = l.bit_wgh;
    j["bit_ofm"] = l.bit_ofm;
  }
  return j;
}

json counts_json(const AccessCounts& c) {
  return {{"rd_ifm", c.rd_ifm},         {"rd_wgh", c.rd_wgh},
          {"rd_ofm", c.rd_ofm},         {"wr_ofm", c.wr_ofm},
          {"requests_burst", c.requests_burst}, {"requests_nonburst", c.requests_nonburst}};
}

template <typename F>
auto wrap(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

SramGeometry HardwareConfig::sram_geometry(DataType type) const {
  const std::int64_t cap = type == DataType::kIfm   ? buffers.ifm
                           : type == DataType::kWgh ? buffers.wgh
                                                    : buffers.ofm;
  return SramGeometry::for_capacity(cap, sram_banks, sram_word_bytes);
}

NetworkModel parse_network(const std::string& text) {
  return wrap("network", [&] {
    const json j = json::parse(text);
    NetworkModel net;
    net.name = j.value("name", "network");
    for (const auto& lj : j.at("layers")) net.layers.push_back(parse_layer(lj));
    net.validate();
    return net;
  });
}

NetworkModel load_network(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_network(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

HardwareConfig parse_hardware(const std::string& text) {
  return wrap("hardware", [&] {
    const json j = json::parse(text);
    HardwareConfig hw;
    if (j.contains("buffers")) {
      const auto& b = j.at("buffers");
      get_opt(b, "ifm_bytes", hw.buffers.ifm);
      get_opt(b, "wgh_bytes", hw.buffers.wgh);
      get_opt(b, "ofm_bytes", hw.buffers.ofm);
    }
    if (j.contains("sram")) {
      get_opt(j.at("sram"), "banks", hw.sram_banks);
      get_opt(j.at("sram"), "word_bytes", hw.sram_word_bytes);
    }
    if (j.contains("dram")) {
      const auto& d = j.at("dram");
      auto& g = hw.dram;
      get_opt(d, "channels", g.channels);
      get_opt(d, "ranks_per_channel", g.ranks_per_channel);
      get_opt(d, "chips_per_rank", g.chips_per_rank);
      get_opt(d, "banks_per_chip", g.banks_per_chip);
      get_opt(d, "rows_per_bank", g.rows_per_bank);
      get_opt(d, "columns_per_row", g.columns_per_row);
      get_opt(d, "word_bits", g.word_bits);
      get_opt(d, "burst_length", g.burst_length);
    }
    if (j.contains("timing")) {
      const auto& t = j.at("timing");
      get_opt(t, "tRCD", hw.timing.tRCD);
      get_opt(t, "tRP", hw.timing.tRP);
      get_opt(t, "CL", hw.timing.CL);
      get_opt(t, "tBL", hw.timing.tBL);
      get_opt(t, "clock_mhz", hw.timing.clock_mhz);
      get_opt(t, "queue_depth", hw.timing.queue_depth);
    }
    if (j.contains("energy")) {
      const auto& e = j.at("energy");
      get_opt(e, "e_act_pj", hw.energy.e_act);
      get_opt(e, "e_pre_pj", hw.energy.e_pre);
      get_opt(e, "e_rd_pj_per_word", hw.energy.e_rd);
      get_opt(e, "e_wr_pj_per_word", hw.energy.e_wr);
      get_opt(e, "p_stby_pj_per_cycle", hw.energy.p_stby);
    }
    hw.dram.validate();
    hw.timing.validate();
    hw.energy.validate();
    if (hw.buffers.ifm <= 0 || hw.buffers.wgh <= 0 || hw.buffers.ofm <= 0)
      throw ConfigError("buffer sizes must be positive");
    for (DataType t : {DataType::kIfm, DataType::kWgh, DataType::kOfm}) hw.sram_geometry(t);
    return hw;
  });
}

HardwareConfig load_hardware(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_hardware(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::map<std::string, double> load_reference(const std::string& path) {
  const std::string text = read_text_file(path);
  return wrap(path, [&] {
    std::map<std::string, double> out;
    const json j = json::parse(text);
    if (j.contains("reference"))
      for (const auto& [k, v] : j.at("reference").items()) out[k] = v.get<double>();
    return out;
  });
}

std::string network_to_json(const NetworkModel& net) {
  json j{{"name", net.name}, {"layers", json::array()}};
  for (const auto& l : net.layers) j["layers"].push_back(layer_json(l));
  return j.dump(2);
}

std::string hardware_to_json(const HardwareConfig& hw) {
  const auto& g = hw.dram;
  const auto& t = hw.timing;
  const auto& e = hw.energy;
  json j{
      {"buffers",
       {{"ifm_bytes", hw.buffers.ifm}, {"wgh_bytes", hw.buffers.wgh}, {"ofm_bytes", hw.buffers.ofm}}},
      {"sram", {{"banks", hw.sram_banks}, {"word_bytes", hw.sram_word_bytes}}},
      {"dram",
       {{"channels", g.channels},
        {"ranks_per_channel", g.ranks_per_channel},
        {"chips_per_rank", g.chips_per_rank},
        {"banks_per_chip", g.banks_per_chip},
        {"rows_per_bank", g.rows_per_bank},
        {"columns_per_row", g.columns_per_row},
        {"word_bits", g.word_bits},
        {"burst_length", g.burst_length}}},
      {"timing",
       {{"tRCD", t.tRCD},
        {"tRP", t.tRP},
        {"CL", t.CL},
        {"tBL", t.tBL},
        {"clock_mhz", t.clock_mhz},
        {"queue_depth", t.queue_depth}}},
      {"energy",
       {{"e_act_pj", e.e_act},
        {"e_pre_pj", e.e_pre},
        {"e_rd_pj_per_word", e.e_rd},
        {"e_wr_pj_per_word", e.e_wr},
        {"p_stby_pj_per_cycle", e.p_stby}}}};
  return j.dump(2);
}

std::string plans_to_json(const PlansFile& p) {
  json j{{"network", p.network},
         {"mode", to_string(p.mode)},
         {"config_hash", p.config_hash},
         {"layers", json::array()}};
  for (const auto& r : p.layers) {
    j["layers"].push_back({{"layer", r.layer},
                           {"Th", r.factors.Th},
                           {"Tw", r.factors.Tw},
                           {"Ti", r.factors.Ti},
                           {"Tj", r.factors.Tj},
                           {"nest", nest_string(r.schedule)},
                           {"origin", r.schedule.origin},
                           {"predicted", counts_json(r.predicted)}});
  }
  return j.dump(2);
}

PlansFile parse_plans(const std::string& text) {
  return wrap("plans", [&] {
    const json j = json::parse(text);
    PlansFile p;
    p.network = j.at("network").get<std::string>();
    p.mode = parse_objective_mode(j.at("mode").get<std::string>());
    p.config_hash = j.value("config_hash", "");
    for (const auto& lj : j.at("layers")) {
      PlanRecord r;
      r.layer = lj.at("layer").get<std::string>();
      r.factors = {lj.at("Th").get<std::int64_t>(), lj.at("Tw").get<std::int64_t>(),
                   lj.at("Ti").get<std::int64_t>(), lj.at("Tj").get<std::int64_t>()};
      r.schedule = parse_nest(lj.at("nest").get<std::string>());
      r.schedule.origin = lj.value("origin", r.schedule.origin);
      if (lj.contains("predicted")) {
        const auto& c = lj.at("predicted");
        r.predicted.rd_ifm = c.value("rd_ifm", std::int64_t{0});
        r.predicted.rd_wgh = c.value("rd_wgh", std::int64_t{0});
        r.predicted.rd_ofm = c.value("rd_ofm", std::int64_t{0});
        r.predicted.wr_ofm = c.value("wr_ofm", std::int64_t{0});
        r.predicted.requests_burst = c.value("requests_burst", std::int64_t{0});
        r.predicted.requests_nonburst = c.value("requests_nonburst", std::int64_t{0});
      }
      p.layers.push_back(std::move(r));
    }
    return p;
  });
}

PlansFile load_plans(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_plans(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace reusemap
