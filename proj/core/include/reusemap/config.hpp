#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reusemap/dram_map.hpp"
#include "reusemap/dram_sim.hpp"
#include "reusemap/dse.hpp"
#include "reusemap/energy_model.hpp"
#include "reusemap/net_model.hpp"
#include "reusemap/sram_map.hpp"
#include "reusemap/tiling.hpp"

namespace reusemap {

struct HardwareConfig {
  BufferSizes buffers;
  std::int64_t sram_banks = 8;
  std::int64_t sram_word_bytes = 2;
  DramGeometry dram;
  DramTiming timing;
  EnergyParams energy = default_params();

  SramGeometry sram_geometry(DataType type) const;
};

// All parsers throw ConfigError with the offending file or field named.
NetworkModel parse_network(const std::string& json_text);
NetworkModel load_network(const std::string& path);
HardwareConfig parse_hardware(const std::string& json_text);
HardwareConfig load_hardware(const std::string& path);

// Optional "reference" object of a network file: metric -> expected
// reduction in percent, echoed next to measured values in reports.
std::map<std::string, double> load_reference(const std::string& path);

std::string network_to_json(const NetworkModel& net);
std::string hardware_to_json(const HardwareConfig& hw);

struct PlanRecord {
  std::string layer;
  TilingFactors factors;
  Schedule schedule;
  AccessCounts predicted;
};

struct PlansFile {
  std::string network;
  ObjectiveMode mode = ObjectiveMode::kReuseAware;
  std::string config_hash;
  std::vector<PlanRecord> layers;
};

std::string plans_to_json(const PlansFile& plans);
PlansFile parse_plans(const std::string& json_text);
PlansFile load_plans(const std::string& path);

// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

std::string read_text_file(const std::string& path);  // throws ConfigError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace reusemap
