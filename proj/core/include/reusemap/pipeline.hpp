#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reusemap/config.hpp"
#include "reusemap/dse.hpp"
#include "reusemap/dram_sim.hpp"
#include "reusemap/energy_model.hpp"

namespace reusemap {

struct SearchSteps {
  std::int64_t Th = 0, Tw = 0, Tj = 0;  // 0 = default
};

// Search configuration for one mode on the given hardware.
SearchConfig search_config(const HardwareConfig& hw, ObjectiveMode mode, const SearchSteps& steps);

std::string config_hash(const NetworkModel& net, const HardwareConfig& hw, ObjectiveMode mode,
                        bool burst, const SearchSteps& steps);

std::vector<LayerPlanResult> run_dse(const NetworkModel& net, const HardwareConfig& hw,
                                     ObjectiveMode mode, const SearchSteps& steps);

PlansFile make_plans_file(const NetworkModel& net, const std::vector<LayerPlanResult>& results,
                          ObjectiveMode mode, const std::string& hash);

// Rebuilds plans from a plans file and recounts them. Throws ConfigError if
// the file does not match the network or a tile does not fit.
std::vector<LayerPlanResult> plans_from_file(const NetworkModel& net, const PlansFile& file,
                                             const HardwareConfig& hw);

struct LayerRun {
  std::string name;
  LayerPlanResult plan;
  AccessCounts traced;
  SimStats stats;
  EnergyReport energy;
};

struct NetworkRun {
  std::string network;
  ObjectiveMode mode = ObjectiveMode::kReuseAware;
  bool burst = true;
  std::string config_hash;
  std::vector<LayerRun> layers;
  AccessCounts accesses;  // traced totals
  SimStats stats;
  EnergyReport energy;
};

// Maps, traces and simulates each layer with its own controller state.
NetworkRun simulate_network(const NetworkModel& net, const std::vector<LayerPlanResult>& plans,
                            const HardwareConfig& hw, ObjectiveMode mode, bool burst);

NetworkRun run_mode(const NetworkModel& net, const HardwareConfig& hw, ObjectiveMode mode,
                    bool burst, const SearchSteps& steps);

struct Reduction {
  std::string metric;
  double reuse_aware = 0, baseline = 0;
  // 100 * (baseline - reuse_aware) / baseline; for "throughput_gain" the
  // sign is flipped so that a positive value always favours reuse-aware.
  double pct = 0;
};

struct CompareReport {
  NetworkRun reuse_aware, baseline;
  std::vector<Reduction> reductions;
  const Reduction& reduction(const std::string& metric) const;
};

double reduction_pct(double reuse_aware, double baseline);

CompareReport compare_runs(NetworkRun reuse_aware, NetworkRun baseline);
CompareReport run_compare(const NetworkModel& net, const HardwareConfig& hw, bool burst,
                          const SearchSteps& steps);

// Per-layer rows plus a total row for each run.
void write_layer_csv(std::ostream& os, const std::vector<const NetworkRun*>& runs);
void write_reduction_csv(std::ostream& os, const CompareReport& report,
                         const std::map<std::string, double>& reference = {});

enum class SweepAxis { kBuffer, kStep, kBurstLength };
SweepAxis parse_sweep_axis(const std::string& s);

// Repeats the comparison for each value of one axis: buffer size in KB
// (all three buffers), a uniform search step, or the burst length.
void run_sweep(std::ostream& csv, const NetworkModel& net, const HardwareConfig& hw,
               SweepAxis axis, const std::vector<std::int64_t>& values, bool burst,
               const SearchSteps& steps);

}  // namespace reusemap
