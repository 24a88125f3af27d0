#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reusemap/dram_sim.hpp"

namespace reusemap {

// Energies in pJ. Read/write energies are per transferred word.
struct EnergyParams {
  double e_act = 0, e_pre = 0, e_rd = 0, e_wr = 0;
  double p_stby = 0;  // pJ per bus cycle

  void validate() const;
  bool operator==(const EnergyParams&) const = default;
};

// Datasheet currents (mA), supply (V) and timing used to derive defaults.
struct IddParams {
  double vdd = 1.5;
  double idd0 = 67, idd2n = 37, idd3n = 45, idd4r = 160, idd4w = 165;
  double tck_ns = 1.25;
  double tras_cycles = 28, trp_cycles = 11;
  double burst_cycles = 4;  // data cycles of one burst
  double words_per_burst = 8;
};

EnergyParams params_from_idd(const IddParams& idd);

// DDR3-1600 2Gb x8 defaults.
EnergyParams default_params();

struct EnergyReport {
  double act = 0, pre = 0, rd = 0, wr = 0, stby = 0;
  double total = 0;
  std::vector<std::pair<std::string, EnergyReport>> by_layer;

  EnergyReport& operator+=(const EnergyReport& o);  // components only
};

EnergyReport energy(const SimStats& stats, const EnergyParams& params);

// Energy of a single request of `words` words with the given outcome,
// including standby over its unloaded latency.
double access_energy(RowOutcome o, std::int64_t words, const DramTiming& timing,
                     const EnergyParams& params, bool burst = true);

// CSV: label,act_pj,pre_pj,rd_pj,wr_pj,stby_pj,total_pj
void write_energy_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, EnergyReport>>& rows);

}  // namespace reusemap
