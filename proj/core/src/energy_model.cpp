#include "reusemap/energy_model.hpp"

#include <ostream>

#include "reusemap/errors.hpp"

namespace reusemap {

void EnergyParams::validate() const {
  if (e_act < 0 || e_pre < 0 || e_rd < 0 || e_wr < 0 || p_stby < 0)
    throw InvalidArgument("energy parameters must be non-negative");
}

EnergyParams params_from_idd(const IddParams& d) {
  // mA * V * ns = pJ
  const double tck = d.tck_ns;
  const double tras = d.tras_cycles * tck;
  const double trp = d.trp_cycles * tck;
  const double trc = tras + trp;
  // Row cycle energy above background, split between the ACT and PRE phases.
  const double e_row = (d.idd0 * trc - (d.idd3n * tras + d.idd2n * trp)) * d.vdd;
  EnergyParams p;
  p.e_act = e_row * tras / trc;
  p.e_pre = e_row * trp / trc;
  const double burst = d.burst_cycles * tck;
  p.e_rd = (d.idd4r - d.idd3n) * d.vdd * burst / d.words_per_burst;
  p.e_wr = (d.idd4w - d.idd3n) * d.vdd * burst / d.words_per_burst;
  p.p_stby = d.idd3n * d.vdd * tck;
  return p;
}

EnergyParams default_params() { return params_from_idd(IddParams{}); }

EnergyReport& EnergyReport::operator+=(const EnergyReport& o) {
  act += o.act;
  pre += o.pre;
  rd += o.rd;
  wr += o.wr;
  stby += o.stby;
  total += o.total;
  return *this;
}

EnergyReport energy(const SimStats& s, const EnergyParams& p) {
  EnergyReport r;
  r.act = static_cast<double>(s.n_act) * p.e_act;
  r.pre = static_cast<double>(s.n_pre) * p.e_pre;
  r.rd = static_cast<double>(s.rd_words) * p.e_rd;
  r.wr = static_cast<double>(s.wr_words) * p.e_wr;
  r.stby = static_cast<double>(s.total_cycles) * p.p_stby;
  r.total = r.act + r.pre + r.rd + r.wr + r.stby;
  return r;
}

double access_energy(RowOutcome o, std::int64_t words, const DramTiming& timing,
                     const EnergyParams& params, bool burst) {
  SimStats s;
  s.n_rd = 1;
  s.rd_words = words;
  s.n_act = o == RowOutcome::kHit ? 0 : 1;
  s.n_pre = o == RowOutcome::kConflict ? 1 : 0;
  s.total_cycles = access_latency(o, timing, burst);
  return energy(s, params).total;
}

void write_energy_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, EnergyReport>>& rows) {
  os << "label,act_pj,pre_pj,rd_pj,wr_pj,stby_pj,total_pj\n";
  for (const auto& [label, e] : rows)
    os << label << ',' << e.act << ',' << e.pre << ',' << e.rd << ',' << e.wr << ','
       << e.stby << ',' << e.total << '\n';
}

}  // namespace reusemap
