#include "reusemap/dram_sim.hpp"

#include <algorithm>
#include <ostream>

#include "reusemap/errors.hpp"

namespace reusemap {

void DramTiming::validate() const {
  if (tRCD <= 0 || tRP <= 0 || CL <= 0 || tBL <= 0 || clock_mhz <= 0 || queue_depth < 1)
    throw InvalidArgument("DRAM timing parameters must be positive");
}

const char* to_string(RowOutcome o) {
  switch (o) {
    case RowOutcome::kHit: return "hit";
    case RowOutcome::kMiss: return "miss";
    case RowOutcome::kConflict: return "conflict";
  }
  return "?";
}

RowOutcome classify(std::int64_t row, BankState& bank) {
  RowOutcome o;
  if (!bank.open_row) o = RowOutcome::kMiss;
  else if (*bank.open_row == row) o = RowOutcome::kHit;
  else o = RowOutcome::kConflict;
  bank.open_row = row;
  return o;
}

std::int64_t access_latency(RowOutcome o, const DramTiming& t, bool burst) {
  std::int64_t lat = t.CL + (burst ? t.tBL : 1);
  if (o != RowOutcome::kHit) lat += t.tRCD;
  if (o == RowOutcome::kConflict) lat += t.tRP;
  return lat;
}

SimStats& SimStats::operator+=(const SimStats& o) {
  n_hit += o.n_hit;
  n_miss += o.n_miss;
  n_conflict += o.n_conflict;
  n_act += o.n_act;
  n_pre += o.n_pre;
  n_rd += o.n_rd;
  n_wr += o.n_wr;
  rd_words += o.rd_words;
  wr_words += o.wr_words;
  total_cycles += o.total_cycles;
  bytes_moved += o.bytes_moved;
  clock_mhz = o.clock_mhz;
  return *this;
}

double effective_throughput(const SimStats& s) {
  if (s.total_cycles == 0) return 0.0;
  return static_cast<double>(s.bytes_moved) * s.clock_mhz * 1e6 /
         static_cast<double>(s.total_cycles);
}

Simulator::Simulator(const DramGeometry& geom, const DramTiming& timing, bool burst)
    : geom_(geom), timing_(timing), burst_(burst) {
  geom_.validate();
  timing_.validate();
  banks_.resize(static_cast<std::size_t>(geom.channels * geom.ranks_per_channel *
                                         geom.banks_per_chip));
  channels_.resize(static_cast<std::size_t>(geom.channels));
  col_history_.assign(static_cast<std::size_t>(timing.queue_depth), 0);
  stats_.clock_mhz = timing.clock_mhz;
}

void Simulator::preopen(std::int64_t channel, std::int64_t rank, std::int64_t bank,
                        std::int64_t row) {
  const auto b = (channel * geom_.ranks_per_channel + rank) * geom_.banks_per_chip + bank;
  banks_.at(static_cast<std::size_t>(b)).state.open_row = row;
}

void Simulator::consume(const DramRequest& r) {
  if (!in_bounds(r.addr, geom_))
    throw AddressOutOfRange("request address outside the DRAM geometry");
  const auto& a = r.addr;
  Bank& bank = banks_[static_cast<std::size_t>(
      (a.channel * geom_.ranks_per_channel + a.rank) * geom_.banks_per_chip + a.bank)];
  Channel& ch = channels_[static_cast<std::size_t>(a.channel)];
  const DramTiming& t = timing_;

  const RowOutcome o = classify(a.row, bank.state);
  if (o != RowOutcome::kHit) {
    const std::int64_t window =
        served_ >= t.queue_depth
            ? col_history_[static_cast<std::size_t>(served_ % t.queue_depth)]
            : 0;
    const std::int64_t act = std::max(bank.last_end, window);
    bank.ready = act + t.tRCD + (o == RowOutcome::kConflict ? t.tRP : 0);
  }

  std::int64_t col = bank.ready;
  if (ch.started) col = std::max(col, burst_ ? ch.prev_col + t.tBL : ch.bus_free);
  const std::int64_t xfer = burst_ ? t.tBL : 1;
  const std::int64_t end = std::max(col + t.CL, ch.bus_free) + xfer;

  ch.prev_col = col;
  ch.bus_free = end;
  ch.started = true;
  bank.last_end = end;
  col_history_[static_cast<std::size_t>(served_ % t.queue_depth)] = col;
  ++served_;

  switch (o) {
    case RowOutcome::kHit: ++stats_.n_hit; break;
    case RowOutcome::kMiss: ++stats_.n_miss; ++stats_.n_act; break;
    case RowOutcome::kConflict:
      ++stats_.n_conflict;
      ++stats_.n_act;
      ++stats_.n_pre;
      break;
  }
  if (r.op == Op::kRead) {
    ++stats_.n_rd;
    stats_.rd_words += r.burst;
  } else {
    ++stats_.n_wr;
    stats_.wr_words += r.burst;
  }
  stats_.bytes_moved += r.burst * geom_.chips_per_rank * geom_.word_bits / 8;
}

SimStats Simulator::stats() const {
  SimStats s = stats_;
  s.total_cycles = 0;
  for (const auto& ch : channels_) s.total_cycles = std::max(s.total_cycles, ch.bus_free);
  return s;
}

SimStats simulate(const RequestTrace& trace, const DramGeometry& geom, const DramTiming& timing) {
  Simulator sim(geom, timing, trace.burst);
  for (const auto& r : trace.requests) sim.consume(r);
  return sim.stats();
}

void write_stats_csv(std::ostream& os,
                     const std::vector<std::pair<std::string, SimStats>>& rows) {
  os << "label,n_hit,n_miss,n_conflict,n_act,n_pre,n_rd,n_wr,rd_words,wr_words,total_cycles,"
        "bytes_moved,throughput_bytes_per_s\n";
  for (const auto& [label, s] : rows) {
    os << label << ',' << s.n_hit << ',' << s.n_miss << ',' << s.n_conflict << ',' << s.n_act
       << ',' << s.n_pre << ',' << s.n_rd << ',' << s.n_wr << ',' << s.rd_words << ','
       << s.wr_words << ',' << s.total_cycles << ',' << s.bytes_moved << ','
       << effective_throughput(s) << '\n';
  }
}

}  // namespace reusemap
