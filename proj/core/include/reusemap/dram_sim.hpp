#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reusemap/dram_map.hpp"
#include "reusemap/trace_gen.hpp"

namespace reusemap {

struct DramTiming {
  std::int64_t tRCD = 11, tRP = 11, CL = 11;
  std::int64_t tBL = 4;  // data cycles of a full burst
  double clock_mhz = 800.0;
  // Requests the controller looks ahead when issuing ACT/PRE early. An ACT
  // for request r cannot start before request r - queue_depth issued its
  // column command.
  std::int64_t queue_depth = 32;

  void validate() const;
  bool operator==(const DramTiming&) const = default;
};

enum class RowOutcome { kHit, kMiss, kConflict };

const char* to_string(RowOutcome o);

struct BankState {
  std::optional<std::int64_t> open_row;
};

// Outcome of accessing `row` and the open-row update.
RowOutcome classify(std::int64_t row, BankState& bank);

// Unloaded latency of one request, command to last data beat.
std::int64_t access_latency(RowOutcome o, const DramTiming& t, bool burst = true);

struct SimStats {
  std::int64_t n_hit = 0, n_miss = 0, n_conflict = 0;
  std::int64_t n_act = 0, n_pre = 0, n_rd = 0, n_wr = 0;
  std::int64_t rd_words = 0, wr_words = 0;
  std::int64_t total_cycles = 0;
  std::int64_t bytes_moved = 0;
  double clock_mhz = 800.0;

  std::int64_t requests() const { return n_rd + n_wr; }
  // Concatenation: counters and cycles add up.
  SimStats& operator+=(const SimStats& o);
  bool operator==(const SimStats&) const = default;
};

double effective_throughput(const SimStats& s);  // bytes per second

// In-order open-row controller fed one request at a time.
class Simulator final : public TraceSink {
 public:
  Simulator(const DramGeometry& geom, const DramTiming& timing, bool burst);

  void consume(const DramRequest& r) override;
  // Opens a row without a request (test fixtures).
  void preopen(std::int64_t channel, std::int64_t rank, std::int64_t bank, std::int64_t row);
  SimStats stats() const;

 private:
  struct Bank {
    BankState state;
    std::int64_t ready = 0;     // row open and usable from this cycle
    std::int64_t last_end = 0;  // last data beat of this bank
  };
  struct Channel {
    std::int64_t prev_col = 0;
    std::int64_t bus_free = 0;
    bool started = false;
  };

  DramGeometry geom_;
  DramTiming timing_;
  bool burst_;
  std::vector<Bank> banks_;
  std::vector<Channel> channels_;
  std::vector<std::int64_t> col_history_;  // ring of column issue cycles
  std::int64_t served_ = 0;
  SimStats stats_;
};

SimStats simulate(const RequestTrace& trace, const DramGeometry& geom, const DramTiming& timing);

// CSV with a header; one row per entry, labelled.
void write_stats_csv(std::ostream& os, const std::vector<std::pair<std::string, SimStats>>& rows);

}  // namespace reusemap
