#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "reusemap/net_model.hpp"
#include "reusemap/tiling.hpp"

namespace reusemap {

// Loop nest over tile indices, outermost first.
struct Schedule {
  std::array<Loop, kNumLoops> nest{Loop::kH, Loop::kW, Loop::kJ, Loop::kI};
  // Reuse priority order the nest was derived from, or "exhaustive".
  std::string origin;

  int position(Loop loop) const;
  bool operator==(const Schedule& o) const { return nest == o.nest; }
};

std::string nest_string(const Schedule& s);      // e.g. "hwji"
Schedule parse_nest(const std::string& letters);  // throws InvalidArgument

// reuse-aware: overlapping ifmap halos stay on chip between neighbouring
// tiles. baseline: every ifmap tile is fetched whole.
enum class ObjectiveMode { kReuseAware, kBaseline };

const char* to_string(ObjectiveMode mode);
ObjectiveMode parse_objective_mode(const std::string& s);

using LoopTrips = std::array<std::int64_t, kNumLoops>;

LoopTrips trips_of(const TilingPlan& plan);

// Parameters of the DRAM the counts are expressed in.
struct AccessParams {
  std::int64_t chips_per_rank = 1;   // Dp
  std::int64_t columns_per_row = 1024;
  std::int64_t burst_length = 8;
};

struct TileAccess {
  DataType type = DataType::kIfm;
  std::int64_t tile = 0;            // canonical tile id
  std::int64_t full_fetches = 0;    // reads (or writes for ofmaps) of the whole tile
  std::int64_t reduced_fetches = 0; // ifmap reads that skip the resident halo
  std::int64_t psum_reads = 0;
  std::int64_t words = 0;           // all DRAM words moved for this tile
};

struct AccessCounts {
  std::int64_t rd_ifm = 0, rd_wgh = 0, rd_ofm = 0, wr_ofm = 0;
  std::int64_t requests_burst = 0, requests_nonburst = 0;
  std::vector<TileAccess> per_tile;

  std::int64_t reads() const { return rd_ifm + rd_wgh + rd_ofm; }
  std::int64_t total() const { return rd_ifm + rd_wgh + rd_ofm + wr_ofm; }
  std::int64_t requests(bool burst) const { return burst ? requests_burst : requests_nonburst; }
  AccessCounts& operator+=(const AccessCounts& o);
  // Compares the aggregate counters only.
  bool same_totals(const AccessCounts& o) const;
};

// ceil(elements / Dp): words for one tile transfer.
std::int64_t accesses_per_tile(std::int64_t elements, std::int64_t chips_per_rank);

// Loops that index `type` for a layer of `kind`.
bool loop_indexes(DataType type, Loop loop, LayerKind kind);

// How many times each tile of `type` is brought on chip: the product of the
// trips of non-indexing loops placed outside the innermost indexing loop
// that actually iterates (trip > 1). Tiles stay resident while only loops
// inside that one advance.
std::int64_t fetch_multiplicity(DataType type, const Schedule& schedule,
                                const LoopTrips& trips,
                                LayerKind kind = LayerKind::kConv);

struct OfmTraffic {
  std::int64_t rd = 0, wr = 0;
  bool operator==(const OfmTraffic&) const = default;
};

// Output traffic: every residency episode of an output tile ends with a
// write; every episode but the first starts by reading the partial sums.
OfmTraffic ofm_traffic(const Schedule& schedule, const TilingPlan& plan,
                       std::int64_t chips_per_rank);

// Spatial ifmap axis stored outermost inside an ifmap tile block: the one
// iterated innermost by the nest. A halo-reduced fetch along it is then a
// contiguous suffix of the block.
Loop ifm_block_outer_axis(const TilingPlan& plan, const Schedule& schedule);

// Tile ids of `type` in the order the nest first touches them.
std::vector<std::int64_t> first_fetch_order(const TilingPlan& plan,
                                            const Schedule& schedule, DataType type);

std::int64_t tile_count(const TilingPlan& plan, DataType type);

// Word counts only; cheap enough for the search inner loop.
AccessCounts layer_access_words(const TilingPlan& plan, const Schedule& schedule,
                                std::int64_t chips_per_rank, ObjectiveMode mode);

// Full counts including request totals for both access modes and the
// per-tile breakdown. Burst requests assume each data type's tile blocks are
// packed back to back in first-fetch order from a row-aligned region start.
AccessCounts layer_accesses(const TilingPlan& plan, const Schedule& schedule,
                            const AccessParams& params, ObjectiveMode mode);

AccessCounts network_accesses(const std::vector<AccessCounts>& per_layer);

}  // namespace reusemap
