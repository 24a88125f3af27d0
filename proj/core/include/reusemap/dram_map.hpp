#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "reusemap/access_model.hpp"
#include "reusemap/net_model.hpp"
#include "reusemap/tiling.hpp"

namespace reusemap {

struct DramGeometry {
  std::int64_t channels = 1;
  std::int64_t ranks_per_channel = 1;
  std::int64_t chips_per_rank = 1;
  std::int64_t banks_per_chip = 8;
  std::int64_t rows_per_bank = 32768;
  std::int64_t columns_per_row = 1024;
  std::int64_t word_bits = 8;
  std::int64_t burst_length = 8;

  void validate() const;
  // Rank-wide column slots: one word per chip in lock-step.
  std::int64_t column_slots() const {
    return channels * ranks_per_channel * banks_per_chip * rows_per_bank * columns_per_row;
  }
  std::int64_t capacity_bits() const {
    return column_slots() * chips_per_rank * word_bits;
  }
  AccessParams access_params() const {
    return {chips_per_rank, columns_per_row, burst_length};
  }
  bool operator==(const DramGeometry&) const = default;
};

struct PhysicalAddress {
  std::int64_t channel = 0, rank = 0, chip = 0, bank = 0, row = 0, column = 0;
  bool operator==(const PhysicalAddress&) const = default;
  auto operator<=>(const PhysicalAddress&) const = default;
};

// kMultiBank fills a row, then the same row of the next bank, then the next
// row; kContinuousBank fills a whole bank before moving to the next one.
enum class MappingPolicy { kMultiBank, kContinuousBank };

const char* to_string(MappingPolicy p);
MappingPolicy parse_mapping_policy(const std::string& s);
// Reuse-aware runs use the multi-bank layout, baseline runs the continuous one.
MappingPolicy policy_for(ObjectiveMode mode);

// Rank-wide column slot -> coordinates. The chip field is 0: the slot spans
// all chips of the rank. Throws AddressOutOfRange.
PhysicalAddress slot_address(std::int64_t slot, MappingPolicy policy, const DramGeometry& geom);
std::int64_t slot_index(const PhysicalAddress& a, MappingPolicy policy, const DramGeometry& geom);

bool in_bounds(const PhysicalAddress& a, const DramGeometry& geom);

struct RegionKey {
  std::int64_t layer = 0;
  DataType type = DataType::kIfm;
  auto operator<=>(const RegionKey&) const = default;
};

// Half-open range of column slots, row aligned at the start.
struct Region {
  std::int64_t begin = 0, end = 0;
  std::int64_t cursor = 0;
};

// Slot ranges per (layer, data type) plus a bump cursor in each.
class RegionAllocator {
 public:
  RegionAllocator(DramGeometry geom, MappingPolicy policy);

  const DramGeometry& geometry() const { return geom_; }
  MappingPolicy policy() const { return policy_; }

  // Reserves `slots` slots at row-aligned `begin`. Throws InvalidArgument if
  // `begin` is misaligned, CapacityExceeded if the range leaves the device.
  void add_region(RegionKey key, std::int64_t begin, std::int64_t slots);
  const Region& region(RegionKey key) const;
  bool has_region(RegionKey key) const { return regions_.count(key) != 0; }
  const std::map<RegionKey, Region>& regions() const { return regions_; }

  // Advances the cursor by `slots`; returns the first one. Throws RegionOverflow.
  std::int64_t take(RegionKey key, std::int64_t slots);
  void rewind();

 private:
  DramGeometry geom_;
  MappingPolicy policy_;
  std::map<RegionKey, Region> regions_;
};

// Element-level mapping of one tile of `n_elems` elements taken from the
// region cursor: element k goes to chip k mod Dp of slot k div Dp.
std::vector<PhysicalAddress> map_tile(std::int64_t n_elems, RegionAllocator& alloc, RegionKey key);
std::vector<PhysicalAddress> map_tile_reuse_aware(std::int64_t n_elems, RegionAllocator& alloc,
                                                  RegionKey key);
std::vector<PhysicalAddress> map_tile_baseline(std::int64_t n_elems, RegionAllocator& alloc,
                                               RegionKey key);

// Slots occupied by the blocks of every tile of `type`.
std::int64_t region_slots(const TilingPlan& plan, DataType type, std::int64_t chips_per_rank);

struct AllocationOptions {
  // Layers run one after another, so by default each layer's regions start
  // at slot 0 and overwrite the previous layer's. Disjoint keeps every layer
  // resident at once.
  bool disjoint_layers = false;
};

// Regions for every layer in ifm, wgh, ofm order. Throws CapacityExceeded.
RegionAllocator allocate_regions(const std::vector<TilingPlan>& plans, const DramGeometry& geom,
                                 MappingPolicy policy, const AllocationOptions& opts = {});

// CSV: word_index,channel,rank,chip,bank,row,column
void write_address_csv(std::ostream& os, const std::vector<PhysicalAddress>& addrs);

}  // namespace reusemap
