#include "reusemap/dram_map.hpp"

#include <ostream>

#include "reusemap/errors.hpp"

namespace reusemap {

void DramGeometry::validate() const {
  if (channels < 1 || ranks_per_channel < 1 || chips_per_rank < 1 || banks_per_chip < 1 ||
      rows_per_bank < 1 || columns_per_row < 1 || word_bits < 1)
    throw InvalidArgument("DRAM geometry counts must be >= 1");
  if (burst_length != 1 && burst_length != 4 && burst_length != 8)
    throw InvalidArgument("burst length must be 1, 4 or 8");
}

const char* to_string(MappingPolicy p) {
  return p == MappingPolicy::kMultiBank ? "multi-bank" : "continuous-bank";
}

MappingPolicy parse_mapping_policy(const std::string& s) {
  if (s == "multi-bank") return MappingPolicy::kMultiBank;
  if (s == "continuous-bank") return MappingPolicy::kContinuousBank;
  throw InvalidArgument("unknown mapping policy '" + s + "'");
}

MappingPolicy policy_for(ObjectiveMode mode) {
  return mode == ObjectiveMode::kReuseAware ? MappingPolicy::kMultiBank
                                            : MappingPolicy::kContinuousBank;
}

PhysicalAddress slot_address(std::int64_t slot, MappingPolicy policy, const DramGeometry& g) {
  if (slot < 0 || slot >= g.column_slots())
    throw AddressOutOfRange("column slot " + std::to_string(slot) + " outside the device");
  PhysicalAddress a;
  a.column = slot % g.columns_per_row;
  slot /= g.columns_per_row;
  if (policy == MappingPolicy::kMultiBank) {
    a.bank = slot % g.banks_per_chip;
    slot /= g.banks_per_chip;
    a.row = slot % g.rows_per_bank;
    slot /= g.rows_per_bank;
  } else {
    a.row = slot % g.rows_per_bank;
    slot /= g.rows_per_bank;
    a.bank = slot % g.banks_per_chip;
    slot /= g.banks_per_chip;
  }
  a.rank = slot % g.ranks_per_channel;
  a.channel = slot / g.ranks_per_channel;
  return a;
}

std::int64_t slot_index(const PhysicalAddress& a, MappingPolicy policy, const DramGeometry& g) {
  if (!in_bounds(a, g)) throw AddressOutOfRange("address outside the device");
  std::int64_t s = a.channel * g.ranks_per_channel + a.rank;
  if (policy == MappingPolicy::kMultiBank) {
    s = (s * g.rows_per_bank + a.row) * g.banks_per_chip + a.bank;
  } else {
    s = (s * g.banks_per_chip + a.bank) * g.rows_per_bank + a.row;
  }
  return s * g.columns_per_row + a.column;
}

bool in_bounds(const PhysicalAddress& a, const DramGeometry& g) {
  return a.channel >= 0 && a.channel < g.channels && a.rank >= 0 &&
         a.rank < g.ranks_per_channel && a.chip >= 0 && a.chip < g.chips_per_rank &&
         a.bank >= 0 && a.bank < g.banks_per_chip && a.row >= 0 && a.row < g.rows_per_bank &&
         a.column >= 0 && a.column < g.columns_per_row;
}

RegionAllocator::RegionAllocator(DramGeometry geom, MappingPolicy policy)
    : geom_(geom), policy_(policy) {
  geom_.validate();
}

void RegionAllocator::add_region(RegionKey key, std::int64_t begin, std::int64_t slots) {
  if (begin % geom_.columns_per_row != 0)
    throw InvalidArgument("region start must be row aligned");
  if (begin + slots > geom_.column_slots())
    throw CapacityExceeded("layer " + std::to_string(key.layer) + " " + to_string(key.type) +
                           " region needs slots up to " + std::to_string(begin + slots) +
                           " but the device has " + std::to_string(geom_.column_slots()));
  regions_[key] = Region{begin, begin + slots, begin};
}

const Region& RegionAllocator::region(RegionKey key) const {
  auto it = regions_.find(key);
  if (it == regions_.end())
    throw InvalidArgument("no region for layer " + std::to_string(key.layer) + " " +
                          to_string(key.type));
  return it->second;
}

std::int64_t RegionAllocator::take(RegionKey key, std::int64_t slots) {
  auto it = regions_.find(key);
  if (it == regions_.end())
    throw InvalidArgument("no region for layer " + std::to_string(key.layer) + " " +
                          to_string(key.type));
  Region& r = it->second;
  if (r.cursor + slots > r.end)
    throw RegionOverflow("layer " + std::to_string(key.layer) + " " + to_string(key.type) +
                         " region exhausted");
  const std::int64_t first = r.cursor;
  r.cursor += slots;
  return first;
}

void RegionAllocator::rewind() {
  for (auto& [key, r] : regions_) r.cursor = r.begin;
}

std::vector<PhysicalAddress> map_tile(std::int64_t n_elems, RegionAllocator& alloc,
                                      RegionKey key) {
  const auto& g = alloc.geometry();
  const std::int64_t dp = g.chips_per_rank;
  const std::int64_t first = alloc.take(key, ceil_div(n_elems, dp));
  std::vector<PhysicalAddress> out;
  out.reserve(static_cast<std::size_t>(n_elems));
  for (std::int64_t k = 0; k < n_elems; ++k) {
    PhysicalAddress a = slot_address(first + k / dp, alloc.policy(), g);
    a.chip = k % dp;
    out.push_back(a);
  }
  return out;
}

std::vector<PhysicalAddress> map_tile_reuse_aware(std::int64_t n_elems, RegionAllocator& alloc,
                                                  RegionKey key) {
  if (alloc.policy() != MappingPolicy::kMultiBank)
    throw InvalidArgument("allocator is not using the multi-bank policy");
  return map_tile(n_elems, alloc, key);
}

std::vector<PhysicalAddress> map_tile_baseline(std::int64_t n_elems, RegionAllocator& alloc,
                                               RegionKey key) {
  if (alloc.policy() != MappingPolicy::kContinuousBank)
    throw InvalidArgument("allocator is not using the continuous-bank policy");
  return map_tile(n_elems, alloc, key);
}

std::int64_t region_slots(const TilingPlan& plan, DataType type, std::int64_t dp) {
  // Tile block sizes factor per axis; sum the products over all tiles.
  std::int64_t total = 0;
  std::vector<const AxisGrid*> grids;
  for (Loop l : {Loop::kH, Loop::kW, Loop::kJ, Loop::kI})
    if (const AxisGrid* g = plan.axis(type, l)) grids.push_back(g);
  std::vector<std::size_t> pick(grids.size(), 0);
  while (true) {
    std::int64_t elems = plan.fixed_elems(type);
    for (std::size_t a = 0; a < grids.size(); ++a) elems *= grids[a]->span[pick[a]];
    total += ceil_div(elems, dp);
    std::size_t a = grids.size();
    while (a > 0) {
      if (++pick[a - 1] < grids[a - 1]->count()) break;
      pick[a - 1] = 0;
      --a;
    }
    if (a == 0) break;
  }
  return total;
}

RegionAllocator allocate_regions(const std::vector<TilingPlan>& plans, const DramGeometry& geom,
                                 MappingPolicy policy, const AllocationOptions& opts) {
  RegionAllocator alloc(geom, policy);
  std::int64_t next = 0;
  for (std::size_t l = 0; l < plans.size(); ++l) {
    if (!opts.disjoint_layers) next = 0;
    for (DataType t : {DataType::kIfm, DataType::kWgh, DataType::kOfm}) {
      const std::int64_t slots = region_slots(plans[l], t, geom.chips_per_rank);
      alloc.add_region({static_cast<std::int64_t>(l), t}, next, slots);
      next += ceil_div(slots, geom.columns_per_row) * geom.columns_per_row;
    }
  }
  return alloc;
}

void write_address_csv(std::ostream& os, const std::vector<PhysicalAddress>& addrs) {
  os << "word_index,channel,rank,chip,bank,row,column\n";
  for (std::size_t k = 0; k < addrs.size(); ++k) {
    const auto& a = addrs[k];
    os << k << ',' << a.channel << ',' << a.rank << ',' << a.chip << ',' << a.bank << ','
       << a.row << ',' << a.column << '\n';
  }
}

}  // namespace reusemap
