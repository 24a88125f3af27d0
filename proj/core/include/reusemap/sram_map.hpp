#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "reusemap/tiling.hpp"

namespace reusemap {

struct SramGeometry {
  std::int64_t banks = 8;
  std::int64_t rows_per_bank = 4096;
  std::int64_t word_bytes = 2;
  std::int64_t capacity_bytes = 64 * 1024;

  void validate() const;  // banks * rows * word_bytes == capacity
  static SramGeometry for_capacity(std::int64_t capacity_bytes, std::int64_t banks,
                                   std::int64_t word_bytes);
  bool operator==(const SramGeometry&) const = default;
};

struct SramSlot {
  std::int64_t bank = 0, row = 0;
  bool operator==(const SramSlot&) const = default;
  auto operator<=>(const SramSlot&) const = default;
};

struct SramPlacement {
  std::vector<SramSlot> assignments;     // by word index
  std::vector<std::int64_t> filter_to_bank;  // weights only

  // Fraction of bank rows holding no word of the tile; those rows could be
  // power gated.
  double unused_row_fraction(const SramGeometry& geom) const;
};

// Word k -> bank k mod banks, row k div banks. Throws BufferOverflow.
SramPlacement place_tile(std::int64_t n_words, const SramGeometry& geom);

// Filter j -> bank j mod banks.
std::vector<std::int64_t> assign_filters(std::int64_t Tj, std::int64_t banks);

// Placement of the largest tile of each data type of a plan.
struct PlanPlacement {
  SramPlacement ifm, wgh, ofm;
};

PlanPlacement place_plan(const TilingPlan& plan, const SramGeometry& ifm_geom,
                         const SramGeometry& wgh_geom, const SramGeometry& ofm_geom);

// CSV: word_index,bank,row
void write_placement_csv(std::ostream& os, const SramPlacement& p);

}  // namespace reusemap
