#pragma once

// Brute-force reference counts for small layers. Everything here is built
// from intervals and explicit window positions; nothing is shared with the
// library's grid or residency code.

#include <cstdint>
#include <string>
#include <vector>

#include "reusemap/net_model.hpp"
#include "reusemap/tiling.hpp"

namespace oracle {

struct Interval {
  std::int64_t lo = 0, hi = 0;  // [lo, hi)
  std::int64_t len() const { return hi - lo; }
};

// Spatial tiles of `base` elements sharing max(filter - stride, 0) elements
// with the neighbour; a trailing piece that holds no window joins the
// previous tile.
std::vector<Interval> spatial_tiles(std::int64_t full, std::int64_t base, std::int64_t filter,
                                    std::int64_t stride);
std::vector<Interval> depth_tiles(std::int64_t full, std::int64_t base);

// Output windows owned by each tile; empty if some tile starts off the
// stride lattice or an output window lies in no tile.
std::vector<std::int64_t> outputs_per_tile(const std::vector<Interval>& tiles, std::int64_t full,
                                           std::int64_t filter, std::int64_t stride);

struct Words {
  std::int64_t rd_ifm = 0, rd_wgh = 0, rd_ofm = 0, wr_ofm = 0;
  std::int64_t total() const { return rd_ifm + rd_wgh + rd_ofm + wr_ofm; }
  bool operator==(const Words&) const = default;
};

struct Candidate {
  reusemap::TilingFactors factors;
  std::string nest;
};

// Words moved with Dp = 1 when walking `nest` (letters h, w, j, i). With
// `halo_reuse` an ifmap tile whose predecessor is its immediate neighbour
// along one spatial axis only loads the part outside the predecessor.
// Returns false if the tiling is not valid.
bool count_words(const reusemap::LayerShape& layer, const reusemap::TilingFactors& f,
                 const std::string& nest, bool halo_reuse, Words& out);

bool fits(const reusemap::LayerShape& layer, const reusemap::TilingFactors& f,
          const reusemap::BufferSizes& buffers);

struct Minimum {
  std::int64_t total = -1;  // -1 if nothing fits
  std::int64_t evaluated = 0;
  Candidate best;
};

// Every (Th, Tw, Ti, Tj, nest) that fits.
Minimum brute_force_min(const reusemap::LayerShape& layer, const reusemap::BufferSizes& buffers,
                        bool halo_reuse);

std::vector<std::string> all_nests();

}  // namespace oracle
