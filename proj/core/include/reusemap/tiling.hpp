#pragma once

#include <cstdint>
#include <vector>

#include "reusemap/net_model.hpp"

namespace reusemap {

// Base tiling factors. The weight tile always spans the whole filter
// window (Tp = P, Tq = Q).
struct TilingFactors {
  std::int64_t Th = 1, Tw = 1, Ti = 1, Tj = 1;
  bool operator==(const TilingFactors&) const = default;
};

// Tiles along one axis. Tile k covers [start[k], start[k] + span[k]);
// fresh[k] counts the elements not shared with tile k-1 (the halo band is
// shared). The first tile has fresh == span.
struct AxisGrid {
  std::vector<std::int64_t> start;
  std::vector<std::int64_t> span;
  std::vector<std::int64_t> fresh;
  std::int64_t base = 0;
  std::int64_t halo = 0;

  std::size_t count() const { return span.size(); }
  std::int64_t max_span() const;
  // Tiles strictly between the first and the last one.
  std::int64_t n_intermediate() const;
  // Fresh length of the final tile (the axis remainder after the base and
  // intermediate advances); equals base for a single-tile axis.
  std::int64_t last() const { return fresh.back(); }
  std::int64_t fresh_total() const;
};

// Spatial ifmap axis of length `full`, base tile `base`, adjacent tiles
// sharing `halo` elements. A remainder tile whose span would fall below
// `min_span` (no window fits) is merged into its predecessor.
// Throws InvalidArgument if halo >= base or base is out of range.
AxisGrid ifm_axis_grid(std::int64_t full, std::int64_t base, std::int64_t halo,
                       std::int64_t min_span = 1);

// Non-overlapping split: floor(full/base) base tiles plus the remainder.
AxisGrid depth_axis_grid(std::int64_t full, std::int64_t base);

struct OfmTileDims {
  std::int64_t Tm = 1, Tn = 1;
  bool operator==(const OfmTileDims&) const = default;
};

OfmTileDims ofm_tile_dims(std::int64_t Th, std::int64_t Tw, const LayerShape& layer);

// The loops of the tiled nest: h and w walk ifmap spatial tiles, j walks
// filter sets, i walks input-depth tiles.
enum class Loop : std::uint8_t { kH = 0, kW = 1, kJ = 2, kI = 3 };
inline constexpr int kNumLoops = 4;

struct TilingPlan {
  LayerShape layer;
  TilingFactors factors;
  AxisGrid ifm_h, ifm_w;
  // Channel grid of an ifmap tile: the i grid, or the j grid for depthwise.
  AxisGrid ifm_c;
  AxisGrid wgh_j, wgh_i;
  AxisGrid ofm_m, ofm_n, ofm_j;

  std::int64_t trip(Loop loop) const;
  // Axis grid that `loop` walks for `type`; nullptr if the loop does not
  // index that data type.
  const AxisGrid* axis(DataType type, Loop loop) const;
  bool indexes(DataType type, Loop loop) const { return axis(type, loop) != nullptr; }
  // Elements per tile multiplier outside the axis grids (P*Q for weights).
  std::int64_t fixed_elems(DataType type) const;
};

inline std::int64_t halo_length(std::int64_t filter, std::int64_t stride) {
  return filter > stride ? filter - stride : 0;
}

// With stride > 1 the tile advance must be a multiple of the stride so that
// every output window lies inside exactly one tile. A tile covering the
// whole axis is always fine.
bool stride_aligned(std::int64_t full, std::int64_t base, std::int64_t filter,
                    std::int64_t stride);

// Throws InvalidArgument if the factors violate their bounds or alignment.
TilingPlan build_plan(const LayerShape& layer, const TilingFactors& factors);

struct BufferFootprint {
  std::int64_t bytes_ifm = 0, bytes_wgh = 0, bytes_ofm = 0;
  bool operator==(const BufferFootprint&) const = default;
};

// Bytes of the largest tile of each type.
BufferFootprint buffer_footprint(const TilingPlan& plan);

struct BufferSizes {
  std::int64_t ifm = 64 * 1024, wgh = 64 * 1024, ofm = 64 * 1024;
  bool operator==(const BufferSizes&) const = default;
};

bool fits(const TilingPlan& plan, const BufferSizes& buffers);

}  // namespace reusemap
