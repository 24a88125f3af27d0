#include "reusemap/tiling.hpp"

#include <algorithm>
#include <numeric>

#include "reusemap/errors.hpp"

namespace reusemap {

std::int64_t AxisGrid::max_span() const {
  return *std::max_element(span.begin(), span.end());
}

std::int64_t AxisGrid::n_intermediate() const {
  return count() > 2 ? static_cast<std::int64_t>(count()) - 2 : 0;
}

std::int64_t AxisGrid::fresh_total() const {
  return std::accumulate(fresh.begin(), fresh.end(), std::int64_t{0});
}

AxisGrid ifm_axis_grid(std::int64_t full, std::int64_t base, std::int64_t halo,
                       std::int64_t min_span) {
  if (base < 1 || base > full)
    throw InvalidArgument("tile base must lie in [1, axis length]");
  if (halo < 0 || halo >= base)
    throw InvalidArgument("halo must lie in [0, base)");
  AxisGrid g;
  g.base = base;
  g.halo = halo;
  const std::int64_t advance = base - halo;
  const std::int64_t n_int = (full - base) / advance;
  const std::int64_t last = full - base - n_int * advance;

  g.start.push_back(0);
  g.span.push_back(base);
  g.fresh.push_back(base);
  for (std::int64_t k = 1; k <= n_int; ++k) {
    g.start.push_back(k * advance);
    g.span.push_back(base);
    g.fresh.push_back(advance);
  }
  if (last > 0) {
    if (last + halo < min_span) {
      g.span.back() += last;
      g.fresh.back() += last;
    } else {
      g.start.push_back(full - last - halo);
      g.span.push_back(last + halo);
      g.fresh.push_back(last);
    }
  }
  return g;
}

AxisGrid depth_axis_grid(std::int64_t full, std::int64_t base) {
  if (base < 1 || base > full)
    throw InvalidArgument("tile base must lie in [1, axis length]");
  AxisGrid g;
  g.base = base;
  for (std::int64_t s = 0; s < full; s += base) {
    const std::int64_t len = std::min(base, full - s);
    g.start.push_back(s);
    g.span.push_back(len);
    g.fresh.push_back(len);
  }
  return g;
}

OfmTileDims ofm_tile_dims(std::int64_t Th, std::int64_t Tw, const LayerShape& layer) {
  return {ceil_div(Th - layer.P + 1, layer.str), ceil_div(Tw - layer.Q + 1, layer.str)};
}

namespace {

// Output grid produced by an ifmap grid: one output tile per input tile.
AxisGrid derive_ofm_axis(const AxisGrid& in, std::int64_t filter, std::int64_t stride) {
  AxisGrid g;
  g.base = ceil_div(in.base - filter + 1, stride);
  std::int64_t s = 0;
  for (std::int64_t span : in.span) {
    const std::int64_t len = ceil_div(span - filter + 1, stride);
    g.start.push_back(s);
    g.span.push_back(len);
    g.fresh.push_back(len);
    s += len;
  }
  return g;
}

}  // namespace

std::int64_t TilingPlan::trip(Loop loop) const {
  switch (loop) {
    case Loop::kH: return static_cast<std::int64_t>(ifm_h.count());
    case Loop::kW: return static_cast<std::int64_t>(ifm_w.count());
    case Loop::kJ: return static_cast<std::int64_t>(wgh_j.count());
    case Loop::kI: return static_cast<std::int64_t>(wgh_i.count());
  }
  return 1;
}

const AxisGrid* TilingPlan::axis(DataType type, Loop loop) const {
  const bool dw = layer.kind == LayerKind::kDepthwise;
  switch (type) {
    case DataType::kIfm:
      if (loop == Loop::kH) return &ifm_h;
      if (loop == Loop::kW) return &ifm_w;
      if (loop == (dw ? Loop::kJ : Loop::kI)) return &ifm_c;
      return nullptr;
    case DataType::kWgh:
      if (loop == Loop::kJ) return &wgh_j;
      if (loop == Loop::kI) return &wgh_i;
      return nullptr;
    case DataType::kOfm:
      if (loop == Loop::kH) return &ofm_m;
      if (loop == Loop::kW) return &ofm_n;
      if (loop == Loop::kJ) return &ofm_j;
      return nullptr;
  }
  return nullptr;
}

std::int64_t TilingPlan::fixed_elems(DataType type) const {
  return type == DataType::kWgh ? layer.P * layer.Q : 1;
}

bool stride_aligned(std::int64_t full, std::int64_t base, std::int64_t filter,
                    std::int64_t stride) {
  return base == full || (base - halo_length(filter, stride)) % stride == 0;
}

TilingPlan build_plan(const LayerShape& layer, const TilingFactors& f) {
  layer.validate();
  const bool dw = layer.kind == LayerKind::kDepthwise;
  if (f.Th < layer.P || f.Th > layer.H || f.Tw < layer.Q || f.Tw > layer.W)
    throw InvalidArgument("spatial tile outside [filter, ifmap] bounds");
  if (!stride_aligned(layer.H, f.Th, layer.P, layer.str) ||
      !stride_aligned(layer.W, f.Tw, layer.Q, layer.str))
    throw InvalidArgument("spatial tile advance is not a multiple of the stride");
  if (f.Tj < 1 || f.Tj > layer.J) throw InvalidArgument("Tj outside [1, J]");
  if (f.Ti < 1 || f.Ti > layer.effective_depth())
    throw InvalidArgument("Ti outside [1, input depth]");

  TilingPlan p;
  p.layer = layer;
  p.factors = f;
  p.ifm_h = ifm_axis_grid(layer.H, f.Th, halo_length(layer.P, layer.str), layer.P);
  p.ifm_w = ifm_axis_grid(layer.W, f.Tw, halo_length(layer.Q, layer.str), layer.Q);
  p.wgh_j = depth_axis_grid(layer.J, f.Tj);
  p.wgh_i = depth_axis_grid(layer.effective_depth(), f.Ti);
  p.ifm_c = dw ? p.wgh_j : p.wgh_i;
  p.ofm_m = derive_ofm_axis(p.ifm_h, layer.P, layer.str);
  p.ofm_n = derive_ofm_axis(p.ifm_w, layer.Q, layer.str);
  p.ofm_j = p.wgh_j;
  return p;
}

namespace {
std::int64_t bits_to_bytes(std::int64_t bits) { return ceil_div(bits, 8); }
}  // namespace

BufferFootprint buffer_footprint(const TilingPlan& p) {
  const auto& l = p.layer;
  BufferFootprint b;
  b.bytes_ifm = bits_to_bytes(p.ifm_h.max_span() * p.ifm_w.max_span() *
                              p.ifm_c.max_span() * l.bit_ifm);
  b.bytes_wgh = bits_to_bytes(l.P * l.Q * p.wgh_i.max_span() * p.wgh_j.max_span() *
                              l.bit_wgh);
  b.bytes_ofm = bits_to_bytes(p.ofm_m.max_span() * p.ofm_n.max_span() *
                              p.ofm_j.max_span() * l.bit_ofm);
  return b;
}

bool fits(const TilingPlan& plan, const BufferSizes& buffers) {
  const auto b = buffer_footprint(plan);
  return b.bytes_ifm <= buffers.ifm && b.bytes_wgh <= buffers.wgh &&
         b.bytes_ofm <= buffers.ofm;
}

}  // namespace reusemap
