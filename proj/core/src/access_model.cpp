#include "reusemap/access_model.hpp"

#include <algorithm>
#include <optional>

#include "reusemap/errors.hpp"

namespace reusemap {

namespace {

constexpr std::array<Loop, kNumLoops> kAllLoops{Loop::kH, Loop::kW, Loop::kJ, Loop::kI};

char loop_letter(Loop l) {
  switch (l) {
    case Loop::kH: return 'h';
    case Loop::kW: return 'w';
    case Loop::kJ: return 'j';
    case Loop::kI: return 'i';
  }
  return '?';
}

std::size_t idx(Loop l) { return static_cast<std::size_t>(l); }

// Indexing loops of one data type in canonical (h, w, j, i) order.
struct TypeAxes {
  std::vector<Loop> loops;
  std::vector<const AxisGrid*> grids;
};

TypeAxes type_axes(const TilingPlan& plan, DataType type) {
  TypeAxes a;
  for (Loop l : kAllLoops) {
    if (const AxisGrid* g = plan.axis(type, l)) {
      a.loops.push_back(l);
      a.grids.push_back(g);
    }
  }
  return a;
}

// Residency structure of one data type under a nest.
struct Residency {
  std::optional<Loop> innermost;  // innermost indexing loop with trip > 1
  std::int64_t multiplicity = 1;
};

Residency residency(const TypeAxes& axes, const Schedule& s, const LoopTrips& trips) {
  Residency r;
  int inner_pos = -1;
  for (Loop l : axes.loops) {
    if (trips[idx(l)] > 1 && s.position(l) > inner_pos) {
      inner_pos = s.position(l);
      r.innermost = l;
    }
  }
  if (!r.innermost) return r;
  for (int p = 0; p < inner_pos; ++p) {
    const Loop l = s.nest[p];
    if (std::find(axes.loops.begin(), axes.loops.end(), l) == axes.loops.end())
      r.multiplicity *= trips[idx(l)];
  }
  return r;
}

// Loop along which ifmap fetches skip the resident halo, if any.
std::optional<Loop> halo_axis(const TilingPlan& plan, const Schedule& s,
                              const Residency& r, DataType type, ObjectiveMode mode) {
  if (type != DataType::kIfm || mode != ObjectiveMode::kReuseAware || !r.innermost)
    return std::nullopt;
  const Loop d = *r.innermost;
  if (d != Loop::kH && d != Loop::kW) return std::nullopt;
  if (plan.axis(type, d)->halo == 0) return std::nullopt;
  (void)s;
  return d;
}

std::int64_t burst_requests(std::int64_t begin, std::int64_t end, std::int64_t row,
                            std::int64_t bl) {
  std::int64_t n = 0;
  while (begin < end) {
    const std::int64_t chunk_end = std::min(end, (begin / row + 1) * row);
    n += ceil_div(chunk_end - begin, bl);
    begin = chunk_end;
  }
  return n;
}

struct AxisClass {
  std::int64_t span, fresh, count;
  bool first;
};

std::vector<AxisClass> classes(const AxisGrid& g) {
  std::vector<AxisClass> out;
  for (std::size_t k = 0; k < g.count(); ++k) {
    if (k > 1 && out.back().span == g.span[k] && out.back().fresh == g.fresh[k]) {
      ++out.back().count;
    } else {
      out.push_back({g.span[k], g.fresh[k], 1, k == 0});
    }
  }
  return out;
}

}  // namespace

int Schedule::position(Loop loop) const {
  for (int p = 0; p < kNumLoops; ++p)
    if (nest[p] == loop) return p;
  return -1;
}

std::string nest_string(const Schedule& s) {
  std::string out;
  for (Loop l : s.nest) out += loop_letter(l);
  return out;
}

Schedule parse_nest(const std::string& letters) {
  if (letters.size() != kNumLoops) throw InvalidArgument("nest needs four loops: " + letters);
  Schedule s;
  s.origin = "explicit";
  std::array<bool, kNumLoops> seen{};
  for (int p = 0; p < kNumLoops; ++p) {
    Loop l;
    switch (letters[p]) {
      case 'h': l = Loop::kH; break;
      case 'w': l = Loop::kW; break;
      case 'j': l = Loop::kJ; break;
      case 'i': l = Loop::kI; break;
      default: throw InvalidArgument("unknown loop symbol in nest: " + letters);
    }
    if (seen[idx(l)]) throw InvalidArgument("repeated loop symbol in nest: " + letters);
    seen[idx(l)] = true;
    s.nest[p] = l;
  }
  return s;
}

const char* to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::kReuseAware ? "reuse-aware" : "baseline";
}

ObjectiveMode parse_objective_mode(const std::string& s) {
  if (s == "reuse-aware") return ObjectiveMode::kReuseAware;
  if (s == "baseline") return ObjectiveMode::kBaseline;
  throw InvalidArgument("unknown mode '" + s + "' (expected reuse-aware|baseline)");
}

LoopTrips trips_of(const TilingPlan& plan) {
  LoopTrips t{};
  for (Loop l : kAllLoops) t[idx(l)] = plan.trip(l);
  return t;
}

AccessCounts& AccessCounts::operator+=(const AccessCounts& o) {
  rd_ifm += o.rd_ifm;
  rd_wgh += o.rd_wgh;
  rd_ofm += o.rd_ofm;
  wr_ofm += o.wr_ofm;
  requests_burst += o.requests_burst;
  requests_nonburst += o.requests_nonburst;
  return *this;
}

bool AccessCounts::same_totals(const AccessCounts& o) const {
  return rd_ifm == o.rd_ifm && rd_wgh == o.rd_wgh && rd_ofm == o.rd_ofm &&
         wr_ofm == o.wr_ofm && requests_burst == o.requests_burst &&
         requests_nonburst == o.requests_nonburst;
}

std::int64_t accesses_per_tile(std::int64_t elements, std::int64_t chips_per_rank) {
  return ceil_div(elements, chips_per_rank);
}

bool loop_indexes(DataType type, Loop loop, LayerKind kind) {
  switch (type) {
    case DataType::kIfm:
      return loop == Loop::kH || loop == Loop::kW ||
             loop == (kind == LayerKind::kDepthwise ? Loop::kJ : Loop::kI);
    case DataType::kWgh:
      return loop == Loop::kJ || loop == Loop::kI;
    case DataType::kOfm:
      return loop == Loop::kH || loop == Loop::kW || loop == Loop::kJ;
  }
  return false;
}

std::int64_t fetch_multiplicity(DataType type, const Schedule& schedule,
                                const LoopTrips& trips, LayerKind kind) {
  TypeAxes axes;
  for (Loop l : kAllLoops)
    if (loop_indexes(type, l, kind)) axes.loops.push_back(l);
  return residency(axes, schedule, trips).multiplicity;
}

OfmTraffic ofm_traffic(const Schedule& schedule, const TilingPlan& plan,
                       std::int64_t chips_per_rank) {
  const auto counts = layer_access_words(plan, schedule, chips_per_rank,
                                         ObjectiveMode::kReuseAware);
  return {counts.rd_ofm, counts.wr_ofm};
}

Loop ifm_block_outer_axis(const TilingPlan& plan, const Schedule& schedule) {
  const bool h = plan.trip(Loop::kH) > 1, w = plan.trip(Loop::kW) > 1;
  if (h && w) return schedule.position(Loop::kW) > schedule.position(Loop::kH) ? Loop::kW : Loop::kH;
  return w ? Loop::kW : Loop::kH;
}

std::int64_t tile_count(const TilingPlan& plan, DataType type) {
  std::int64_t n = 1;
  for (const AxisGrid* g : type_axes(plan, type).grids) n *= static_cast<std::int64_t>(g->count());
  return n;
}

std::vector<std::int64_t> first_fetch_order(const TilingPlan& plan,
                                            const Schedule& schedule, DataType type) {
  const TypeAxes axes = type_axes(plan, type);
  const std::size_t k = axes.loops.size();
  // Canonical radix weights.
  std::vector<std::int64_t> weight(k, 1);
  for (std::size_t a = k; a-- > 1;)
    weight[a - 1] = weight[a] * static_cast<std::int64_t>(axes.grids[a]->count());
  // Axes visited outermost first, following the nest.
  std::vector<std::size_t> by_nest(k);
  for (std::size_t a = 0; a < k; ++a) by_nest[a] = a;
  std::sort(by_nest.begin(), by_nest.end(), [&](std::size_t x, std::size_t y) {
    return schedule.position(axes.loops[x]) < schedule.position(axes.loops[y]);
  });

  std::vector<std::int64_t> order;
  order.reserve(static_cast<std::size_t>(tile_count(plan, type)));
  std::vector<std::int64_t> counter(k, 0);
  while (true) {
    std::int64_t id = 0;
    for (std::size_t a = 0; a < k; ++a) id += counter[a] * weight[a];
    order.push_back(id);
    std::size_t pos = k;
    while (pos > 0) {
      const std::size_t a = by_nest[pos - 1];
      if (++counter[a] < static_cast<std::int64_t>(axes.grids[a]->count())) break;
      counter[a] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return order;
}

AccessCounts layer_access_words(const TilingPlan& plan, const Schedule& schedule,
                                std::int64_t dp, ObjectiveMode mode) {
  const LoopTrips trips = trips_of(plan);
  AccessCounts out;
  for (DataType type : {DataType::kIfm, DataType::kWgh, DataType::kOfm}) {
    const TypeAxes axes = type_axes(plan, type);
    const Residency res = residency(axes, schedule, trips);
    const auto reduce = halo_axis(plan, schedule, res, type, mode);
    std::vector<std::vector<AxisClass>> cls;
    std::size_t reduce_pos = axes.loops.size();
    for (std::size_t a = 0; a < axes.loops.size(); ++a) {
      cls.push_back(classes(*axes.grids[a]));
      if (reduce && axes.loops[a] == *reduce) reduce_pos = a;
    }

    std::int64_t words = 0;
    std::vector<std::size_t> pick(cls.size(), 0);
    while (true) {
      std::int64_t elems = plan.fixed_elems(type), tiles = 1;
      for (std::size_t a = 0; a < cls.size(); ++a) {
        elems *= cls[a][pick[a]].span;
        tiles *= cls[a][pick[a]].count;
      }
      std::int64_t per_fetch = accesses_per_tile(elems, dp);
      if (reduce_pos < cls.size() && !cls[reduce_pos][pick[reduce_pos]].first) {
        const auto& c = cls[reduce_pos][pick[reduce_pos]];
        const std::int64_t halo_elems = elems / c.span * (c.span - c.fresh);
        per_fetch -= halo_elems / dp;
      }
      words += tiles * per_fetch;
      std::size_t a = cls.size();
      while (a > 0) {
        if (++pick[a - 1] < cls[a - 1].size()) break;
        pick[a - 1] = 0;
        --a;
      }
      if (a == 0) break;
    }

    switch (type) {
      case DataType::kIfm: out.rd_ifm = words * res.multiplicity; break;
      case DataType::kWgh: out.rd_wgh = words * res.multiplicity; break;
      case DataType::kOfm:
        out.wr_ofm = words * res.multiplicity;
        out.rd_ofm = words * (res.multiplicity - 1);
        break;
    }
  }
  out.requests_nonburst = out.total();
  return out;
}

AccessCounts layer_accesses(const TilingPlan& plan, const Schedule& schedule,
                            const AccessParams& params, ObjectiveMode mode) {
  const LoopTrips trips = trips_of(plan);
  const std::int64_t dp = params.chips_per_rank;
  const std::int64_t row = params.columns_per_row;
  const std::int64_t bl = params.burst_length;
  const Loop outer_axis = ifm_block_outer_axis(plan, schedule);

  AccessCounts out;
  for (DataType type : {DataType::kIfm, DataType::kWgh, DataType::kOfm}) {
    const TypeAxes axes = type_axes(plan, type);
    const std::size_t k = axes.loops.size();
    const Residency res = residency(axes, schedule, trips);
    const auto reduce = halo_axis(plan, schedule, res, type, mode);
    if (reduce && *reduce != outer_axis)
      throw Error("internal: halo axis is not the outer block axis");

    std::vector<std::int64_t> weight(k, 1);
    for (std::size_t a = k; a-- > 1;)
      weight[a - 1] = weight[a] * static_cast<std::int64_t>(axes.grids[a]->count());

    std::int64_t offset = 0;  // region-relative column of the next block
    std::int64_t words = 0, psum_words = 0, requests = 0;
    for (std::int64_t id : first_fetch_order(plan, schedule, type)) {
      std::int64_t elems = plan.fixed_elems(type);
      std::int64_t halo_elems = 0;
      bool reduced = false;
      std::int64_t rem = id;
      for (std::size_t a = 0; a < k; ++a) {
        const std::int64_t t = rem / weight[a];
        rem %= weight[a];
        elems *= axes.grids[a]->span[t];
        if (reduce && axes.loops[a] == *reduce && t > 0) reduced = true;
      }
      if (reduced) {
        for (std::size_t a = 0; a < k; ++a) {
          if (axes.loops[a] != *reduce) continue;
          const std::int64_t t = (id / weight[a]) % static_cast<std::int64_t>(axes.grids[a]->count());
          const auto span = axes.grids[a]->span[t];
          halo_elems = elems / span * (span - axes.grids[a]->fresh[t]);
        }
      }
      const std::int64_t block = accesses_per_tile(elems, dp);
      const std::int64_t skip = reduced ? halo_elems / dp : 0;

      TileAccess ta;
      ta.type = type;
      ta.tile = id;
      const std::int64_t m = res.multiplicity;
      const std::int64_t full_req = burst_requests(offset, offset + block, row, bl);
      if (type == DataType::kOfm) {
        ta.full_fetches = m;
        ta.psum_reads = m - 1;
        ta.words = block * (2 * m - 1);
        words += block * m;
        psum_words += block * (m - 1);
        requests += full_req * (2 * m - 1);
      } else if (reduced) {
        ta.reduced_fetches = m;
        ta.words = (block - skip) * m;
        words += ta.words;
        requests += burst_requests(offset + skip, offset + block, row, bl) * m;
      } else {
        ta.full_fetches = m;
        ta.words = block * m;
        words += ta.words;
        requests += full_req * m;
      }
      out.per_tile.push_back(ta);
      offset += block;
    }

    switch (type) {
      case DataType::kIfm: out.rd_ifm = words; break;
      case DataType::kWgh: out.rd_wgh = words; break;
      case DataType::kOfm:
        out.wr_ofm = words;
        out.rd_ofm = psum_words;
        break;
    }
    out.requests_burst += requests;
  }
  out.requests_nonburst = out.total();
  return out;
}

AccessCounts network_accesses(const std::vector<AccessCounts>& per_layer) {
  AccessCounts total;
  for (const auto& c : per_layer) total += c;
  return total;
}

}  // namespace reusemap
