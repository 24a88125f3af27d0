#include "reusemap/trace_gen.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "reusemap/errors.hpp"

namespace reusemap {

namespace {

constexpr std::array<DataType, 3> kTypes{DataType::kIfm, DataType::kWgh, DataType::kOfm};

struct SlotRange {
  std::int64_t begin, end;
};

// Per data type walk state.
struct TypeState {
  std::vector<Loop> loops;  // indexing loops, canonical h, w, j, i order
  std::vector<const AxisGrid*> grids;
  std::vector<std::int64_t> cur, resident;
  bool has_resident = false;
  std::vector<std::int64_t> block_start;  // by tile id, -1 until first fetch
  std::vector<std::int64_t> episodes;     // ofm only

  std::int64_t id(const std::vector<std::int64_t>& t) const {
    std::int64_t v = 0;
    for (std::size_t a = 0; a < grids.size(); ++a)
      v = v * static_cast<std::int64_t>(grids[a]->count()) + t[a];
    return v;
  }
  std::int64_t elems(const TilingPlan& plan, DataType type) const {
    std::int64_t e = plan.fixed_elems(type);
    for (std::size_t a = 0; a < grids.size(); ++a) e *= grids[a]->span[cur[a]];
    return e;
  }
};

class Walker {
 public:
  Walker(std::int32_t layer, const TilingPlan& plan, const Schedule& schedule,
         RegionAllocator& alloc, const TraceOptions& opts, TraceSink& sink)
      : layer_(layer), plan_(plan), schedule_(schedule), alloc_(alloc), opts_(opts),
        sink_(sink), geom_(alloc.geometry()) {
    for (DataType t : kTypes) {
      TypeState& s = state(t);
      for (Loop l : {Loop::kH, Loop::kW, Loop::kJ, Loop::kI}) {
        if (const AxisGrid* g = plan.axis(t, l)) {
          s.loops.push_back(l);
          s.grids.push_back(g);
        }
      }
      s.cur.assign(s.loops.size(), 0);
      std::int64_t n = 1;
      for (const AxisGrid* g : s.grids) n *= static_cast<std::int64_t>(g->count());
      s.block_start.assign(static_cast<std::size_t>(n), -1);
      if (t == DataType::kOfm) s.episodes.assign(static_cast<std::size_t>(n), 0);
    }
    outer_ = ifm_block_outer_axis(plan, schedule);
  }

  void run() {
    std::array<std::int64_t, kNumLoops> trip{};
    for (int p = 0; p < kNumLoops; ++p) trip[p] = plan_.trip(schedule_.nest[p]);
    std::array<std::int64_t, kNumLoops> cnt{};
    while (true) {
      for (int p = 0; p < kNumLoops; ++p) value_[static_cast<std::size_t>(schedule_.nest[p])] = cnt[p];
      step();
      int p = kNumLoops;
      while (p > 0) {
        if (++cnt[p - 1] < trip[p - 1]) break;
        cnt[p - 1] = 0;
        --p;
      }
      if (p == 0) break;
    }
    TypeState& o = state(DataType::kOfm);
    if (o.has_resident) write_back(o);
  }

 private:
  TypeState& state(DataType t) { return states_[static_cast<std::size_t>(t)]; }

  void step() {
    for (DataType t : kTypes) {
      TypeState& s = state(t);
      for (std::size_t a = 0; a < s.loops.size(); ++a)
        s.cur[a] = value_[static_cast<std::size_t>(s.loops[a])];
    }
    TypeState& o = state(DataType::kOfm);
    const bool ofm_changed = !o.has_resident || o.cur != o.resident;
    if (ofm_changed && o.has_resident) write_back(o);

    for (DataType t : {DataType::kIfm, DataType::kWgh}) {
      TypeState& s = state(t);
      if (s.has_resident && s.cur == s.resident) continue;
      fetch(t, s);
      s.resident = s.cur;
      s.has_resident = true;
    }

    if (ofm_changed) {
      const std::int64_t id = o.id(o.cur);
      auto& ep = o.episodes[static_cast<std::size_t>(id)];
      if (ep > 0) emit(Op::kRead, DataType::kOfm, id, whole_block(o, DataType::kOfm));
      ++ep;
      o.resident = o.cur;
      o.has_resident = true;
    }
  }

  std::int64_t block_of(TypeState& s, DataType t, std::int64_t id, std::int64_t slots) {
    auto& b = s.block_start[static_cast<std::size_t>(id)];
    if (b < 0) b = alloc_.take({layer_, t}, slots);
    return b;
  }

  std::vector<SlotRange> whole_block(TypeState& s, DataType t) {
    const std::int64_t slots = ceil_div(s.elems(plan_, t), geom_.chips_per_rank);
    const std::int64_t b = block_of(s, t, s.id(s.cur), slots);
    return {{b, b + slots}};
  }

  void write_back(TypeState& o) {
    const auto saved = o.cur;
    o.cur = o.resident;
    const auto ranges = whole_block(o, DataType::kOfm);
    emit(Op::kWrite, DataType::kOfm, o.id(o.cur), ranges);
    o.cur = saved;
  }

  // Index of the spatial axis along which the resident ifmap tile is the
  // immediate predecessor of the current one, if the two overlap.
  int halo_neighbour(const TypeState& s) const {
    if (opts_.mode != ObjectiveMode::kReuseAware || !s.has_resident) return -1;
    int axis = -1;
    for (std::size_t a = 0; a < s.loops.size(); ++a) {
      if (s.cur[a] == s.resident[a]) continue;
      if (axis >= 0) return -1;
      const bool spatial = s.loops[a] == Loop::kH || s.loops[a] == Loop::kW;
      if (!spatial || s.cur[a] != s.resident[a] + 1) return -1;
      axis = static_cast<int>(a);
    }
    return axis;
  }

  void fetch(DataType t, TypeState& s) {
    const std::int64_t id = s.id(s.cur);
    if (t != DataType::kIfm) {
      emit(Op::kRead, t, id, whole_block(s, t));
      return;
    }
    const int a = halo_neighbour(s);
    std::int64_t overlap = 0;
    if (a >= 0) {
      const AxisGrid& g = *s.grids[static_cast<std::size_t>(a)];
      const auto k = s.cur[static_cast<std::size_t>(a)];
      overlap = g.start[k - 1] + g.span[k - 1] - g.start[k];
    }
    if (overlap <= 0) {
      emit(Op::kRead, t, id, whole_block(s, t));
      return;
    }

    // Block element order: outer spatial axis, other spatial axis, channel.
    const auto span_of = [&](Loop l) {
      for (std::size_t x = 0; x < s.loops.size(); ++x)
        if (s.loops[x] == l) return s.grids[x]->span[s.cur[x]];
      return std::int64_t{1};
    };
    const Loop inner = outer_ == Loop::kH ? Loop::kW : Loop::kH;
    const Loop chan = plan_.layer.kind == LayerKind::kDepthwise ? Loop::kJ : Loop::kI;
    const std::int64_t so = span_of(outer_), sm = span_of(inner), sc = span_of(chan);
    const std::int64_t elems = so * sm * sc;
    const std::int64_t dp = geom_.chips_per_rank;
    const std::int64_t b = block_of(s, t, id, ceil_div(elems, dp));

    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    if (s.loops[static_cast<std::size_t>(a)] == outer_) {
      runs.emplace_back(overlap * sm * sc, elems);
    } else {
      for (std::int64_t o = 0; o < so; ++o)
        runs.emplace_back((o * sm + overlap) * sc, (o + 1) * sm * sc);
    }
    std::vector<SlotRange> ranges;
    for (auto [e0, e1] : runs) {
      const SlotRange r{b + e0 / dp, b + ceil_div(e1, dp)};
      if (!ranges.empty() && r.begin <= ranges.back().end)
        ranges.back().end = std::max(ranges.back().end, r.end);
      else
        ranges.push_back(r);
    }
    emit(Op::kRead, t, id, ranges);
  }

  void emit(Op op, DataType t, std::int64_t id, const std::vector<SlotRange>& ranges) {
    const std::int64_t row = geom_.columns_per_row;
    const std::int64_t chunk = opts_.burst ? geom_.burst_length : 1;
    DramRequest r;
    r.op = op;
    r.type = t;
    r.layer = layer_;
    r.tile = id;
    for (const SlotRange& range : ranges) {
      std::int64_t s = range.begin;
      while (s < range.end) {
        const std::int64_t row_end = std::min(range.end, (s / row + 1) * row);
        while (s < row_end) {
          const std::int64_t n = std::min(chunk, row_end - s);
          r.addr = slot_address(s, alloc_.policy(), geom_);
          r.burst = static_cast<std::int32_t>(n);
          sink_.consume(r);
          s += n;
        }
      }
    }
  }

  std::int32_t layer_;
  const TilingPlan& plan_;
  const Schedule& schedule_;
  RegionAllocator& alloc_;
  TraceOptions opts_;
  TraceSink& sink_;
  const DramGeometry& geom_;
  Loop outer_;
  std::array<TypeState, 3> states_;
  std::array<std::int64_t, kNumLoops> value_{};
};

const char* type_tag(DataType t) { return to_string(t); }

DataType parse_type_tag(const std::string& s) {
  for (DataType t : kTypes)
    if (s == to_string(t)) return t;
  throw InvalidArgument("unknown data type tag '" + s + "'");
}

}  // namespace

void TraceCounter::consume(const DramRequest& r) {
  if (r.op == Op::kWrite) {
    counts_.wr_ofm += r.burst;
  } else {
    switch (r.type) {
      case DataType::kIfm: counts_.rd_ifm += r.burst; break;
      case DataType::kWgh: counts_.rd_wgh += r.burst; break;
      case DataType::kOfm: counts_.rd_ofm += r.burst; break;
    }
  }
  if (burst_) {
    ++counts_.requests_burst;
    counts_.requests_nonburst += r.burst;
  } else {
    ++counts_.requests_nonburst;
  }
}

void TraceWriter::consume(const DramRequest& r) {
  const auto& a = r.addr;
  os_ << (r.op == Op::kRead ? "RD " : "WR ") << a.channel << ' ' << a.rank << ' ' << a.chip
      << ' ' << a.bank << ' ' << a.row << ' ' << a.column << ' ' << r.burst << ' ' << r.layer
      << ':' << type_tag(r.type) << ':' << r.tile << '\n';
}

void generate_layer_trace(std::int32_t layer, const TilingPlan& plan, const Schedule& schedule,
                          RegionAllocator& alloc, const TraceOptions& opts, TraceSink& sink) {
  Walker(layer, plan, schedule, alloc, opts, sink).run();
}

RequestTrace generate_layer_trace(std::int32_t layer, const TilingPlan& plan,
                                  const Schedule& schedule, RegionAllocator& alloc,
                                  const TraceOptions& opts) {
  TraceCollector c(opts.burst);
  generate_layer_trace(layer, plan, schedule, alloc, opts, c);
  return std::move(c.trace());
}

AccessCounts count_trace(const RequestTrace& trace) {
  TraceCounter c(trace.burst);
  for (const auto& r : trace.requests) c.consume(r);
  return c.counts();
}

bool counts_match(const AccessCounts& model, const AccessCounts& traced, bool burst) {
  return model.rd_ifm == traced.rd_ifm && model.rd_wgh == traced.rd_wgh &&
         model.rd_ofm == traced.rd_ofm && model.wr_ofm == traced.wr_ofm &&
         model.requests(burst) == traced.requests(burst);
}

void write_trace(std::ostream& os, const RequestTrace& trace) {
  os << "# reusemap trace " << (trace.burst ? "burst" : "nonburst") << '\n';
  TraceWriter w(os);
  for (const auto& r : trace.requests) w.consume(r);
}

RequestTrace read_trace(std::istream& is) {
  RequestTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("nonburst") != std::string::npos) trace.burst = false;
      continue;
    }
    std::istringstream in(line);
    std::string op, tag;
    DramRequest r;
    auto& a = r.addr;
    if (!(in >> op >> a.channel >> a.rank >> a.chip >> a.bank >> a.row >> a.column >> r.burst >>
          tag) ||
        (op != "RD" && op != "WR"))
      throw InvalidArgument("malformed trace line " + std::to_string(lineno));
    r.op = op == "RD" ? Op::kRead : Op::kWrite;
    const auto c1 = tag.find(':'), c2 = tag.rfind(':');
    if (c1 == std::string::npos || c1 == c2)
      throw InvalidArgument("malformed tag on trace line " + std::to_string(lineno));
    r.layer = std::stoi(tag.substr(0, c1));
    r.type = parse_type_tag(tag.substr(c1 + 1, c2 - c1 - 1));
    r.tile = std::stoll(tag.substr(c2 + 1));
    trace.requests.push_back(r);
  }
  return trace;
}

}  // namespace reusemap
