#include "reusemap/dse.hpp"

#include <algorithm>

#include "reusemap/errors.hpp"

namespace reusemap {

const char* to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kPriority6: return "priority6";
    case ScheduleMode::kExhaustive24: return "exhaustive24";
    case ScheduleMode::kWghOfmReuse: return "wgh-ofm";
  }
  return "?";
}

ScheduleMode parse_schedule_mode(const std::string& s) {
  if (s == "priority6") return ScheduleMode::kPriority6;
  if (s == "exhaustive24") return ScheduleMode::kExhaustive24;
  if (s == "wgh-ofm") return ScheduleMode::kWghOfmReuse;
  throw InvalidArgument("unknown schedule mode '" + s + "'");
}

const char* to_string(TjRule r) {
  switch (r) {
    case TjRule::kFree: return "free";
    case TjRule::kMaxPerSpatial: return "max-per-spatial";
    case TjRule::kMaxFirst: return "max-first";
  }
  return "?";
}

SearchConfig SearchConfig::baseline(const SearchConfig& base) {
  SearchConfig c = base;
  c.schedule_mode = ScheduleMode::kWghOfmReuse;
  c.objective_mode = ObjectiveMode::kBaseline;
  c.tj_rule = TjRule::kMaxFirst;
  return c;
}

Schedule nest_for_order(const ReusePriorityOrder& order) {
  using D = DataType;
  const auto& o = order.order;
  Schedule s;
  if (o[0] == D::kIfm) {
    s = parse_nest(o[1] == D::kWgh ? "hwij" : "hwji");
  } else if (o[0] == D::kWgh) {
    s = parse_nest(o[1] == D::kIfm ? "jihw" : "jhwi");
  } else {
    s = parse_nest(o[1] == D::kIfm ? "hwji" : "jhwi");
  }
  s.origin = to_string(order);
  return s;
}

std::vector<Schedule> candidate_schedules(const LayerShape& layer, ScheduleMode mode) {
  (void)layer;
  std::vector<Schedule> out;
  auto add = [&](Schedule s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  switch (mode) {
    case ScheduleMode::kPriority6:
      for (const auto& o : all_priority_orders()) add(nest_for_order(o));
      break;
    case ScheduleMode::kWghOfmReuse:
      for (const auto& o : all_priority_orders())
        if (o.order[0] != DataType::kIfm) add(nest_for_order(o));
      break;
    case ScheduleMode::kExhaustive24: {
      std::array<Loop, kNumLoops> nest{Loop::kH, Loop::kW, Loop::kJ, Loop::kI};
      do {
        Schedule s;
        s.nest = nest;
        s.origin = "exhaustive";
        add(s);
      } while (std::next_permutation(nest.begin(), nest.end()));
      break;
    }
  }
  return out;
}

std::int64_t max_depth_tile(const LayerShape& layer, std::int64_t span_h, std::int64_t span_w,
                            std::int64_t Tj, const BufferSizes& buffers) {
  if (layer.kind == LayerKind::kDepthwise) {
    const bool ok = span_h * span_w * Tj * layer.bit_ifm <= buffers.ifm * 8 &&
                    layer.P * layer.Q * Tj * layer.bit_wgh <= buffers.wgh * 8;
    return ok ? 1 : 0;
  }
  const std::int64_t by_ifm = buffers.ifm * 8 / (span_h * span_w * layer.bit_ifm);
  const std::int64_t by_wgh = buffers.wgh * 8 / (layer.P * layer.Q * Tj * layer.bit_wgh);
  return std::min({by_ifm, by_wgh, layer.I});
}

LayerPlanResult search_layer(const LayerShape& layer, const SearchConfig& cfg) {
  layer.validate();
  const std::int64_t step_h = cfg.step_Th > 0 ? cfg.step_Th : std::max<std::int64_t>(1, layer.H / 32);
  const std::int64_t step_w = cfg.step_Tw > 0 ? cfg.step_Tw : std::max<std::int64_t>(1, layer.W / 32);
  const std::int64_t step_j = cfg.step_Tj > 0 ? cfg.step_Tj : std::max<std::int64_t>(1, layer.J / 32);
  const std::int64_t dp = cfg.access.chips_per_rank;

  const auto schedules = candidate_schedules(layer, cfg.schedule_mode);
  const std::int64_t halo_h = halo_length(layer.P, layer.str);
  const std::int64_t halo_w = halo_length(layer.Q, layer.str);

  bool found = false;
  std::int64_t best = 0, best_tj = 0;
  LayerPlanResult result;
  std::int64_t evaluated = 0;

  for (const Schedule& sched : schedules) {
    for (std::int64_t th = layer.P; th <= layer.H; th += step_h) {
      if (!stride_aligned(layer.H, th, layer.P, layer.str)) continue;
      const std::int64_t span_h = ifm_axis_grid(layer.H, th, halo_h, layer.P).max_span();
      for (std::int64_t tw = layer.Q; tw <= layer.W; tw += step_w) {
        if (!stride_aligned(layer.W, tw, layer.Q, layer.str)) continue;
        const std::int64_t span_w = ifm_axis_grid(layer.W, tw, halo_w, layer.Q).max_span();

        std::vector<TilingPlan> feasible;
        for (std::int64_t tj = 1; tj <= layer.J; tj += step_j) {
          const std::int64_t ti = max_depth_tile(layer, span_h, span_w, tj, cfg.buffers);
          if (ti < 1) continue;
          TilingPlan plan = build_plan(layer, {th, tw, ti, tj});
          if (!fits(plan, cfg.buffers)) continue;
          if (cfg.tj_rule != TjRule::kFree) feasible.clear();
          feasible.push_back(std::move(plan));
        }

        for (TilingPlan& plan : feasible) {
          ++evaluated;
          const std::int64_t total =
              layer_access_words(plan, sched, dp, cfg.objective_mode).total();
          const std::int64_t tj = plan.factors.Tj;
          const bool take =
              !found || (cfg.tj_rule == TjRule::kMaxFirst
                             ? tj > best_tj || (tj == best_tj && total <= best)
                             : total <= best);
          if (take) {
            found = true;
            best = total;
            best_tj = tj;
            result.plan = std::move(plan);
            result.schedule = sched;
          }
        }
      }
    }
  }
  if (!found)
    throw Infeasible("no tiling of layer '" + layer.name + "' fits the on-chip buffers");
  result.candidates = evaluated;
  result.min_accesses =
      layer_accesses(result.plan, result.schedule, cfg.access, cfg.objective_mode);
  return result;
}

std::vector<LayerPlanResult> search_network(const NetworkModel& net, const SearchConfig& cfg) {
  net.validate();
  std::vector<LayerPlanResult> out;
  out.reserve(net.size());
  for (const auto& layer : net.layers) {
    try {
      out.push_back(search_layer(layer, cfg));
    } catch (const Infeasible& e) {
      throw Infeasible("layer '" + layer.name + "': " + e.what());
    }
  }
  return out;
}

}  // namespace reusemap
