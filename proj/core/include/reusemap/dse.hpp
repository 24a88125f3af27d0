#pragma once

#include <cstdint>
#include <vector>

#include "reusemap/access_model.hpp"
#include "reusemap/net_model.hpp"
#include "reusemap/tiling.hpp"

namespace reusemap {

enum class ScheduleMode {
  kPriority6,    // nests derived from the six reuse priority orders
  kExhaustive24, // every permutation of the four loops
  kWghOfmReuse,  // weight- and output-reuse nests only (baseline scheduler)
};

const char* to_string(ScheduleMode mode);
ScheduleMode parse_schedule_mode(const std::string& s);

// How the filter-set tile is chosen.
enum class TjRule {
  kFree,           // any Tj; accesses alone decide
  kMaxPerSpatial,  // only the largest feasible Tj of each spatial tile
  kMaxFirst,       // the largest feasible Tj overall, then fewest accesses
};

const char* to_string(TjRule r);

struct SearchConfig {
  // 0 selects the default: max(1, H/32) for the spatial steps, max(1, J/32)
  // for the filter-set step.
  std::int64_t step_Th = 0, step_Tw = 0, step_Tj = 0;
  BufferSizes buffers;
  AccessParams access;
  ScheduleMode schedule_mode = ScheduleMode::kPriority6;
  ObjectiveMode objective_mode = ObjectiveMode::kReuseAware;
  TjRule tj_rule = TjRule::kFree;

  // Configuration the baseline scheduler runs with.
  static SearchConfig baseline(const SearchConfig& base);
};

struct LayerPlanResult {
  AccessCounts min_accesses;
  TilingPlan plan;
  Schedule schedule;
  std::int64_t candidates = 0;  // feasible (tiling, nest) pairs evaluated
};

// Fixed table from a reuse priority order to a loop nest.
Schedule nest_for_order(const ReusePriorityOrder& order);

std::vector<Schedule> candidate_schedules(const LayerShape& layer, ScheduleMode mode);

// Largest depth tile for the given spatial/filter tiles that fits the
// ifmap and weight buffers; 0 if none does.
std::int64_t max_depth_tile(const LayerShape& layer, std::int64_t span_h, std::int64_t span_w,
                            std::int64_t Tj, const BufferSizes& buffers);

// Throws Infeasible when not even the minimal tile fits.
LayerPlanResult search_layer(const LayerShape& layer, const SearchConfig& cfg);

// Throws Infeasible naming the offending layer.
std::vector<LayerPlanResult> search_network(const NetworkModel& net, const SearchConfig& cfg);

}  // namespace reusemap
