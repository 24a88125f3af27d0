#include "properties.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "random_cases.hpp"
#include "reusemap/dram_sim.hpp"
#include "reusemap/dse.hpp"
#include "reusemap/energy_model.hpp"
#include "reusemap/trace_gen.hpp"

namespace oracle {

using namespace reusemap;

namespace {

std::string describe(const LayerShape& l, const TilingFactors& f, const std::string& nest) {
  std::ostringstream os;
  os << to_string(l.kind) << " H" << l.H << " W" << l.W << " I" << l.I << " J" << l.J << " P"
     << l.P << " Q" << l.Q << " s" << l.str << " Th" << f.Th << " Tw" << f.Tw << " Ti" << f.Ti
     << " Tj" << f.Tj << ' ' << nest;
  return os.str();
}

std::string describe(const LayerShape& l) { return describe(l, {}, ""); }

}  // namespace

std::string check_axis_grid_coverage(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    const std::int64_t filter = uniform(rng, 1, 7);
    const std::int64_t stride = uniform(rng, 1, filter);
    const std::int64_t full = uniform(rng, filter, 300);
    const std::int64_t halo = halo_length(filter, stride);
    const std::int64_t base = uniform(rng, std::max(filter, halo + 1), full);
    const auto g = ifm_axis_grid(full, base, halo, filter);
    std::ostringstream id;
    id << "full " << full << " base " << base << " filter " << filter << " stride " << stride;
    if (g.fresh_total() != full) return id.str() + ": fresh lengths do not sum to the axis";
    if (g.start.front() != 0 || g.start.back() + g.span.back() != full)
      return id.str() + ": tiles do not span the axis";
    for (std::size_t k = 0; k < g.count(); ++k) {
      if (g.span[k] < filter) return id.str() + ": tile holds no window";
      if (k > 0 && g.start[k - 1] + g.span[k - 1] - g.start[k] != halo)
        return id.str() + ": neighbour overlap differs from the halo";
    }
    const std::int64_t dbase = uniform(rng, 1, full);
    const auto d = depth_axis_grid(full, dbase);
    if (d.fresh_total() != full || static_cast<std::int64_t>(d.count()) != ceil_div(full, dbase))
      return id.str() + ": depth grid does not partition the axis";
  }
  return {};
}

std::string check_model_matches_walk(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng);
    const auto f = random_factors(rng, l);
    const auto nest = random_nest(rng);
    const auto plan = build_plan(l, f);
    for (auto mode : {ObjectiveMode::kReuseAware, ObjectiveMode::kBaseline}) {
      Words ref;
      if (!count_words(l, f, nest, mode == ObjectiveMode::kReuseAware, ref))
        return describe(l, f, nest) + ": reference walk rejected a valid tiling";
      const auto c = layer_access_words(plan, parse_nest(nest), 1, mode);
      if (c.rd_ifm != ref.rd_ifm || c.rd_wgh != ref.rd_wgh || c.rd_ofm != ref.rd_ofm ||
          c.wr_ofm != ref.wr_ofm)
        return describe(l, f, nest) + " " + to_string(mode) + ": model differs from walk";
    }
  }
  return {};
}

std::string check_model_matches_trace(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng);
    const auto f = random_factors(rng, l);
    const auto nest_s = random_nest(rng);
    const auto plan = build_plan(l, f);
    DramGeometry g;
    g.chips_per_rank = uniform(rng, 1, 4);
    g.columns_per_row = std::int64_t{1} << uniform(rng, 4, 10);
    g.rows_per_bank = 4096;
    const auto mode = n % 2 ? ObjectiveMode::kReuseAware : ObjectiveMode::kBaseline;
    const bool burst = (n / 2) % 2 == 0;
    auto alloc = allocate_regions({plan}, g, policy_for(mode));
    TraceCounter counter(burst);
    generate_layer_trace(0, plan, parse_nest(nest_s), alloc, {mode, burst}, counter);
    const auto model = layer_accesses(plan, parse_nest(nest_s), g.access_params(), mode);
    if (!counts_match(model, counter.counts(), burst))
      return describe(l, f, nest_s) + ": trace differs from model";
  }
  return {};
}

std::string check_mapping_injective(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    DramGeometry g;
    g.chips_per_rank = uniform(rng, 1, 4);
    g.banks_per_chip = uniform(rng, 1, 8);
    g.ranks_per_channel = uniform(rng, 1, 2);
    g.rows_per_bank = 16;
    g.columns_per_row = 32;
    const auto policy = n % 2 ? MappingPolicy::kMultiBank : MappingPolicy::kContinuousBank;
    RegionAllocator alloc(g, policy);
    const RegionKey key{0, DataType::kIfm};
    alloc.add_region(key, 0, g.column_slots());
    std::set<PhysicalAddress> seen;
    std::int64_t words = 0;
    for (;;) {
      const std::int64_t elems = uniform(rng, 1, 300);
      const auto& r = alloc.region(key);
      if (r.cursor + ceil_div(elems, g.chips_per_rank) > r.end) break;
      for (const auto& a : map_tile(elems, alloc, key)) {
        if (!in_bounds(a, g)) return "address out of bounds";
        seen.insert(a);
      }
      words += elems;
    }
    if (static_cast<std::int64_t>(seen.size()) != words)
      return std::string("two words share an address under ") + to_string(policy);
  }
  return {};
}

std::string check_search_monotone_in_buffers(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  Limits lim;
  lim.max_hw = 24;
  lim.max_ij = 12;
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng, lim);
    SearchConfig cfg;
    cfg.step_Th = cfg.step_Tw = cfg.step_Tj = 1;
    std::int64_t prev = -1;
    for (std::int64_t quarter_kb : {1, 2, 4, 8, 256}) {
      cfg.buffers = {quarter_kb * 256, quarter_kb * 256, quarter_kb * 256};
      std::int64_t total = 0;
      try {
        total = search_layer(l, cfg).min_accesses.total();
      } catch (const Infeasible&) {
        continue;
      }
      if (prev >= 0 && total > prev)
        return describe(l) + ": larger buffers raised the minimum";
      prev = total;
    }
  }
  return {};
}

std::string check_search_monotone_in_steps(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  Limits lim;
  lim.max_hw = 40;
  lim.max_ij = 16;
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng, lim);
    SearchConfig cfg;
    cfg.buffers = {1024, 1024, 512};
    std::int64_t prev = -1;
    for (std::int64_t step : {1, 2, 4, 8}) {
      cfg.step_Th = cfg.step_Tw = cfg.step_Tj = step;
      std::int64_t total = 0;
      try {
        total = search_layer(l, cfg).min_accesses.total();
      } catch (const Infeasible&) {
        break;
      }
      if (prev >= 0 && total < prev) return describe(l) + ": coarser step lowered the minimum";
      prev = total;
    }
  }
  return {};
}

std::string check_simulator_deterministic(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng);
    const auto f = random_factors(rng, l);
    const auto nest_s = random_nest(rng);
    const auto plan = build_plan(l, f);
    DramGeometry g;
    g.columns_per_row = 64;
    const auto mode = n % 2 ? ObjectiveMode::kReuseAware : ObjectiveMode::kBaseline;
    const bool burst = n % 3 != 0;
    auto alloc = allocate_regions({plan}, g, policy_for(mode));
    const auto trace = generate_layer_trace(0, plan, parse_nest(nest_s), alloc, {mode, burst});
    const DramTiming t;
    const auto a = simulate(trace, g, t);
    const auto b = simulate(trace, g, t);
    const std::string id = describe(l, f, nest_s);
    if (!(a == b)) return id + ": repeated simulation differs";
    if (a.n_act != a.n_miss + a.n_conflict || a.n_pre != a.n_conflict)
      return id + ": command counts disagree with outcomes";
    if (a.n_hit + a.n_miss + a.n_conflict != a.requests() ||
        a.requests() != static_cast<std::int64_t>(trace.requests.size()))
      return id + ": outcomes do not cover every request";
    if (a.total_cycles < a.requests() * (burst ? t.tBL : 1))
      return id + ": faster than the data bus allows";
    const auto e = energy(a, default_params());
    if (std::abs(e.total - (e.act + e.pre + e.rd + e.wr + e.stby)) > 1e-6 * e.total)
      return id + ": energy components do not add up";
  }
  return {};
}

std::string check_halo_and_spill_bounds(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng);
    const auto f = random_factors(rng, l);
    const auto nest_s = random_nest(rng);
    const auto plan = build_plan(l, f);
    const auto nest = parse_nest(nest_s);
    const auto ra = layer_access_words(plan, nest, 1, ObjectiveMode::kReuseAware);
    const auto bl = layer_access_words(plan, nest, 1, ObjectiveMode::kBaseline);
    const std::string id = describe(l, f, nest_s);
    if (ra.rd_ifm > bl.rd_ifm) return id + ": halo reuse added ifmap reads";
    if (ra.rd_wgh != bl.rd_wgh || ra.rd_ofm != bl.rd_ofm || ra.wr_ofm != bl.wr_ofm)
      return id + ": halo reuse changed weight or output traffic";
    if (nest_s.back() == 'i' && ra.rd_ofm != 0) return id + ": depth innermost spilled psums";
  }
  return {};
}

std::string check_priority_permutation(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  Limits lim;
  lim.max_hw = 64;
  lim.max_ij = 64;
  for (int n = 0; n < cases; ++n) {
    const auto l = random_layer(rng, lim);
    const auto o = reuse_priority_order(l);
    if (std::set<DataType>(o.order.begin(), o.order.end()).size() != 3)
      return describe(l) + ": priority order is not a permutation";
  }
  return {};
}

}  // namespace oracle
