#include "reusemap/pipeline.hpp"

#include <ostream>
#include <sstream>

#include "reusemap/dram_map.hpp"
#include "reusemap/errors.hpp"
#include "reusemap/trace_gen.hpp"

namespace reusemap {

SearchConfig search_config(const HardwareConfig& hw, ObjectiveMode mode,
                           const SearchSteps& steps) {
  SearchConfig c;
  c.step_Th = steps.Th;
  c.step_Tw = steps.Tw;
  c.step_Tj = steps.Tj;
  c.buffers = hw.buffers;
  c.access = hw.dram.access_params();
  return mode == ObjectiveMode::kBaseline ? SearchConfig::baseline(c) : c;
}

std::string config_hash(const NetworkModel& net, const HardwareConfig& hw, ObjectiveMode mode,
                        bool burst, const SearchSteps& steps) {
  std::ostringstream ss;
  ss << network_to_json(net) << hardware_to_json(hw) << to_string(mode) << (burst ? 1 : 0) << ' '
     << steps.Th << ' ' << steps.Tw << ' ' << steps.Tj;
  return fnv1a_hex(ss.str());
}

std::vector<LayerPlanResult> run_dse(const NetworkModel& net, const HardwareConfig& hw,
                                     ObjectiveMode mode, const SearchSteps& steps) {
  return search_network(net, search_config(hw, mode, steps));
}

PlansFile make_plans_file(const NetworkModel& net, const std::vector<LayerPlanResult>& results,
                          ObjectiveMode mode, const std::string& hash) {
  PlansFile f;
  f.network = net.name;
  f.mode = mode;
  f.config_hash = hash;
  for (std::size_t l = 0; l < results.size(); ++l)
    f.layers.push_back({net.layers[l].name, results[l].plan.factors, results[l].schedule,
                        results[l].min_accesses});
  return f;
}

std::vector<LayerPlanResult> plans_from_file(const NetworkModel& net, const PlansFile& file,
                                             const HardwareConfig& hw) {
  if (file.layers.size() != net.layers.size())
    throw ConfigError("plans file has " + std::to_string(file.layers.size()) +
                      " layers, network has " + std::to_string(net.layers.size()));
  std::vector<LayerPlanResult> out;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& rec = file.layers[l];
    if (rec.layer != net.layers[l].name)
      throw ConfigError("plans file layer '" + rec.layer + "' does not match '" +
                        net.layers[l].name + "'");
    LayerPlanResult r;
    try {
      r.plan = build_plan(net.layers[l], rec.factors);
    } catch (const InvalidArgument& e) {
      throw ConfigError("layer '" + rec.layer + "': " + e.what());
    }
    if (!fits(r.plan, hw.buffers))
      throw ConfigError("layer '" + rec.layer + "': planned tiles exceed the buffers");
    r.schedule = rec.schedule;
    r.min_accesses = layer_accesses(r.plan, r.schedule, hw.dram.access_params(), file.mode);
    out.push_back(std::move(r));
  }
  return out;
}

NetworkRun simulate_network(const NetworkModel& net, const std::vector<LayerPlanResult>& plans,
                            const HardwareConfig& hw, ObjectiveMode mode, bool burst) {
  std::vector<TilingPlan> tp;
  for (const auto& p : plans) tp.push_back(p.plan);
  RegionAllocator alloc = allocate_regions(tp, hw.dram, policy_for(mode));

  NetworkRun run;
  run.network = net.name;
  run.mode = mode;
  run.burst = burst;
  run.stats.clock_mhz = hw.timing.clock_mhz;
  for (std::size_t l = 0; l < plans.size(); ++l) {
    TraceCounter counter(burst);
    Simulator sim(hw.dram, hw.timing, burst);
    TeeSink tee({&counter, &sim});
    generate_layer_trace(static_cast<std::int32_t>(l), plans[l].plan, plans[l].schedule, alloc,
                         {mode, burst}, tee);
    LayerRun lr;
    lr.name = net.layers[l].name;
    lr.plan = plans[l];
    lr.traced = counter.counts();
    lr.stats = sim.stats();
    lr.energy = energy(lr.stats, hw.energy);
    run.accesses += lr.traced;
    run.stats += lr.stats;
    run.energy += lr.energy;
    run.energy.by_layer.emplace_back(lr.name, lr.energy);
    run.layers.push_back(std::move(lr));
  }
  return run;
}

NetworkRun run_mode(const NetworkModel& net, const HardwareConfig& hw, ObjectiveMode mode,
                    bool burst, const SearchSteps& steps) {
  NetworkRun run = simulate_network(net, run_dse(net, hw, mode, steps), hw, mode, burst);
  run.config_hash = config_hash(net, hw, mode, burst, steps);
  return run;
}

double reduction_pct(double reuse_aware, double baseline) {
  if (baseline == 0) return 0;
  return 100.0 * (baseline - reuse_aware) / baseline;
}

const Reduction& CompareReport::reduction(const std::string& metric) const {
  for (const auto& r : reductions)
    if (r.metric == metric) return r;
  throw InvalidArgument("no metric '" + metric + "' in the report");
}

CompareReport compare_runs(NetworkRun ra, NetworkRun bl) {
  CompareReport rep;
  const auto add = [&](std::string metric, double a, double b) {
    rep.reductions.push_back({std::move(metric), a, b, reduction_pct(a, b)});
  };
  const auto d = [](std::int64_t v) { return static_cast<double>(v); };
  add("accesses", d(ra.accesses.total()), d(bl.accesses.total()));
  add("requests", d(ra.stats.requests()), d(bl.stats.requests()));
  add("conflicts_misses", d(ra.stats.n_conflict + ra.stats.n_miss),
      d(bl.stats.n_conflict + bl.stats.n_miss));
  add("conflicts", d(ra.stats.n_conflict), d(bl.stats.n_conflict));
  add("misses", d(ra.stats.n_miss), d(bl.stats.n_miss));
  add("cycles", d(ra.stats.total_cycles), d(bl.stats.total_cycles));
  add("energy", ra.energy.total, bl.energy.total);
  const double ta = effective_throughput(ra.stats), tb = effective_throughput(bl.stats);
  rep.reductions.push_back({"throughput_gain", ta, tb, -reduction_pct(ta, tb)});
  rep.reuse_aware = std::move(ra);
  rep.baseline = std::move(bl);
  return rep;
}

CompareReport run_compare(const NetworkModel& net, const HardwareConfig& hw, bool burst,
                          const SearchSteps& steps) {
  return compare_runs(run_mode(net, hw, ObjectiveMode::kReuseAware, burst, steps),
                      run_mode(net, hw, ObjectiveMode::kBaseline, burst, steps));
}

namespace {

void layer_row(std::ostream& os, const NetworkRun& run, const std::string& layer,
               const std::string& nest, const AccessCounts& c, const SimStats& s,
               const EnergyReport& e) {
  os << run.config_hash << ',' << run.network << ',' << layer << ',' << to_string(run.mode) << ','
     << (run.burst ? "burst" : "nonburst") << ',' << nest << ',' << c.rd_ifm << ',' << c.rd_wgh
     << ',' << c.rd_ofm << ',' << c.wr_ofm << ',' << c.total() << ',' << s.requests() << ','
     << s.n_hit << ',' << s.n_miss << ',' << s.n_conflict << ',' << s.n_act << ',' << s.n_pre
     << ',' << s.n_rd << ',' << s.n_wr << ',' << s.total_cycles << ',' << e.act << ',' << e.pre
     << ',' << e.rd << ',' << e.wr << ',' << e.stby << ',' << e.total << ','
     << effective_throughput(s) << '\n';
}

}  // namespace

void write_layer_csv(std::ostream& os, const std::vector<const NetworkRun*>& runs) {
  os << "config_hash,network,layer,mode,access,nest,rd_ifm,rd_wgh,rd_ofm,wr_ofm,accesses,"
        "requests,n_hit,n_miss,n_conflict,n_act,n_pre,n_rd,n_wr,cycles,e_act_pj,e_pre_pj,"
        "e_rd_pj,e_wr_pj,e_stby_pj,e_total_pj,throughput_bytes_per_s\n";
  for (const NetworkRun* run : runs) {
    for (const auto& l : run->layers)
      layer_row(os, *run, l.name, nest_string(l.plan.schedule), l.traced, l.stats, l.energy);
    layer_row(os, *run, "total", "-", run->accesses, run->stats, run->energy);
  }
}

void write_reduction_csv(std::ostream& os, const CompareReport& rep,
                         const std::map<std::string, double>& reference) {
  os << "config_hash,network,access,metric,reuse_aware,baseline,reduction_pct,reference_pct\n";
  for (const auto& r : rep.reductions) {
    os << rep.reuse_aware.config_hash << ',' << rep.reuse_aware.network << ','
       << (rep.reuse_aware.burst ? "burst" : "nonburst") << ',' << r.metric << ','
       << r.reuse_aware << ',' << r.baseline << ',' << r.pct << ',';
    auto it = reference.find(r.metric);
    if (it != reference.end()) os << it->second;
    os << '\n';
  }
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "buffer") return SweepAxis::kBuffer;
  if (s == "step") return SweepAxis::kStep;
  if (s == "bl") return SweepAxis::kBurstLength;
  throw InvalidArgument("unknown sweep axis '" + s + "' (expected buffer|step|bl)");
}

void run_sweep(std::ostream& csv, const NetworkModel& net, const HardwareConfig& hw,
               SweepAxis axis, const std::vector<std::int64_t>& values, bool burst,
               const SearchSteps& steps) {
  csv << "config_hash,axis,value,mode,accesses,requests,n_hit,n_miss,n_conflict,cycles,"
         "energy_pj,throughput_bytes_per_s\n";
  const char* axis_name = axis == SweepAxis::kBuffer ? "buffer_kb"
                          : axis == SweepAxis::kStep ? "step"
                                                     : "burst_length";
  for (std::int64_t v : values) {
    HardwareConfig h = hw;
    SearchSteps st = steps;
    switch (axis) {
      case SweepAxis::kBuffer:
        h.buffers = {v * 1024, v * 1024, v * 1024};
        break;
      case SweepAxis::kStep:
        st = {v, v, v};
        break;
      case SweepAxis::kBurstLength:
        h.dram.burst_length = v;
        h.timing.tBL = std::max<std::int64_t>(1, v / 2);
        break;
    }
    const CompareReport rep = run_compare(net, h, burst, st);
    for (const NetworkRun* run : {&rep.reuse_aware, &rep.baseline}) {
      const auto& s = run->stats;
      csv << run->config_hash << ',' << axis_name << ',' << v << ',' << to_string(run->mode)
          << ',' << run->accesses.total() << ',' << s.requests() << ',' << s.n_hit << ','
          << s.n_miss << ',' << s.n_conflict << ',' << s.total_cycles << ','
          << run->energy.total << ',' << effective_throughput(s) << '\n';
    }
  }
}

}  // namespace reusemap
