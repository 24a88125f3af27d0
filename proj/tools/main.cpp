#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reusemap/config.hpp"
#include "reusemap/errors.hpp"
#include "reusemap/pipeline.hpp"
#include "reusemap/trace_gen.hpp"

namespace fs = std::filesystem;
using namespace reusemap;

namespace {

struct Common {
  std::string net, hw, mode = "reuse-aware", steps, out, plans;
  bool burst = true;
};

void add_common(CLI::App* cmd, Common& c, bool with_mode, bool with_plans) {
  cmd->add_option("--net", c.net, "network JSON file")->required();
  cmd->add_option("--hw", c.hw, "hardware JSON file (built-in defaults otherwise)");
  if (with_mode)
    cmd->add_option("--mode", c.mode, "reuse-aware | baseline")
        ->check(CLI::IsMember({"reuse-aware", "baseline"}));
  cmd->add_flag("--burst,!--no-burst", c.burst, "burst (BL) requests or one word per request");
  cmd->add_option("--steps", c.steps, "search step: N, or Th,Tw,Tj");
  cmd->add_option("--out", c.out, "output file or directory (stdout if omitted)");
  if (with_plans) cmd->add_option("--plans", c.plans, "plans file from `dse` instead of searching");
}

SearchSteps parse_steps(const std::string& s) {
  if (s.empty()) return {};
  std::vector<std::int64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw InvalidArgument("bad --steps value '" + s + "'");
    }
  }
  for (auto x : v)
    if (x < 1) throw InvalidArgument("--steps values must be >= 1");
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw InvalidArgument("--steps takes one value or Th,Tw,Tj");
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
  if (v.empty()) throw InvalidArgument("empty value list");
  return v;
}

HardwareConfig hardware(const Common& c) {
  return c.hw.empty() ? HardwareConfig{} : load_hardware(c.hw);
}

// Writes to --out or stdout.
template <typename F>
void emit(const std::string& out, F&& f) {
  if (out.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream os(out);
  if (!os) throw ConfigError("cannot write '" + out + "'");
  f(os);
}

std::vector<LayerPlanResult> plans_for(const Common& c, const NetworkModel& net,
                                       const HardwareConfig& hw, ObjectiveMode mode) {
  if (!c.plans.empty()) {
    PlansFile f = load_plans(c.plans);
    if (f.mode != mode)
      throw ConfigError("plans file was searched in " + std::string(to_string(f.mode)) +
                        " mode");
    return plans_from_file(net, f, hw);
  }
  return run_dse(net, hw, mode, parse_steps(c.steps));
}

int cmd_dse(const Common& c) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  const auto mode = parse_objective_mode(c.mode);
  const auto steps = parse_steps(c.steps);
  const auto results = run_dse(net, hw, mode, steps);
  const auto file = make_plans_file(net, results, mode, config_hash(net, hw, mode, c.burst, steps));
  emit(c.out, [&](std::ostream& os) { os << plans_to_json(file) << '\n'; });
  return 0;
}

int cmd_trace(const Common& c, const std::string& layer) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  const auto mode = parse_objective_mode(c.mode);
  const auto plans = plans_for(c, net, hw, mode);
  std::vector<TilingPlan> tp;
  for (const auto& p : plans) tp.push_back(p.plan);
  RegionAllocator alloc = allocate_regions(tp, hw.dram, policy_for(mode));
  bool found = layer.empty();
  emit(c.out, [&](std::ostream& os) {
    os << "# reusemap trace " << (c.burst ? "burst" : "nonburst") << '\n';
    TraceWriter writer(os);
    for (std::size_t l = 0; l < plans.size(); ++l) {
      if (!layer.empty() && net.layers[l].name != layer) continue;
      found = true;
      generate_layer_trace(static_cast<std::int32_t>(l), plans[l].plan, plans[l].schedule, alloc,
                           {mode, c.burst}, writer);
    }
  });
  if (!found) throw ConfigError("no layer named '" + layer + "'");
  return 0;
}

int cmd_sim(const Common& c) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  const auto mode = parse_objective_mode(c.mode);
  NetworkRun run = simulate_network(net, plans_for(c, net, hw, mode), hw, mode, c.burst);
  run.config_hash = config_hash(net, hw, mode, c.burst, parse_steps(c.steps));
  emit(c.out, [&](std::ostream& os) { write_layer_csv(os, {&run}); });
  return 0;
}

int cmd_compare(const Common& c) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  const auto rep = run_compare(net, hw, c.burst, parse_steps(c.steps));
  const auto ref = load_reference(c.net);
  if (c.out.empty()) {
    write_reduction_csv(std::cout, rep, ref);
    return 0;
  }
  fs::create_directories(c.out);
  emit((fs::path(c.out) / "layers.csv").string(),
       [&](std::ostream& os) { write_layer_csv(os, {&rep.reuse_aware, &rep.baseline}); });
  emit((fs::path(c.out) / "reductions.csv").string(),
       [&](std::ostream& os) { write_reduction_csv(os, rep, ref); });
  write_reduction_csv(std::cout, rep, ref);
  return 0;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::string& values) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  emit(c.out, [&](std::ostream& os) {
    run_sweep(os, net, hw, parse_sweep_axis(axis), parse_list(values), c.burst,
              parse_steps(c.steps));
  });
  return 0;
}

int cmd_report(const Common& c) {
  const auto net = load_network(c.net);
  const auto hw = hardware(c);
  std::vector<LayerPlanResult> plans;
  if (!c.plans.empty()) plans = plans_from_file(net, load_plans(c.plans), hw);
  emit(c.out, [&](std::ostream& os) {
    os << "layer,kind,H,W,I,P,Q,J,str,M,N,rf_ifm,rf_wgh,rf_ofm,priority,nest,Th,Tw,Ti,Tj,"
          "predicted_accesses\n";
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      const auto& L = net.layers[l];
      const auto d = output_dims(L);
      const auto rf = reuse_factors(L);
      os << L.name << ',' << to_string(L.kind) << ',' << L.H << ',' << L.W << ',' << L.I << ','
         << L.P << ',' << L.Q << ',' << L.J << ',' << L.str << ',' << d.M << ',' << d.N << ','
         << rf.rf_ifm << ',' << rf.rf_wgh << ',' << rf.rf_ofm << ','
         << to_string(reuse_priority_order(L));
      if (l < plans.size()) {
        const auto& p = plans[l];
        os << ',' << nest_string(p.schedule) << ',' << p.plan.factors.Th << ','
           << p.plan.factors.Tw << ',' << p.plan.factors.Ti << ',' << p.plan.factors.Tj << ','
           << p.min_accesses.total();
      } else {
        os << ",,,,,,";
      }
      os << '\n';
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DRAM access planning and simulation for CNN accelerator layers"};
  app.require_subcommand(1);

  Common c;
  std::string layer, axis, values;

  auto* dse = app.add_subcommand("dse", "search tilings and loop nests, write a plans file");
  add_common(dse, c, true, false);
  auto* trace = app.add_subcommand("trace", "write the DRAM request trace");
  add_common(trace, c, true, true);
  trace->add_option("--layer", layer, "only this layer");
  auto* sim = app.add_subcommand("sim", "simulate the trace, write per-layer stats CSV");
  add_common(sim, c, true, true);
  auto* compare = app.add_subcommand("compare", "run both modes and report reductions");
  add_common(compare, c, false, false);
  auto* sweep = app.add_subcommand("sweep", "repeat compare over one parameter");
  add_common(sweep, c, false, false);
  sweep->add_option("--axis", axis, "buffer | step | bl")->required();
  sweep->add_option("--values", values, "comma separated values (buffer in KB)")->required();
  auto* report = app.add_subcommand("report", "per-layer shape, reuse and plan summary");
  add_common(report, c, false, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (dse->parsed()) return cmd_dse(c);
    if (trace->parsed()) return cmd_trace(c, layer);
    if (sim->parsed()) return cmd_sim(c);
    if (compare->parsed()) return cmd_compare(c);
    if (sweep->parsed()) return cmd_sweep(c, axis, values);
    if (report->parsed()) return cmd_report(c);
  } catch (const std::exception& e) {
    std::cerr << "reusemap: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
