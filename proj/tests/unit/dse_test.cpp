#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "reusemap/dse.hpp"
#include "reusemap/errors.hpp"

using namespace reusemap;

namespace {

LayerShape toy() {
  LayerShape l;
  l.name = "toy";
  l.H = l.W = 8;
  l.I = 4;
  l.P = l.Q = 3;
  l.J = 4;
  return l;
}

SearchConfig unit_steps(ScheduleMode mode = ScheduleMode::kExhaustive24) {
  SearchConfig cfg;
  cfg.step_Th = cfg.step_Tw = cfg.step_Tj = 1;
  cfg.schedule_mode = mode;
  return cfg;
}

}  // namespace

TEST(CandidateSchedules, Priority6DeduplicatesToFour) {
  const auto s = candidate_schedules(toy(), ScheduleMode::kPriority6);
  std::set<std::string> nests;
  for (const auto& x : s) nests.insert(nest_string(x));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(nests, (std::set<std::string>{"hwij", "hwji", "jihw", "jhwi"}));
}

TEST(CandidateSchedules, Exhaustive24) {
  const auto s = candidate_schedules(toy(), ScheduleMode::kExhaustive24);
  std::set<std::string> nests;
  for (const auto& x : s) nests.insert(nest_string(x));
  EXPECT_EQ(nests.size(), 24u);
}

TEST(CandidateSchedules, BaselineNests) {
  const auto s = candidate_schedules(toy(), ScheduleMode::kWghOfmReuse);
  std::set<std::string> nests;
  for (const auto& x : s) nests.insert(nest_string(x));
  EXPECT_EQ(nests, (std::set<std::string>{"jihw", "jhwi", "hwji"}));
}

TEST(NestForOrder, Table) {
  using D = DataType;
  EXPECT_EQ(nest_string(nest_for_order({{D::kOfm, D::kIfm, D::kWgh}})), "hwji");
  EXPECT_EQ(nest_string(nest_for_order({{D::kIfm, D::kWgh, D::kOfm}})), "hwij");
  EXPECT_EQ(nest_string(nest_for_order({{D::kWgh, D::kIfm, D::kOfm}})), "jihw");
  EXPECT_EQ(nest_string(nest_for_order({{D::kWgh, D::kOfm, D::kIfm}})), "jhwi");
  EXPECT_EQ(nest_string(nest_for_order({{D::kOfm, D::kWgh, D::kIfm}})), "jhwi");
}

TEST(ScheduleMode, ParseRoundTrip) {
  for (auto m : {ScheduleMode::kPriority6, ScheduleMode::kExhaustive24, ScheduleMode::kWghOfmReuse})
    EXPECT_EQ(parse_schedule_mode(to_string(m)), m);
  EXPECT_THROW(parse_schedule_mode("all"), InvalidArgument);
}

TEST(MaxDepthTile, BoundByBothBuffers) {
  const LayerShape l = toy();
  BufferSizes b;
  b.ifm = 8 * 8 * 2 * 2;  // two channels of the full plane
  b.wgh = 1 << 20;
  EXPECT_EQ(max_depth_tile(l, 8, 8, 4, b), 2);
  b.ifm = 1 << 20;
  b.wgh = 3 * 3 * 4 * 3 * 2;  // three channels of four filters
  EXPECT_EQ(max_depth_tile(l, 8, 8, 4, b), 3);
  b.wgh = 10;
  EXPECT_EQ(max_depth_tile(l, 8, 8, 4, b), 0);
}

TEST(SearchLayer, ToyFitsInOneTile) {
  const auto r = search_layer(toy(), unit_steps(ScheduleMode::kPriority6));
  EXPECT_EQ(r.min_accesses.total(), 544);
  EXPECT_EQ(r.min_accesses.rd_ifm, 256);
  EXPECT_EQ(r.min_accesses.rd_wgh, 144);
  EXPECT_EQ(r.min_accesses.wr_ofm, 144);
  EXPECT_EQ(r.min_accesses.rd_ofm, 0);
  EXPECT_GT(r.candidates, 0);
}

TEST(SearchLayer, TightBuffersMatchBruteForce) {
  SearchConfig cfg = unit_steps();
  cfg.buffers = {384, 384, 384};
  const auto r = search_layer(toy(), cfg);
  const auto ref = oracle::brute_force_min(toy(), cfg.buffers, true);
  ASSERT_GT(ref.total, 0);
  EXPECT_EQ(r.min_accesses.total(), ref.total);
  EXPECT_TRUE(fits(r.plan, cfg.buffers));
}

TEST(SearchLayer, BaselineTightBuffersMatchBruteForceWithoutHalos) {
  SearchConfig cfg = unit_steps();
  cfg.buffers = {384, 384, 384};
  cfg.objective_mode = ObjectiveMode::kBaseline;
  const auto r = search_layer(toy(), cfg);
  EXPECT_EQ(r.min_accesses.total(), oracle::brute_force_min(toy(), cfg.buffers, false).total);
}

TEST(SearchLayer, InfeasibleWhenOutputBufferTooSmall) {
  SearchConfig cfg = unit_steps();
  cfg.buffers.ofm = 1;
  EXPECT_THROW(search_layer(toy(), cfg), Infeasible);
}

TEST(SearchLayer, BaselineConfigPicksLargestFilterTile) {
  SearchConfig cfg = SearchConfig::baseline(unit_steps());
  cfg.buffers = {384, 384, 384};
  EXPECT_EQ(cfg.schedule_mode, ScheduleMode::kWghOfmReuse);
  EXPECT_EQ(cfg.objective_mode, ObjectiveMode::kBaseline);
  EXPECT_EQ(cfg.tj_rule, TjRule::kMaxFirst);
  // The minimal 3x3 spatial tile admits every filter-set size here.
  EXPECT_EQ(search_layer(toy(), cfg).plan.factors.Tj, 4);
}

TEST(SearchLayer, ReturnedPlanAlwaysFits) {
  SearchConfig cfg = unit_steps(ScheduleMode::kPriority6);
  cfg.buffers = {1024, 512, 256};
  LayerShape l = toy();
  l.H = l.W = 14;
  l.J = 6;
  const auto r = search_layer(l, cfg);
  EXPECT_TRUE(fits(r.plan, cfg.buffers));
  const auto fp = buffer_footprint(r.plan);
  EXPECT_LE(fp.bytes_ifm, 1024);
  EXPECT_LE(fp.bytes_wgh, 512);
  EXPECT_LE(fp.bytes_ofm, 256);
}

TEST(SearchLayer, Deterministic) {
  SearchConfig cfg = unit_steps(ScheduleMode::kPriority6);
  cfg.buffers = {512, 512, 512};
  const auto a = search_layer(toy(), cfg);
  const auto b = search_layer(toy(), cfg);
  EXPECT_EQ(a.plan.factors, b.plan.factors);
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_TRUE(a.min_accesses.same_totals(b.min_accesses));
}

TEST(SearchLayer, CoarserStepsSearchASubset) {
  LayerShape l = toy();
  l.H = l.W = 23;
  l.J = 16;
  SearchConfig fine = unit_steps(ScheduleMode::kPriority6);
  fine.buffers = {2048, 2048, 2048};
  SearchConfig coarse = fine;
  coarse.step_Th = coarse.step_Tw = coarse.step_Tj = 2;
  const auto f = search_layer(l, fine);
  const auto c = search_layer(l, coarse);
  EXPECT_LT(c.candidates, f.candidates);
  EXPECT_LE(f.min_accesses.total(), c.min_accesses.total());
}

TEST(SearchNetwork, SingleLayerEqualsSearchLayer) {
  NetworkModel net{"one", {toy()}};
  const auto cfg = unit_steps(ScheduleMode::kPriority6);
  const auto rs = search_network(net, cfg);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].min_accesses.total(), search_layer(toy(), cfg).min_accesses.total());
}

TEST(SearchNetwork, InfeasibleNamesTheLayer) {
  LayerShape big = toy();
  big.name = "huge";
  big.P = big.Q = 8;
  big.I = 1;
  SearchConfig cfg = unit_steps();
  cfg.buffers = {64, 64, 64};
  NetworkModel net{"n", {toy(), big}};
  try {
    search_network(net, cfg);
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_NE(std::string(e.what()).find("huge"), std::string::npos);
  }
}
