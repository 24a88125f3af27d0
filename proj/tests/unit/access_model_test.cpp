#include <gtest/gtest.h>

#include "oracle.hpp"
#include "reusemap/access_model.hpp"
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

LoopTrips trips(std::int64_t h, std::int64_t w, std::int64_t j, std::int64_t i) {
  return {h, w, j, i};
}

oracle::Words reference(const TilingPlan& p, const std::string& nest, ObjectiveMode mode) {
  oracle::Words w;
  EXPECT_TRUE(oracle::count_words(p.layer, p.factors, nest, mode == ObjectiveMode::kReuseAware, w));
  return w;
}

}  // namespace

TEST(AccessesPerTile, CeilDivByChips) {
  EXPECT_EQ(accesses_per_tile(4 * 4 * 2, 1), 32);
  EXPECT_EQ(accesses_per_tile(4 * 4 * 2, 8), 4);
  EXPECT_EQ(accesses_per_tile(33, 8), 5);
  EXPECT_EQ(accesses_per_tile(2 * 2 * 4, 1), 16);
}

TEST(Schedule, ParseAndPrint) {
  EXPECT_EQ(nest_string(parse_nest("jihw")), "jihw");
  EXPECT_THROW(parse_nest("hwj"), InvalidArgument);
  EXPECT_THROW(parse_nest("hwjj"), InvalidArgument);
  EXPECT_THROW(parse_nest("hwjx"), InvalidArgument);
  EXPECT_EQ(parse_nest("ijhw").position(Loop::kW), 3);
}

TEST(FetchMultiplicity, Examples) {
  const auto t = trips(3, 4, 2, 5);
  EXPECT_EQ(fetch_multiplicity(DataType::kWgh, parse_nest("hwji"), t), 12);
  EXPECT_EQ(fetch_multiplicity(DataType::kIfm, parse_nest("hwij"), t), 1);
  EXPECT_EQ(fetch_multiplicity(DataType::kWgh, parse_nest("jihw"), t), 1);
  EXPECT_EQ(fetch_multiplicity(DataType::kIfm, parse_nest("jihw"), t), 2);
  EXPECT_EQ(fetch_multiplicity(DataType::kOfm, parse_nest("ihwj"), t), 5);
}

TEST(FetchMultiplicity, IndexingLoopsWithOneTripDoNotPinResidency) {
  // i is the only ifmap loop that iterates; j sits outside it.
  EXPECT_EQ(fetch_multiplicity(DataType::kIfm, parse_nest("hjwi"), trips(1, 1, 3, 2)), 3);
  // Nothing indexing the weights iterates: one fetch for the whole layer.
  EXPECT_EQ(fetch_multiplicity(DataType::kWgh, parse_nest("hwji"), trips(4, 4, 1, 1)), 1);
}

TEST(FetchMultiplicity, DepthwiseIfmFollowsFilterLoop) {
  const auto t = trips(2, 2, 3, 1);
  EXPECT_EQ(fetch_multiplicity(DataType::kIfm, parse_nest("jhwi"), t, LayerKind::kDepthwise), 1);
  EXPECT_EQ(fetch_multiplicity(DataType::kIfm, parse_nest("jhwi"), t, LayerKind::kConv), 3);
}

TEST(OfmTraffic, DepthInnermostWritesOnce) {
  const auto p = build_plan(toy(), {8, 8, 2, 4});
  EXPECT_EQ(ofm_traffic(parse_nest("hwji"), p, 1), (OfmTraffic{0, 144}));
}

TEST(OfmTraffic, DepthOutermostSpillsEveryEpisode) {
  LayerShape l = toy();
  l.H = 6;
  l.W = 4;
  l.I = 3;
  // Two 2x2x4 output tiles along h, three depth tiles outside them.
  const auto p = build_plan(l, {4, 4, 1, 4});
  ASSERT_EQ(p.ofm_m.span, (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(ofm_traffic(parse_nest("ihwj"), p, 1), (OfmTraffic{2 * 32, 2 * 48}));
}

TEST(OfmTraffic, SingleDepthTileNeverReadsBack) {
  const auto p = build_plan(toy(), {5, 5, 4, 2});
  for (const auto& nest : oracle::all_nests())
    EXPECT_EQ(ofm_traffic(parse_nest(nest), p, 1).rd, 0) << nest;
}

TEST(LayerAccesses, ToySingleTileAnyNest) {
  const auto p = build_plan(toy(), {8, 8, 4, 4});
  for (const auto& nest : oracle::all_nests()) {
    const auto c = layer_accesses(p, parse_nest(nest), {}, ObjectiveMode::kReuseAware);
    EXPECT_EQ(c.rd_ifm, 256) << nest;
    EXPECT_EQ(c.rd_wgh, 144) << nest;
    EXPECT_EQ(c.wr_ofm, 144) << nest;
    EXPECT_EQ(c.rd_ofm, 0) << nest;
    EXPECT_EQ(c.requests_nonburst, 544) << nest;
    EXPECT_EQ(c.requests_burst, 32 + 18 + 18) << nest;
  }
}

TEST(LayerAccesses, ToyDepthSplitDepthInnermost) {
  const auto p = build_plan(toy(), {8, 8, 2, 4});
  const auto c = layer_accesses(p, parse_nest("hwji"), {}, ObjectiveMode::kReuseAware);
  EXPECT_EQ(c.rd_wgh, 144);
  EXPECT_EQ(c.rd_ofm, 0);
}

TEST(LayerAccesses, ToyDepthSplitFilterInnermostMatchesOracle) {
  const auto p = build_plan(toy(), {8, 8, 2, 2});
  const auto c = layer_accesses(p, parse_nest("hwij"), {}, ObjectiveMode::kReuseAware);
  const auto ref = reference(p, "hwij", ObjectiveMode::kReuseAware);
  EXPECT_EQ(c.rd_ifm, ref.rd_ifm);
  EXPECT_EQ(c.rd_wgh, ref.rd_wgh);
  EXPECT_EQ(c.rd_ofm, ref.rd_ofm);
  EXPECT_EQ(c.wr_ofm, ref.wr_ofm);
  // Output tiles are visited once per depth tile: two episodes each.
  EXPECT_EQ(c.wr_ofm, 2 * 144);
  EXPECT_EQ(c.rd_ofm, 144);
}

TEST(LayerAccesses, HaloReuseOnlyInReuseAwareMode) {
  LayerShape l = toy();
  l.H = l.W = 16;
  const auto p = build_plan(l, {6, 6, 4, 4});
  const auto nest = parse_nest("jihw");
  const auto ra = layer_accesses(p, nest, {}, ObjectiveMode::kReuseAware);
  const auto bl = layer_accesses(p, nest, {}, ObjectiveMode::kBaseline);
  EXPECT_LT(ra.rd_ifm, bl.rd_ifm);
  EXPECT_EQ(ra.rd_wgh, bl.rd_wgh);
  EXPECT_EQ(ra.wr_ofm, bl.wr_ofm);
  EXPECT_EQ(ra.rd_ifm, reference(p, "jihw", ObjectiveMode::kReuseAware).rd_ifm);
  EXPECT_EQ(bl.rd_ifm, reference(p, "jihw", ObjectiveMode::kBaseline).rd_ifm);
}

TEST(LayerAccesses, WordsOnlyPathAgreesWithFullCount) {
  LayerShape l = toy();
  l.H = l.W = 13;
  l.I = 5;
  l.J = 6;
  const auto p = build_plan(l, {5, 4, 2, 4});
  for (const auto& nest : oracle::all_nests())
    for (auto mode : {ObjectiveMode::kReuseAware, ObjectiveMode::kBaseline})
      for (std::int64_t dp : {1, 3}) {
        AccessParams ap;
        ap.chips_per_rank = dp;
        const auto full = layer_accesses(p, parse_nest(nest), ap, mode);
        const auto fast = layer_access_words(p, parse_nest(nest), dp, mode);
        EXPECT_EQ(full.total(), fast.total()) << nest;
        EXPECT_EQ(full.rd_ifm, fast.rd_ifm) << nest;
      }
}

TEST(LayerAccesses, PerTileBreakdownSumsToTotals) {
  LayerShape l = toy();
  l.H = l.W = 12;
  const auto p = build_plan(l, {5, 5, 2, 3});
  const auto c = layer_accesses(p, parse_nest("iwjh"), {}, ObjectiveMode::kReuseAware);
  std::int64_t words = 0;
  for (const auto& t : c.per_tile) words += t.words;
  EXPECT_EQ(words, c.total());
  EXPECT_EQ(static_cast<std::int64_t>(c.per_tile.size()),
            tile_count(p, DataType::kIfm) + tile_count(p, DataType::kWgh) +
                tile_count(p, DataType::kOfm));
}

TEST(FirstFetchOrder, FollowsNest) {
  LayerShape l = toy();
  l.H = l.W = 10;
  const auto p = build_plan(l, {6, 6, 4, 4});  // 2 x 2 spatial tiles
  ASSERT_EQ(p.trip(Loop::kH), 2);
  // Canonical id = h * 2 + w for the single depth tile.
  EXPECT_EQ(first_fetch_order(p, parse_nest("hwji"), DataType::kIfm),
            (std::vector<std::int64_t>{0, 1, 2, 3}));
  EXPECT_EQ(first_fetch_order(p, parse_nest("whji"), DataType::kIfm),
            (std::vector<std::int64_t>{0, 2, 1, 3}));
}

TEST(NetworkAccesses, SumsLayers) {
  const auto p = build_plan(toy(), {8, 8, 4, 4});
  const auto c = layer_accesses(p, parse_nest("hwji"), {}, ObjectiveMode::kReuseAware);
  const auto two = network_accesses({c, c});
  EXPECT_EQ(two.total(), 2 * c.total());
  EXPECT_EQ(network_accesses({c}).total(), c.total());
}

TEST(ObjectiveMode, Parse) {
  EXPECT_EQ(parse_objective_mode("baseline"), ObjectiveMode::kBaseline);
  EXPECT_EQ(parse_objective_mode("reuse-aware"), ObjectiveMode::kReuseAware);
  EXPECT_THROW(parse_objective_mode("fast"), InvalidArgument);
}
