#include "mlsm/cases.hpp"
#include "mlsm/nodeset.hpp"
#include "mlsm/refine.hpp"

#include <gtest/gtest.h>

using namespace mlsm;

namespace {

double min_spacing_in(const NodeSet& s, const Rect& r) {
  double m = std::numeric_limits<double>::infinity();
  for (const Node& n : s.nodes())
    if (r.covers(n.position)) m = std::min(m, n.spacing);
  return m;
}

}  // namespace

TEST(Refine, EmptyRegionChangesNothing) {
  const NodeSet g = build_rectangle_grid(Rect{0, 1, 0, 1}, 11, 11);
  const NodeSet r = refine_once(g, Rect{2, 3, 2, 3}, RefineConfig{});
  ASSERT_EQ(r.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r[i].position, g[i].position);
}

TEST(Refine, KeepsExistingNodesAndAddsNew) {
  const NodeSet g = build_rectangle_grid(Rect{0, 1, 0, 1}, 11, 11);
  const NodeSet r = refine_once(g, Rect{0.3, 0.7, 0.3, 0.7}, RefineConfig{});
  ASSERT_GT(r.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(r[i].position, g[i].position);
  EXPECT_NO_THROW(check_invariants(r));
}

TEST(Refine, MinimumSpacingHalvesPerLevel) {
  const double h = 0.1;
  NodeSet s = build_rectangle_grid(Rect{0, 2, 0, 2}, h);
  const Rect core{0.8, 1.2, 0.8, 1.2};
  std::size_t previous = s.size();
  for (int level = 1; level <= 4; ++level) {
    s = refine_once(s, core, RefineConfig{});
    EXPECT_GT(s.size(), previous);
    previous = s.size();
    const double ratio = min_spacing_in(s, core) / (h / std::pow(2.0, level));
    EXPECT_GE(ratio, 0.9) << "level " << level;
    EXPECT_LE(ratio, 1.1) << "level " << level;
  }
}

TEST(Refine, BoundaryMidpointsStayOnTheBoundary) {
  const std::vector<Circle> holes{{{1.0, 0.5}, 0.2}};
  const NodeSet base = build_drilled_domain(Rect{0, 2, 0, 1}, holes, 0.05);
  const auto regions = hole_regions(holes[0], 0.05, 3);
  const NodeSet r = refine_levels(base, regions, RefineConfig{});
  EXPECT_GT(r.size(), base.size());
  EXPECT_GT(r.boundary_count(), base.boundary_count());
  EXPECT_NO_THROW(check_invariants(r));
  for (const Node& n : r.nodes()) {
    if (n.is_boundary()) EXPECT_NEAR(r.domain().signed_distance(n.position), 0.0, r.boundary_tolerance());
  }
}

TEST(Refine, LevelsNestAndCountIsMonotone) {
  const NodeSet g = build_rectangle_grid(Rect{0, 1, 0, 1}, 21, 21);
  std::vector<RefineRegion> regions{{Rect{0.2, 0.8, 0.2, 0.8}, 1}};
  const NodeSet one = refine_levels(g, regions, RefineConfig{});
  regions.push_back({Rect{0.4, 0.6, 0.4, 0.6}, 2});
  const NodeSet two = refine_levels(g, regions, RefineConfig{});
  EXPECT_GT(one.size(), g.size());
  EXPECT_GT(two.size(), one.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(two[i].position, one[i].position);
}

TEST(Refine, ValidatesConfiguration) {
  const NodeSet g = build_rectangle_grid(Rect{0, 1, 0, 1}, 5, 5);
  EXPECT_THROW(refine_once(g, Rect{0, 1, 0, 1}, RefineConfig{.proximity = 1.5}), InvalidArgument);
  EXPECT_THROW(refine_once(g, Rect{0, 1, 0, 1}, RefineConfig{.support_size = 1}), InvalidArgument);
  const std::vector<RefineRegion> flat{{Rect{0.5, 0.5, 0, 1}, 1}};
  EXPECT_THROW(refine_levels(g, flat, RefineConfig{}), InvalidArgument);
}

TEST(RefineDemo, ProducesValidCloud) {
  RefineDemoConfig cfg;
  cfg.levels = 3;
  const NodeSet s = refine_demo(cfg);
  EXPECT_NO_THROW(check_invariants(s));
  EXPECT_EQ(hole_regions(cfg.hole, cfg.spacing, 3).size(), 3u);
}
