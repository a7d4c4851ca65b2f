#include <algorithm>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "coverage_miqp/visibility.h"
#include "support/fixtures.h"
#include "support/raycast_oracle.h"

namespace coverage_miqp {
namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

bool has(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Square region [10, 14] x [10, 14] in a 30 x 30 workspace, camera pointing
// straight down (theta = 0).
Scenario square_scenario(double range = 7.0) {
  auto spec = fixtures::points_spec({{10, 10}, {14, 10}, {14, 14}, {10, 14}}, {0, 0, 30, 30});
  spec.angles_deg = {0.0};
  spec.zooms = {1.0};
  spec.range_m = range;
  spec.apex_angle_deg = 60.0;
  spec.grid_nx = 3;
  spec.grid_ny = 3;
  spec.visibility.n_s = 4;
  return build_scenario(spec);
}

TEST(VisiblePoints, OutsideFootprintNeverVisible) {
  const auto s = square_scenario();
  // Agent far to the left: every point outside the downward footprint.
  const auto v = visible_points({1, 28}, s.configs[0], s);
  EXPECT_TRUE(v.empty());
}

TEST(VisiblePoints, IsolatedSegmentMidpoint) {
  Scenario s = square_scenario();
  // Replace the occluders by a single horizontal segment; point 0 is its midpoint.
  s.points = {{12, 10}};
  s.boundary.points = s.points;
  s.boundary.segments = {{{11, 10}, {13, 10}}};
  s.boundary.point_to_segment = {{0}};
  const Point2 pos(12, 15);
  const auto v = visible_points(pos, s.configs[0], s);
  oracle::Pose q{pos, deg(60), 7.0, 0.0, 1.0, s.ray_count};
  EXPECT_TRUE(oracle::in_triangle(oracle::footprint(q), s.points[0]));
  EXPECT_EQ(v, std::vector<std::size_t>{0});
}

TEST(VisiblePoints, FarFaceIsOccluded) {
  const auto s = square_scenario(12.0);
  // Above the square looking down: the top face takes every ray first, so the
  // bottom corners (points 0 and 1) stay hidden although they are in range.
  const Point2 pos(12, 20);
  const auto fov = place(s.configs[0], pos);
  ASSERT_TRUE(contains(fov, s.points[0]));
  ASSERT_TRUE(contains(fov, s.points[1]));
  const auto v = visible_points(pos, s.configs[0], s);
  EXPECT_FALSE(has(v, 0));
  EXPECT_FALSE(has(v, 1));
  EXPECT_TRUE(has(v, 2));
  EXPECT_TRUE(has(v, 3));
}

TEST(VisiblePoints, MatchesBruteForceOnRandomHulls) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(0, 40), uy(0, 40), th(-std::numbers::pi, std::numbers::pi);
  int verdicts = 0;
  int positives = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto hull = fixtures::random_convex_ccw(rng, {20, 20}, 3, 8, 3, 12);
    auto spec = fixtures::points_spec(hull, {0, 0, 40, 40});
    spec.range_m = 15.0;
    spec.apex_angle_deg = 50.0;
    spec.angles_deg = {th(rng) * 180.0 / std::numbers::pi};
    spec.zooms = {1.0 + std::uniform_real_distribution<double>(0, 1)(rng)};
    spec.ray_count = 9;
    const auto s = build_scenario(spec);
    Point2 pos;
    do {
      pos = {ux(rng), uy(rng)};
    } while (inside_region(s.boundary, pos));
    const auto got = visible_points(pos, s.configs[0], s);
    oracle::Pose q{pos, deg(50.0), 15.0, s.configs[0].theta, s.configs[0].zoom, 9};
    const auto want = oracle::visible_vertices(q, hull);
    for (std::size_t p = 0; p < hull.size(); ++p) {
      EXPECT_EQ(has(got, p), want[p]) << "trial " << trial << " point " << p;
      ++verdicts;
      positives += want[p] ? 1 : 0;
    }
  }
  EXPECT_GT(positives, 20);
  EXPECT_GT(verdicts, 500);
}

TEST(VisiblePoints, TraversableMeansFootprintOnly) {
  auto spec = fixtures::points_spec({{10, 10}, {14, 10}, {12, 11}, {12, 14}}, {0, 0, 30, 30});
  spec.traversable = true;
  spec.angles_deg = {0.0};
  spec.zooms = {1.0};
  spec.apex_angle_deg = 60;
  const auto s = build_scenario(spec);
  const Point2 pos(12, 18);
  const auto fov = place(s.configs[0], pos);
  const auto v = visible_points(pos, s.configs[0], s);
  for (std::size_t p = 0; p < s.n_points(); ++p) EXPECT_EQ(has(v, p), contains(fov, s.points[p]));
}

TEST(LearnTable, DimensionsAndMeta) {
  const auto s = square_scenario();
  const auto t = learn_table(s, s.configs);
  EXPECT_EQ(t.n_cells(), 9u);
  EXPECT_EQ(t.n_points(), 4u);
  EXPECT_EQ(t.meta(), expected_meta(s));
}

TEST(LearnTable, EvaluationScale) {
  const auto s = build_scenario(default_spec());
  const auto t = learn_table(s, s.configs);
  EXPECT_EQ(t.n_cells(), 16u);
  EXPECT_EQ(t.n_points(), 11u);
  EXPECT_EQ(t.meta().n_s, 15);
  std::size_t ones = 0;
  for (std::size_t c = 0; c < t.n_cells(); ++c) ones += t.row_count(c);
  EXPECT_GT(ones, 0u);
}

TEST(LearnTable, SingleCellWideFootprintSeesEverything) {
  // Thin sliver region below a single cell; a wide, long footprint pointing
  // down catches both faces' shared points from anywhere in the cell.
  auto spec = fixtures::points_spec({{0, 0}, {10, 0}, {5, 0.5}}, {0, 5, 10, 10});
  spec.x0.pos = {5, 7};
  spec.angles_deg = {0.0};
  spec.zooms = {1.0};
  spec.apex_angle_deg = 170;
  spec.range_m = 30;
  spec.ray_count = 201;
  spec.grid_nx = 1;
  spec.grid_ny = 1;
  spec.visibility.n_s = 10;
  const auto s = build_scenario(spec);
  const auto t = learn_table(s, s.configs);
  // Brute force: every sample's own rays.
  std::vector<bool> want(3, false);
  for (int i = 0; i < spec.visibility.n_s; ++i) {
    const Point2 pos = sample_in_cell(s.grid.cells[0], 0, 0, static_cast<std::size_t>(i));
    oracle::Pose q{pos, deg(170), 30, 0, 1, 201};
    const auto hull = std::vector<Point2>{{0, 0}, {10, 0}, {5, 0.5}};
    const auto v = oracle::visible_vertices(q, hull, false);
    for (std::size_t p = 0; p < 3; ++p) want[p] = want[p] || v[p];
  }
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_TRUE(want[p]);
    EXPECT_EQ(t.query(0, p), want[p]);
  }
}

TEST(LearnTable, DeterministicAndThreadIndependent) {
  const auto s = build_scenario(default_spec());
  const auto a = learn_table(s, s.configs, 1);
  const auto b = learn_table(s, s.configs, 1);
  const auto c = learn_table(s, s.configs, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(LearnTable, ConsistentWithSamples) {
  auto spec = default_spec();
  for (int n_s : {1, 3}) {
    spec.visibility.n_s = n_s;
    const auto s = build_scenario(spec);
    const auto t = learn_table(s, s.configs);
    for (std::size_t c = 0; c < s.grid.size(); ++c) {
      std::set<std::size_t> union_hits;
      for (int i = 0; i < n_s; ++i) {
        const Point2 pos = sample_in_cell(s.grid.cells[c], s.visibility.seed, c, static_cast<std::size_t>(i));
        for (const auto& cfg : s.configs) {
          for (std::size_t p : visible_points(pos, cfg, s)) EXPECT_TRUE(t.query(c, p));
          for (std::size_t p : ray_hit_points(pos, cfg, s)) union_hits.insert(p);
        }
      }
      for (std::size_t p = 0; p < s.n_points(); ++p) EXPECT_EQ(t.query(c, p), union_hits.count(p) == 1);
    }
  }
}

TEST(LearnTable, MonotoneInSampleCount) {
  auto spec = default_spec();
  for (int k : {1, 2, 5}) {
    spec.visibility.n_s = k;
    const auto small = learn_table(build_scenario(spec), build_scenario(spec).configs);
    spec.visibility.n_s = 2 * k;
    const auto s2 = build_scenario(spec);
    const auto big = learn_table(s2, s2.configs);
    for (std::size_t c = 0; c < small.n_cells(); ++c) {
      for (std::size_t p = 0; p < small.n_points(); ++p) {
        if (small.query(c, p)) EXPECT_TRUE(big.query(c, p));
      }
    }
  }
}

TEST(LearnTable, TraversableIsAllOnes) {
  auto spec = default_spec();
  spec.traversable = true;
  const auto s = build_scenario(spec);
  const auto t = learn_table(s, s.configs);
  for (std::size_t c = 0; c < t.n_cells(); ++c) EXPECT_EQ(t.row_count(c), t.n_points());
}

TEST(SampleInCell, InsideAndKeyed) {
  const auto g = build_grid({0, 0, 60, 20}, 4, 4);
  for (std::size_t c = 0; c < g.size(); ++c) {
    for (std::size_t i = 0; i < 50; ++i) {
      const Point2 p = sample_in_cell(g.cells[c], 3, c, i);
      EXPECT_TRUE(g.cells[c].box.contains(p, 0.0));
      EXPECT_EQ(p, sample_in_cell(g.cells[c], 3, c, i));
    }
  }
  EXPECT_NE(sample_in_cell(g.cells[0], 3, 0, 0), sample_in_cell(g.cells[0], 4, 0, 0));
  EXPECT_NE(sample_in_cell(g.cells[0], 3, 0, 0), sample_in_cell(g.cells[0], 3, 0, 1));
}

TEST(Query, BitsAndRange) {
  VisibilityTable t({1, 0, 5, "x", 2, 3});
  t.set(1, 2, true);
  EXPECT_TRUE(t.query(1, 2));
  EXPECT_FALSE(t.query(0, 2));
  EXPECT_THROW(t.query(2, 0), std::out_of_range);
  EXPECT_THROW(t.query(0, 3), std::out_of_range);
}

TEST(TableFile, RoundTripAndMetaMismatch) {
  const auto s = build_scenario(default_spec());
  const auto t = learn_table(s, s.configs);
  const auto path = std::filesystem::temp_directory_path() / "coverage_miqp_table_test.json";
  save_table(t, path);
  const auto back = load_table(path, expected_meta(s));
  EXPECT_EQ(back, t);
  for (std::size_t c = 0; c < t.n_cells(); ++c) {
    for (std::size_t p = 0; p < t.n_points(); ++p) EXPECT_EQ(back.query(c, p), t.query(c, p));
  }
  auto other = default_spec();
  other.visibility.seed = 99;
  EXPECT_THROW(load_table(path, expected_meta(build_scenario(other))), std::invalid_argument);
  other = default_spec();
  other.angles_deg = {-85, -28, 28, 80};
  EXPECT_THROW(load_table(path, expected_meta(build_scenario(other))), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(TableVisiblePoints, RequiresFootprintAndBit) {
  const auto s = square_scenario(12.0);
  auto t = VisibilityTable::all_visible(expected_meta(s));
  const Point2 pos(12, 20);
  const auto fov = place(s.configs[0], pos);
  auto v = table_visible_points(s, t, s.configs[0], pos);
  for (std::size_t p = 0; p < s.n_points(); ++p) EXPECT_EQ(has(v, p), contains(fov, s.points[p]));
  t = VisibilityTable(expected_meta(s));
  EXPECT_TRUE(table_visible_points(s, t, s.configs[0], pos).empty());
}

}  // namespace
}  // namespace coverage_miqp
