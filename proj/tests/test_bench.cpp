#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ovt/bench.hpp"

using namespace ovt;

TEST(Bench, RandomLayerIsDeterministic) {
  BenchConfig cfg;
  const auto a = gen_random_layer(50, cfg, 17);
  const auto b = gen_random_layer(50, cfg, 17);
  const auto c = gen_random_layer(50, cfg, 18);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].position, b[k].position);
    EXPECT_EQ(a[k].target_value, b[k].target_value);
    EXPECT_TRUE(cfg.canvas.strictly_contains(a[k].position));
    EXPECT_GT(a[k].target_value, 0.0);
    EXPECT_EQ(a[k].weight, 0.0);
  }
  EXPECT_NE(a[0].position, c[0].position);
}

TEST(Bench, SingleSiteLayer) {
  BenchConfig cfg;
  EXPECT_EQ(gen_random_layer(1, cfg, 0).size(), 1u);
  EXPECT_THROW(gen_random_layer(0, cfg, 0), BenchError);
}

TEST(Bench, ValueMixFraction) {
  BenchConfig cfg;
  const auto s = gen_random_layer(1000, cfg, 3);
  int high = 0;
  for (const Site& x : s) high += x.target_value > 1.0;
  // Values above 1 only come from the high range: 0.3 * 0.9 of the draws.
  const double p = 0.3 * 0.9;
  const double sd = std::sqrt(1000 * p * (1 - p));
  EXPECT_NEAR(high, 1000 * p, 3 * sd);
}

TEST(Bench, ConfigValidation) {
  BenchConfig cfg;
  cfg.value_mix.fraction_high = 1.5;
  EXPECT_THROW(cfg.validate(), BenchError);
  cfg = {};
  cfg.repeats = 0;
  EXPECT_THROW(cfg.validate(), BenchError);
  cfg = {};
  cfg.site_counts = {10, -1};
  EXPECT_THROW(cfg.validate(), BenchError);
}

TEST(Bench, NeighborCountsForTinyLayers) {
  BenchConfig cfg;
  cfg.site_counts = {1, 2};
  const auto rows = run_neighbor_scaling(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].pairs_per_site, 0.0);
  EXPECT_EQ(rows[0].valid_per_site, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].pairs_per_site, 0.5);
  EXPECT_DOUBLE_EQ(rows[1].valid_per_site, 0.5);
}

TEST(Bench, NeighborCountsStaySmall) {
  BenchConfig cfg;
  cfg.site_counts = {500};
  cfg.repeats = 2;
  for (const auto& r : run_neighbor_scaling(cfg)) {
    EXPECT_GE(r.valid_per_site, 1.0);
    EXPECT_LE(r.valid_per_site, 4.0);
  }
}

TEST(Bench, Summarize) {
  const Summary s = summarize({4, 1, 3, 2, 5});
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.q1, 2);
  EXPECT_DOUBLE_EQ(s.median, 3);
  EXPECT_DOUBLE_EQ(s.mean, 3);
  EXPECT_DOUBLE_EQ(s.q3, 4);
  EXPECT_DOUBLE_EQ(s.max, 5);
  EXPECT_DOUBLE_EQ(s.iqr(), 2);
  EXPECT_DOUBLE_EQ(summarize({1, 2}).median, 1.5);
  EXPECT_THROW(summarize({}), BenchError);
}

TEST(Bench, ConvergenceRunsShareValues) {
  BenchConfig cfg;
  cfg.site_counts = {20};
  cfg.repeats = 2;
  AdaptParams p;
  p.max_iterations = 5;
  const auto sq = run_convergence(cfg, InitMode::squarified, p);
  const auto rnd = run_convergence(cfg, InitMode::random, p);
  ASSERT_EQ(sq.size(), 2u);
  ASSERT_EQ(rnd.size(), 2u);
  for (const auto& r : sq) {
    EXPECT_LE(r.trace.size(), 5u);
    EXPECT_GT(r.initial_error, 0.0);
  }
}

TEST(Bench, CsvHeaders) {
  std::ostringstream a, b, c, d;
  write_csv(a, std::vector<NeighborRow>{{10, 0, 1.5, 1.25}});
  EXPECT_EQ(a.str(), "n,repeat,pairs_per_site,valid_per_site\n10,0,1.5,1.25\n");
  write_csv(b, std::vector<TimingRow>{{100, 2.5}});
  EXPECT_EQ(b.str(), "n,ms_per_iter\n100,2.5\n");
  ConvergenceRun run;
  run.initial_error = 0.5;
  run.trace.push_back({1, 0.25, {}});
  write_csv(c, std::vector<ConvergenceRun>{run});
  EXPECT_EQ(c.str(), "mode,seed,iter,error\nsquarified,0,0,0.5\nsquarified,0,1,0.25\n");
  AspectReport rep;
  rep.rows.push_back({"ovt", "root/a", 1.5});
  write_csv(d, rep);
  EXPECT_EQ(d.str(), "method,cell_path,ratio\novt,root/a,1.5\n");
}

TEST(Bench, GeneratedHierarchyShape) {
  const HierarchyNode h = gen_random_hierarchy(220, 10, 0);
  EXPECT_EQ(leaf_count(h), 220u);
  EXPECT_EQ(depth(h), 4u);
  EXPECT_EQ(h.children.size(), 10u);
  const HierarchyNode again = gen_random_hierarchy(220, 10, 0);
  EXPECT_EQ(h.value, again.value);
}

TEST(Bench, FlatHierarchy) {
  BenchConfig cfg;
  const auto layer = gen_random_layer(7, cfg, 1);
  const HierarchyNode h = flat_hierarchy(layer);
  ASSERT_EQ(h.children.size(), 7u);
  EXPECT_EQ(h.children[3].name, "s3");
  EXPECT_EQ(h.children[3].value, layer[3].target_value);
}

TEST(Bench, AspectReportOnSmallLayer) {
  BenchConfig cfg;
  const HierarchyNode h = flat_hierarchy(gen_random_layer(12, cfg, 4));
  TreeLayoutOptions opt;
  opt.max_iterations = 100;
  const AspectReport rep = run_aspect_ratio(h, cfg, opt);
  for (const char* m : {"ovt", "ovt_random", "squarified"}) {
    EXPECT_EQ(rep.ratios(m).size(), 12u) << m;
    EXPECT_GE(rep.summary(m).min, 1.0);
  }
  EXPECT_THROW(rep.summary("nope"), BenchError);
}
