#include <gtest/gtest.h>

#include <algorithm>

#include <reskernel/richness.hpp>

using namespace reskernel;

namespace {

constexpr double kCells = 78400.0;

MotifSet synthetic(std::vector<Vector> motifs, Vector weights) {
  MotifSet s;
  s.tau = motifs.front().size();
  s.motifs = std::move(motifs);
  s.weights = std::move(weights);
  return s;
}

CoefficientCloud points(std::initializer_list<std::pair<Complex, double>> pts) {
  CoefficientCloud c;
  for (const auto& [z, q] : pts) c.points.push_back({z, q});
  return c;
}

SweepConfig cycle_pi(Vector nus) {
  SweepConfig cfg;
  cfg.nus = std::move(nus);
  return cfg;
}

}  // namespace

TEST(Grid, Geometry) {
  const GridSpec g;
  EXPECT_EQ(g.cells_per_axis(), 280u);
  EXPECT_EQ(g.total_cells(), 78400u);
  EXPECT_EQ(g.axis_cell(-7.0), 0u);
  EXPECT_EQ(g.axis_cell(7.0), 279u);
  EXPECT_FALSE(g.axis_cell(7.0000001).has_value());
  EXPECT_FALSE(g.axis_cell(NAN).has_value());
  // Half-open cells: an interior edge belongs to the higher cell.
  EXPECT_EQ(g.axis_cell(-7.0 + 0.5), 10u);
  EXPECT_EQ(g.axis_cell(0.0), 140u);
  EXPECT_THROW((GridSpec{7.0, 0.0}.validate()), contract_violation);
}

TEST(CoefficientCloud, NormalizedTags) {
  const auto one = coefficient_cloud(synthetic({{0.6, 0.8, 0.0}}, {3.0}));
  ASSERT_EQ(one.points.size(), 3u);
  for (const auto& p : one.points) EXPECT_EQ(p.q, 1.0);

  const auto two = coefficient_cloud(synthetic({{1, 0}, {0, 1}}, {2.0, 2.0}));
  for (const auto& p : two.points) EXPECT_EQ(p.q, 0.5);
  EXPECT_TRUE(coefficient_cloud(MotifSet{}).points.empty());
}

TEST(CoefficientCloud, ConstantMotifIsDcOnly) {
  const double c = 0.5;
  const auto cloud = coefficient_cloud(synthetic({Vector(4, c)}, {1.0}));
  EXPECT_NEAR(cloud.points[0].z.real(), 4 * c, 1e-15);
  EXPECT_NEAR(cloud.points[0].z.imag(), 0.0, 1e-15);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(cloud.points[k].z), 0.0, 1e-15);
  // DC cell plus the shared origin cell.
  EXPECT_EQ(measure_richness(cloud).cells_visited, 2u);
}

TEST(Measures, EmptySingleAndShared) {
  EXPECT_EQ(relative_area(CoefficientCloud{}), 0.0);
  EXPECT_EQ(weighted_relative_area(CoefficientCloud{}), 0.0);
  EXPECT_DOUBLE_EQ(relative_area(points({{{0.01, 0.01}, 1.0}})), 1.0 / kCells);
  EXPECT_DOUBLE_EQ(weighted_relative_area(points({{{0.01, 0.01}, 1.0}})), 1.0 / kCells);
  const auto shared = points({{{0.01, 0.01}, 0.3}, {{0.02, 0.03}, 0.5}});
  EXPECT_DOUBLE_EQ(relative_area(shared), 1.0 / kCells);
  EXPECT_DOUBLE_EQ(weighted_relative_area(shared), 0.4 / kCells);
}

TEST(Measures, OutsidePointsAreDiscarded) {
  const auto m = measure_richness(points({{{8.0, 0.0}, 0.5}, {{0.0, -7.5}, 0.25}, {{1.0, 1.0}, 0.25}}));
  EXPECT_EQ(m.discarded_points, 2u);
  EXPECT_EQ(m.cells_visited, 1u);
}

TEST(Measures, WeightedNeverExceedsPlainArea) {
  const auto m = sweep(cycle_pi({0.97}))[0].measures;
  EXPECT_GE(m.relative_area, 0.0);
  EXPECT_LE(m.relative_area, 1.0);
  EXPECT_LE(m.weighted_relative_area, m.relative_area);
}

TEST(Sweep, CycleRichnessGrowsTowardEdgeThenCollapses) {
  const auto r = sweep(cycle_pi({0.96, 0.99, 1.0}));
  ASSERT_EQ(r.size(), 3u);
  EXPECT_GT(r[1].measures.relative_area, r[0].measures.relative_area);
  EXPECT_LT(r[2].measures.relative_area, r[1].measures.relative_area);
  EXPECT_LT(r[2].measures.weighted_relative_area, r[1].measures.weighted_relative_area);
}

TEST(Sweep, DeterministicAndCanonicallyOrdered) {
  SweepConfig cfg = cycle_pi({0.98, 0.95});
  cfg.regimes = {Regime::cycle_permutation, Regime::random_iid};
  cfg.dimension = 20;
  cfg.trials = 2;
  const auto a = sweep(cfg), b = sweep(cfg);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].measures.cells_visited, b[i].measures.cells_visited);
    EXPECT_EQ(a[i].measures.weighted_relative_area, b[i].measures.weighted_relative_area);
    EXPECT_EQ(a[i].seed.base, b[i].seed.base);
  }
  EXPECT_EQ(a.front().nu, 0.95);
  EXPECT_EQ(a.front().regime, Regime::random_iid);
  const auto agg = aggregate(a);
  ASSERT_EQ(agg.size(), 4u);
  EXPECT_EQ(agg[0].trials, 2u);
}

TEST(Sweep, DefaultTrialCountsAndGrid) {
  EXPECT_EQ(default_trials(Regime::cycle_permutation, InputKind::ones_pi_signs), 1u);
  EXPECT_EQ(default_trials(Regime::random_iid, InputKind::ones_pi_signs), 30u);
  EXPECT_EQ(default_trials(Regime::random_iid, InputKind::gaussian), 60u);
  const Vector g = default_nu_grid();
  EXPECT_EQ(g.size(), 21u);
  for (double v : {0.96, 0.99, 0.995, 1.0}) EXPECT_NE(std::find(g.begin(), g.end(), v), g.end()) << v;
}

TEST(Sweep, InvalidNu) {
  EXPECT_THROW(sweep(cycle_pi({1.2})), contract_violation);
  EXPECT_THROW(sweep(cycle_pi({})), contract_violation);
}

TEST(Sweep, AperiodicInputsBehaveAlike) {
  for (double nu : {0.96, 0.99}) {
    SweepConfig cfg = cycle_pi({nu});
    cfg.inputs = {InputKind::ones_pi_signs, InputKind::ones_e_signs, InputKind::ones_random_signs};
    cfg.trials = 5;
    Vector means;
    for (const auto& a : aggregate(sweep(cfg))) means.push_back(a.mean_area);
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double mean = (means[0] + means[1] + means[2]) / 3.0;
    EXPECT_LE((*hi - *lo) / mean, 0.25) << "nu=" << nu;
  }
}
