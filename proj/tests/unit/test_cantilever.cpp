#include "mlsm/cases.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mlsm;

TEST(Timoshenko, DisplacementSatisfiesNavierEquations) {
  const BeamParams beam;
  const auto [lam, mu] = beam.material().lame();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(1.0, 29.0), uy(-2.0, 2.0);
  const double d = 1e-3;
  auto u = [&](double x, double y) { return timoshenko_displacement(x, y, beam); };
  for (int k = 0; k < 50; ++k) {
    const double x = ux(rng), y = uy(rng);
    const Vec2 c = u(x, y);
    const Vec2 dxx = (u(x + d, y) - 2 * c + u(x - d, y)) / (d * d);
    const Vec2 dyy = (u(x, y + d) - 2 * c + u(x, y - d)) / (d * d);
    const Vec2 dxy = (u(x + d, y + d) - u(x + d, y - d) - u(x - d, y + d) + u(x - d, y - d)) / (4 * d * d);
    const double rx = (lam + 2 * mu) * dxx.x() + mu * dyy.x() + (lam + mu) * dxy.y();
    const double ry = mu * dxx.y() + (lam + 2 * mu) * dyy.y() + (lam + mu) * dxy.x();
    // Individual terms are O(P / I) ~ 1e2; the residual is FD noise.
    EXPECT_LT(std::abs(rx), 1e-4 * beam.load / beam.inertia() * 10) << x << ' ' << y;
    EXPECT_LT(std::abs(ry), 1e-4 * beam.load / beam.inertia() * 10) << x << ' ' << y;
  }
}

TEST(Timoshenko, StressMatchesDisplacementAndBoundaryData) {
  const BeamParams beam;
  const auto [lam, mu] = beam.material().lame();
  const double d = 1e-4;
  for (double x : {0.0, 7.5, 22.0}) {
    for (double y : {-2.5, -1.0, 0.4, 2.5}) {
      const StressTensor s = timoshenko_stress(x, y, beam);
      const Vec2 ex = (timoshenko_displacement(x + d, y, beam) - timoshenko_displacement(x - d, y, beam)) / (2 * d);
      const Vec2 ey = (timoshenko_displacement(x, y + d, beam) - timoshenko_displacement(x, y - d, beam)) / (2 * d);
      const double scale = beam.load * beam.length / beam.inertia();
      EXPECT_NEAR(s.xx, (lam + 2 * mu) * ex.x() + lam * ey.y(), 1e-6 * scale);
      EXPECT_NEAR(s.yy, lam * ex.x() + (lam + 2 * mu) * ey.y(), 1e-6 * scale);
      EXPECT_NEAR(s.xy, mu * (ey.x() + ex.y()), 1e-6 * scale);
    }
    // Traction-free top and bottom.
    EXPECT_NEAR(timoshenko_stress(x, beam.depth / 2, beam).xy, 0.0, 1e-12);
    EXPECT_NEAR(timoshenko_stress(x, -beam.depth / 2, beam).yy, 0.0, 1e-12);
  }
  // The end shear integrates to the load.
  double shear = 0;
  const int steps = 2000;
  for (int k = 0; k < steps; ++k) {
    const double y = -beam.depth / 2 + (k + 0.5) * beam.depth / steps;
    shear += timoshenko_stress(0.0, y, beam).xy * beam.depth / steps;
  }
  EXPECT_NEAR(std::abs(shear), beam.load, 1e-6 * beam.load);
  EXPECT_LT(timoshenko_displacement(beam.length, 0, beam).norm(), 1e-18);
}

TEST(Cantilever, CoarseRunIsAccurate) {
  CantileverConfig cfg;
  cfg.nx = 61;
  const CaseResult r = cantilever_case(cfg);
  ASSERT_TRUE(r.error_displacement && r.error_stress);
  EXPECT_LT(*r.error_displacement, 0.05);
  EXPECT_LT(*r.error_stress, 0.2);
  EXPECT_EQ(r.matrix_size, 2 * r.nodes.size());
  EXPECT_GT(r.timing.total, 0.0);
}

TEST(Cantilever, AllEssentialRecoversField) {
  CantileverConfig cfg;
  cfg.nx = 31;
  cfg.all_essential = true;
  const CaseResult r = cantilever_case(cfg);
  EXPECT_LT(*r.error_displacement, 1e-5);
}

TEST(DrilledBeam, UnloadedBeamDoesNotMove) {
  DrilledBeamConfig cfg;
  cfg.nx = 61;
  cfg.load_scale = 0.0;
  const CaseResult r = drilled_cantilever_case(cfg);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    EXPECT_EQ(r.displacement.u[i], 0.0);
    EXPECT_EQ(r.displacement.v[i], 0.0);
  }
}

TEST(DrilledBeam, WithoutHolesTipDeflectionMatchesBeamTheory) {
  DrilledBeamConfig cfg;
  cfg.holes.clear();
  const CaseResult r = drilled_cantilever_case(cfg);
  std::size_t tip = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    if (r.nodes[i].position.norm() < r.nodes[tip].position.norm()) tip = i;
  ASSERT_LT(r.nodes[tip].position.norm(), 1e-12);
  const double expected = timoshenko_displacement(0, 0, cfg.beam).y();
  EXPECT_NEAR(r.displacement.v[tip], expected, 0.2 * std::abs(expected));
}

TEST(DrilledBeam, PeakVonMisesSitsOnAHole) {
  DrilledBeamConfig cfg;
  const CaseResult r = drilled_cantilever_case(cfg);
  const auto svm = r.stress.von_mises();
  const std::size_t peak = static_cast<std::size_t>(std::max_element(svm.begin(), svm.end()) - svm.begin());
  const Vec2 p = r.nodes[peak].position;
  double gap = std::numeric_limits<double>::infinity();
  for (const Circle& c : cfg.holes) gap = std::min(gap, (p - c.center).norm() - c.radius);
  const double h = cfg.beam.length / static_cast<double>(cfg.nx - 1);
  EXPECT_LE(gap, h) << "peak at " << p.transpose();
}
