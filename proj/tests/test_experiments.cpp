#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "h1s2s/experiments.hpp"

using namespace h1s2s;

namespace {

StudySettings small_settings(std::int64_t atoms) {
  StudySettings s;
  s.config.atoms_per_line = atoms;
  s.config.grid.points = 21;
  s.threads = 1;
  return s;
}

}  // namespace

TEST(Budget, Examples) {
  EXPECT_DOUBLE_EQ(linewidth_budget(550.0, 775.0), 56.25);
  EXPECT_DOUBLE_EQ(linewidth_budget(550.0, 550.0), 0.0);
  EXPECT_DOUBLE_EQ(linewidth_budget(550.0, 950.0), 100.0);
  EXPECT_THROW((void)linewidth_budget(550.0, 500.0), DomainError);
}

TEST(PowerScan, Preconditions) {
  const StudySettings s = small_settings(5);
  const std::vector<double> few{0.1, 0.2, 0.3};
  EXPECT_THROW((void)power_scan(few, s, ScenarioSwitches{}, 1), DomainError);
  const std::vector<double> outside{0.05, 0.7, 0.9, 1.2, 0.3};
  EXPECT_THROW((void)power_scan(outside, s, ScenarioSwitches{}, 1), DomainError);
}

TEST(PowerScan, DefaultGrid) {
  const auto p = default_scan_powers();
  EXPECT_EQ(p.size(), 10u);
  EXPECT_EQ(p.front(), 0.05);
  EXPECT_EQ(p.back(), 1.2);
}

TEST(ScenarioMatrix, SharedEnsembleAndTrends) {
  const StudySettings s = small_settings(30);
  const std::vector<double> powers{0.05, 0.1, 0.2, 0.3, 0.5, 0.8};
  const auto m = scenario_matrix(powers, s, 12);
  for (const auto& scan : m) {
    EXPECT_EQ(scan.seed, 12u);
    ASSERT_EQ(scan.centers.size(), powers.size());
    for (double w : scan.widths) EXPECT_GT(w, 0.0);
  }
  EXPECT_EQ(m[0].scenario, (ScenarioSwitches{true, true, 0.0}));
  EXPECT_EQ(m[3].scenario, (ScenarioSwitches{false, false, 0.0}));

  // Without light shift and ionization: flat centers, pure power broadening.
  const auto& bare = m[3];
  const auto [lo, hi] = std::minmax_element(bare.centers.begin(), bare.centers.end());
  EXPECT_LT(*hi - *lo, 2.0 * 2500.0 / 20.0);
  for (std::size_t i = 1; i < bare.widths.size(); ++i) {
    EXPECT_GT(bare.widths[i], bare.widths[i - 1]);
  }
  // Light shift drives the center up; ionization alone barely moves it.
  EXPECT_GT(m[1].k_shift, 0.5);
  EXPECT_LT(std::abs(m[2].k_shift), 0.2 * m[1].k_shift);
  // Width ordering at 0.5 W.
  EXPECT_GE(m[0].widths[4], m[1].widths[4]);
  EXPECT_GE(m[1].widths[4], m[3].widths[4]);

  // The same scenario reruns bit-identically.
  const auto again = power_scan(powers, s, ScenarioSwitches{}, 12);
  for (std::size_t i = 0; i < powers.size(); ++i) EXPECT_EQ(again.centers[i], m[0].centers[i]);
}

TEST(DopplerStudy, ExponentAndDelayTrends) {
  StudySettings s = small_settings(5000);
  const auto at1210 = doppler_exponent_study(s, 4);
  EXPECT_LT(at1210.mean_v4, at1210.mean_v3);
  s.config.detection_delay = 2210e-6;
  const auto at2210 = doppler_exponent_study(s, 4);
  EXPECT_LT(std::abs(at2210.mean_v4 - at2210.mean_v3), std::abs(at1210.mean_v4 - at1210.mean_v3));
  s.config.detection_delay = 0.0;
  EXPECT_THROW((void)doppler_exponent_study(s, 4), DomainError);
}

TEST(DopplerStudy, OpenGateFullBeamMean) {
  // Open beam: <v^2> = 2 v0^2 for v^3 seeding, so the mean is -nu v0^2 / c^2.
  StudySettings s = small_settings(20000);
  s.config.detection_delay = 1e-9;
  const auto r = doppler_exponent_study(s, 2);
  const double v0 = most_probable_speed(5.0, PhysicalConstants{});
  const double c = PhysicalConstants{}.speed_of_light;
  const double expected = -AtomicCoefficients{}.transition_frequency * v0 * v0 / (c * c);
  EXPECT_NEAR(expected, -2264.0, 2.0);
  EXPECT_NEAR(r.mean_v3, expected, 0.03 * std::abs(expected));
  EXPECT_LT(r.mean_v3, -500.0);
}

TEST(FrozenNozzle, StructureAndDeterminism) {
  const StudySettings s = small_settings(15);
  FrozenNozzleOptions o;
  o.scans = 2;
  o.points = 6;
  const auto a = frozen_nozzle_study(s, o, 3);
  const auto b = frozen_nozzle_study(s, o, 3);
  ASSERT_EQ(a.scans.size(), 2u);
  ASSERT_EQ(a.intercepts.size(), 2u);
  for (std::size_t k = 0; k < a.scans.size(); ++k) {
    ASSERT_EQ(a.scans[k].powers.size(), 6u);
    EXPECT_EQ(a.scans[k].powers.front(), 0.05);
    EXPECT_EQ(a.scans[k].powers.back(), 0.55);
    for (double r : a.scans[k].radii) {
      EXPECT_GE(r, o.radius_range.first);
      EXPECT_LE(r, o.radius_range.second);
    }
    EXPECT_EQ(a.intercepts[k], b.intercepts[k]);
  }
  EXPECT_NE(a.scans[0].radii[0], a.scans[1].radii[0]);
  o.control = true;
  const auto c = frozen_nozzle_study(s, o, 3);
  for (double r : c.scans[0].radii) EXPECT_EQ(r, BeamlineGeometry{}.entry_radius());
  o.control = false;
  o.radius_range = {1e-4, 1e-3};
  EXPECT_THROW((void)frozen_nozzle_study(s, o, 3), DomainError);
}
