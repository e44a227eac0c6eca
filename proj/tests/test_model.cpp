#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "h1s2s/config.hpp"
#include "h1s2s/model.hpp"

using namespace h1s2s;

TEST(Model, ReducedMassCorrection) {
  const double r = 5.44617021487e-4;
  EXPECT_DOUBLE_EQ(reduced_mass_correction(PhysicalConstants{}), (1 + r) * (1 + r) * (1 + r));
}

TEST(Model, MostProbableSpeedAtFiveKelvin) {
  // sqrt(2 kB T / m) evaluated by hand: 287.22 m/s.
  EXPECT_NEAR(most_probable_speed(5.0, PhysicalConstants{}), 287.22, 0.01);
  EXPECT_THROW((void)most_probable_speed(0.0, PhysicalConstants{}), DomainError);
  EXPECT_THROW((void)most_probable_speed(-1.0, PhysicalConstants{}), DomainError);
}

TEST(Model, SecondOrderDopplerShift) {
  const AtomicCoefficients co;
  const PhysicalConstants pc;
  EXPECT_EQ(second_order_doppler_shift(0.0, co, pc), 0.0);
  // 124 m/s: -(2.466061e15 / 2) (124 / c)^2 = -210.948 Hz.
  EXPECT_NEAR(second_order_doppler_shift(124.0, co, pc), -210.948, 1e-3);
  EXPECT_NEAR(second_order_doppler_shift(248.0, co, pc) / second_order_doppler_shift(124.0, co, pc),
              4.0, 1e-12);
}

TEST(Model, UniformGridIsSymmetric) {
  for (int points : {2, 3, 50, 51, 201}) {
    const auto g = uniform_grid(2500.0, points);
    ASSERT_EQ(g.size(), static_cast<std::size_t>(points));
    EXPECT_EQ(g.front(), -2500.0);
    EXPECT_EQ(g.back(), 2500.0);
    for (int i = 0; i < points; ++i) EXPECT_EQ(g[i], -g[points - 1 - i]);
    for (int i = 1; i < points; ++i) EXPECT_GT(g[i], g[i - 1]);
  }
  EXPECT_THROW((void)uniform_grid(1.0, 1), DomainError);
}

TEST(Model, EntryRadius) {
  BeamlineGeometry g;
  EXPECT_DOUBLE_EQ(g.entry_radius(), 0.6e-3);
  g.nozzle_radius = 1e-3;
  EXPECT_DOUBLE_EQ(g.entry_radius(), 0.65e-3);
  g.frozen_nozzle_radius = 0.3e-3;
  EXPECT_DOUBLE_EQ(g.entry_radius(), 0.3e-3);
  g.frozen_nozzle_radius = 2e-3;
  EXPECT_DOUBLE_EQ(g.entry_radius(), 0.65e-3);
}

TEST(Model, ValidationNamesTheKey) {
  RunConfig rc;
  rc.temperature = -1;
  try {
    rc.validate();
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("temperature_k"), std::string::npos);
  }
  ScenarioSwitches s;
  s.intensity_noise_fraction = 0.3;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Model, DensityStatePhysicality) {
  EXPECT_TRUE(DensityState::ground().is_physical());
  DensityState s{0.5, {0.5, 0.0}, 0.5};
  EXPECT_TRUE(s.is_physical());
  s.rho_ge = {0.6, 0.0};
  EXPECT_FALSE(s.is_physical());
  s = {0.7, {0.0, 0.0}, 0.4};
  EXPECT_FALSE(s.is_physical());
}

TEST(Model, ScenarioTag) {
  EXPECT_EQ(ScenarioSwitches{}.tag(), "ion1_ac1");
  EXPECT_EQ((ScenarioSwitches{false, true, 0.0}.tag()), "ion0_ac1");
  EXPECT_EQ((ScenarioSwitches{true, false, 0.1}.tag()), "ion1_ac0_noise");
}

// The shipped constants table and the compiled defaults must agree exactly.
TEST(Model, ConstantsTableMatchesDefaults) {
  const Configuration c = parse_config_file(std::string(H1S2S_DATA_DIR) + "/constants.conf");
  const PhysicalConstants pc;
  const AtomicCoefficients co;
  EXPECT_EQ(c.constants.speed_of_light, pc.speed_of_light);
  EXPECT_EQ(c.constants.boltzmann, pc.boltzmann);
  EXPECT_EQ(c.constants.hydrogen_mass, pc.hydrogen_mass);
  EXPECT_EQ(c.constants.electron_proton_mass_ratio, pc.electron_proton_mass_ratio);
  EXPECT_EQ(c.coefficients.beta_ge, co.beta_ge);
  EXPECT_EQ(c.coefficients.beta_ioni, co.beta_ioni);
  EXPECT_EQ(c.coefficients.beta_ac, co.beta_ac);
  EXPECT_EQ(c.coefficients.transition_frequency, co.transition_frequency);
}
