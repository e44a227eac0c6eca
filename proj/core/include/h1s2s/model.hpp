#pragma once

// Physical constants, atomic coefficients and the run-level value types shared
// by every stage of the simulation.
//
// Frequencies are ordinary frequencies (Hz) on the 121 nm transition scale.
// The only place 2*pi appears is the Bloch right-hand side.

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace h1s2s {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

struct PhysicalConstants {
  double speed_of_light = 299792458.0;               // m/s
  double boltzmann = 1.380649e-23;                   // J/K
  double hydrogen_mass = 1.6735575e-27;              // kg, 1H atom
  double electron_proton_mass_ratio = 5.44617021487e-4;

  void validate() const;
};

/// Intensity coefficients of the 1S-2S two-photon transition, in Hz per W/m^2.
///
/// beta_ac already contains the reduced-mass factor; beta_ge and beta_ioni do
/// not and are multiplied by reduced_mass_correction() where they are used.
struct AtomicCoefficients {
  double beta_ge = 3.68111e-5;
  double beta_ioni = 1.20208e-4;
  double beta_ac = 1.66982e-4;
  double transition_frequency = 2.466061e15;  // Hz, unperturbed 1S-2S

  void validate() const;
};

struct BeamlineGeometry {
  double nozzle_radius = 0.6e-3;        // m
  double d1_radius = 0.65e-3;           // m
  double d2_radius = 0.70e-3;           // m
  double d1_d2_separation = 0.136;      // m, light interaction length
  double interaction_length = 0.150;    // m, D1 plane to detector (gate length)
  double waist_radius = 283e-6;         // m
  double wavelength = 243.1e-9;         // m
  double d1_axial_position = 0.07;      // m, D1 plane relative to the waist plane
  std::optional<double> frozen_nozzle_radius;  // m, ice-restricted aperture

  /// Radius of the disk on the D1 plane over which trajectories start.
  [[nodiscard]] double entry_radius() const;

  void validate() const;
};

struct ScenarioSwitches {
  bool ionization_on = true;
  bool ac_stark_on = true;
  double intensity_noise_fraction = 0.0;

  void validate() const;

  /// Short stable tag, e.g. "ion1_ac1".
  [[nodiscard]] std::string tag() const;

  friend bool operator==(const ScenarioSwitches&, const ScenarioSwitches&) = default;
};

/// Detuning grid description. The half span is widened with power when
/// auto_widen is set so the Stark-shifted line stays well inside the grid.
struct DetuningGrid {
  double half_span = 2500.0;  // Hz at 121 nm
  int points = 51;
  bool auto_widen = true;

  void validate() const;
};

struct RunConfig {
  double power_per_direction = 0.3;   // W
  double temperature = 5.0;           // K
  double detection_delay = 1210e-6;   // s
  DetuningGrid grid;
  std::int64_t atoms_per_line = 10000;
  std::uint64_t rng_seed = 20060101;
  int velocity_exponent = 3;

  void validate() const;
};

/// Populations and coherence of the two-level system with ionization loss.
struct DensityState {
  double rho_gg = 1.0;
  std::complex<double> rho_ge{0.0, 0.0};
  double rho_ee = 0.0;

  [[nodiscard]] double trace() const { return rho_gg + rho_ee; }

  /// Checks the population bounds and the coherence (Cauchy-Schwarz) bound
  /// with the given slack.
  [[nodiscard]] bool is_physical(double tolerance = 1e-9) const;

  static DensityState ground() { return {}; }
};

/// (m_e/mu)^3 = (1 + m_e/m_p)^3.
[[nodiscard]] double reduced_mass_correction(const PhysicalConstants& constants);

/// v0 = sqrt(2 k_B T / m_H). Throws DomainError for T <= 0.
[[nodiscard]] double most_probable_speed(double temperature,
                                         const PhysicalConstants& constants);

/// Observed line-center shift from time dilation: -(nu_eg/2)(v/c)^2.
[[nodiscard]] double second_order_doppler_shift(double speed,
                                                const AtomicCoefficients& coefficients,
                                                const PhysicalConstants& constants);

/// Symmetric uniform grid of `points` detunings in [-half_span, half_span].
[[nodiscard]] std::vector<double> uniform_grid(double half_span, int points);

}  // namespace h1s2s
