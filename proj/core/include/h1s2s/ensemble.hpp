#pragma once

// Monte-Carlo ensemble: gated atom sampling and the summed line shape.

#include <cstdint>
#include <span>
#include <vector>

#include "h1s2s/bloch.hpp"
#include "h1s2s/dopri5.hpp"
#include "h1s2s/model.hpp"
#include "h1s2s/optics.hpp"
#include "h1s2s/spectrum.hpp"
#include "h1s2s/trajectory.hpp"

namespace h1s2s {

/// Everything the per-atom physics needs besides the run configuration.
struct SimulationModel {
  PhysicalConstants constants;
  AtomicCoefficients coefficients;
  BeamlineGeometry geometry;
  IntegratorSettings integrator;

  [[nodiscard]] GaussianMode mode() const { return GaussianMode::from_geometry(geometry); }
};

/// Atoms that passed the time-of-flight gate, in candidate order.
struct Ensemble {
  std::vector<Trajectory> atoms;
  /// Candidate number of each accepted atom; addresses its noise streams.
  std::vector<std::uint64_t> candidate_index;
  std::int64_t candidates_drawn = 0;
  std::uint64_t seed = 0;
  double v_max = 0.0;  // m/s, +inf without a gate

  [[nodiscard]] double acceptance_fraction() const {
    return candidates_drawn > 0 ? static_cast<double>(atoms.size()) / candidates_drawn : 0.0;
  }
};

/// Draws candidates until `atoms_per_line` survive the gate. Candidate k uses
/// the trajectory stream (seed, k), so the result is a pure function of the
/// inputs. Throws DomainError when the acceptance rate falls below 1e-6.
[[nodiscard]] Ensemble draw_ensemble(const RunConfig& config, const BeamlineGeometry& geometry,
                                     const PhysicalConstants& constants, std::uint64_t seed);

/// One atom's contribution: final rho_ee per detuning and its detection weight.
struct AtomRecord {
  Trajectory trajectory;
  double detection_weight = 1.0;
  std::vector<double> responses;

  [[nodiscard]] double peak_response() const;
};

struct LineOptions {
  unsigned threads = 0;  // 0: machine parallelism
  bool keep_records = false;
  /// Multiply each atom's response by 1 - v/v_max (detected-speed weighting).
  bool detection_weighting = true;
  std::uint64_t config_fingerprint = 0;
};

struct LineResult {
  Spectrum spectrum;
  std::vector<AtomRecord> records;  // filled when keep_records
};

/// Integrates every atom at every detuning and sums the weighted responses.
[[nodiscard]] LineResult simulate_line(const Ensemble& ensemble, double power,
                                       std::span<const double> detunings,
                                       const ScenarioSwitches& scenario,
                                       const SimulationModel& model, const LineOptions& options);

/// Convenience overload: draws the ensemble for `config` and uses its power and grid.
[[nodiscard]] Spectrum simulate_line(const RunConfig& config, const ScenarioSwitches& scenario,
                                     const SimulationModel& model, std::uint64_t seed,
                                     const LineOptions& options = {});

/// Detuning grid for a given power. With auto_widen the half span grows to
/// four times the expected mean light shift, taken as half the on-axis shift.
[[nodiscard]] std::vector<double> detuning_grid_for(const DetuningGrid& grid, double power,
                                                    const AtomicCoefficients& coefficients,
                                                    const GaussianMode& mode);

enum class DopplerWeighting {
  kUniform,  // detection weight only: the detected-speed distribution
  kSignal,   // detection weight times each atom's peak response
};

/// Weighted mean second-order Doppler shift (Hz) of the recorded atoms.
[[nodiscard]] double mean_doppler_of_detected(std::span<const AtomRecord> records,
                                              DopplerWeighting weighting,
                                              const AtomicCoefficients& coefficients,
                                              const PhysicalConstants& constants = {});

}  // namespace h1s2s
