#include "h1s2s/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "h1s2s/beamline.hpp"
#include "h1s2s/parallel.hpp"
#include "h1s2s/random.hpp"

namespace h1s2s {

Ensemble draw_ensemble(const RunConfig& config, const BeamlineGeometry& geometry,
                       const PhysicalConstants& constants, std::uint64_t seed) {
  config.validate();
  geometry.validate();
  if (config.atoms_per_line < 1) throw DomainError("atoms_per_line must be at least 1");

  const double v0 = most_probable_speed(config.temperature, constants);
  Ensemble ensemble;
  ensemble.seed = seed;
  ensemble.v_max = cutoff_speed(geometry.interaction_length, config.detection_delay);
  const auto wanted = static_cast<std::size_t>(config.atoms_per_line);
  ensemble.atoms.reserve(wanted);
  ensemble.candidate_index.reserve(wanted);

  // Give up once it is clear the acceptance rate is below 1e-6.
  constexpr std::int64_t kProbe = 10'000'000;
  std::uint64_t k = 0;
  while (ensemble.atoms.size() < wanted) {
    RandomStream stream(seed, StreamDomain::kTrajectory, k);
    const Trajectory trajectory =
        sample_trajectory(stream, geometry, v0, config.velocity_exponent);
    if (survives_gate(trajectory, config.detection_delay, geometry.interaction_length)) {
      ensemble.atoms.push_back(trajectory);
      ensemble.candidate_index.push_back(k);
    }
    ++k;
    const auto drawn = static_cast<std::int64_t>(k);
    if (drawn >= kProbe && static_cast<double>(ensemble.atoms.size()) < 1e-6 * drawn) {
      throw DomainError("time-of-flight gate accepts fewer than 1e-6 of the atoms (" +
                        std::to_string(ensemble.atoms.size()) + " of " + std::to_string(drawn) +
                        "); check detection_delay_us and temperature_k");
    }
  }
  ensemble.candidates_drawn = static_cast<std::int64_t>(k);
  return ensemble;
}

double AtomRecord::peak_response() const {
  double peak = 0.0;
  for (double r : responses) peak = std::max(peak, r);
  return peak;
}

LineResult simulate_line(const Ensemble& ensemble, double power, std::span<const double> detunings,
                         const ScenarioSwitches& scenario, const SimulationModel& model,
                         const LineOptions& options) {
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  if (ensemble.atoms.empty()) throw DomainError("ensemble is empty");
  if (detunings.empty()) throw DomainError("detuning grid is empty");
  scenario.validate();
  model.integrator.validate();

  const GaussianMode mode = model.mode();
  const std::size_t n_atoms = ensemble.atoms.size();
  const std::size_t n_det = detunings.size();
  std::vector<double> responses(n_atoms * n_det, 0.0);

  parallel_for(n_atoms * n_det, options.threads, [&](std::size_t job) {
    const std::size_t a = job / n_det;
    const std::size_t k = job % n_det;
    IntensityNoise noise(scenario.intensity_noise_fraction, ensemble.seed,
                         ensemble.candidate_index[a], static_cast<std::uint32_t>(k));
    try {
      const DensityState s =
          evolve_along(ensemble.atoms[a], mode, power, detunings[k], scenario, model.coefficients,
                       model.constants, model.integrator, &noise);
      responses[job] = std::clamp(s.rho_ee, 0.0, 1.0);
    } catch (const Error& e) {
      throw IntegrationError("atom " + std::to_string(a) + ": " + e.what());
    }
  });

  std::vector<double> weights(n_atoms, 1.0);
  if (options.detection_weighting) {
    for (std::size_t a = 0; a < n_atoms; ++a) {
      weights[a] = detection_weight(ensemble.atoms[a].speed(), ensemble.v_max);
    }
  }

  LineResult result;
  Spectrum& spectrum = result.spectrum;
  spectrum.detunings.assign(detunings.begin(), detunings.end());
  spectrum.signal.resize(n_det);
  spectrum.atoms_used = static_cast<std::int64_t>(n_atoms);
  spectrum.config_fingerprint = options.config_fingerprint;
  spectrum.seed = ensemble.seed;
  for (std::size_t k = 0; k < n_det; ++k) {
    CompensatedSum sum;
    for (std::size_t a = 0; a < n_atoms; ++a) sum.add(weights[a] * responses[a * n_det + k]);
    spectrum.signal[k] = std::max(0.0, sum.value());
  }

  if (options.keep_records) {
    result.records.reserve(n_atoms);
    for (std::size_t a = 0; a < n_atoms; ++a) {
      AtomRecord record;
      record.trajectory = ensemble.atoms[a];
      record.detection_weight = weights[a];
      record.responses.assign(responses.begin() + static_cast<std::ptrdiff_t>(a * n_det),
                              responses.begin() + static_cast<std::ptrdiff_t>((a + 1) * n_det));
      result.records.push_back(std::move(record));
    }
  }
  return result;
}

Spectrum simulate_line(const RunConfig& config, const ScenarioSwitches& scenario,
                       const SimulationModel& model, std::uint64_t seed,
                       const LineOptions& options) {
  const Ensemble ensemble = draw_ensemble(config, model.geometry, model.constants, seed);
  const auto grid = detuning_grid_for(config.grid, config.power_per_direction, model.coefficients,
                                      model.mode());
  LineOptions opts = options;
  opts.keep_records = false;
  return simulate_line(ensemble, config.power_per_direction, grid, scenario, model, opts)
      .spectrum;
}

std::vector<double> detuning_grid_for(const DetuningGrid& grid, double power,
                                      const AtomicCoefficients& coefficients,
                                      const GaussianMode& mode) {
  grid.validate();
  double half = grid.half_span;
  if (grid.auto_widen && power > 0.0) {
    const double peak = intensity(mode, 0.0, mode.waist_axial_position(), power);
    const double expected_shift = 0.5 * ac_stark_shift(peak, coefficients);
    half = std::max(half, 4.0 * expected_shift);
  }
  return uniform_grid(half, grid.points);
}

double mean_doppler_of_detected(std::span<const AtomRecord> records, DopplerWeighting weighting,
                                const AtomicCoefficients& coefficients,
                                const PhysicalConstants& constants) {
  if (records.empty()) throw DomainError("mean Doppler shift needs at least one record");
  CompensatedSum num;
  CompensatedSum den;
  for (const AtomRecord& r : records) {
    double w = r.detection_weight;
    if (weighting == DopplerWeighting::kSignal) w *= r.peak_response();
    num.add(w * second_order_doppler_shift(r.trajectory.speed(), coefficients, constants));
    den.add(w);
  }
  if (!(den.value() > 0.0)) throw DomainError("all record weights are zero");
  return num.value() / den.value();
}

}  // namespace h1s2s
