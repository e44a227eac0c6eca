#pragma once

// CSV and JSON writers. Numbers are printed with 6 significant digits, seeds
// and fingerprints in full.

#include <filesystem>
#include <span>
#include <string>

#include "h1s2s/bloch.hpp"
#include "h1s2s/experiments.hpp"
#include "h1s2s/fitting.hpp"
#include "h1s2s/spectrum.hpp"

namespace h1s2s {

inline constexpr const char* kSpectrumCsvHeader = "detuning_hz,signal,atoms_used";
inline constexpr const char* kFitCsvHeader = "power_w,center_hz,fwhm_hz,amplitude,offset,converged";

/// "%.6g"; "nan" and "inf"/"-inf" for non-finite values.
[[nodiscard]] std::string format_number(double value);

[[nodiscard]] std::string spectrum_csv(const Spectrum& spectrum);
/// JSON sidecar: fingerprint, seed, atoms_used, grid size.
[[nodiscard]] std::string spectrum_sidecar_json(const Spectrum& spectrum);

[[nodiscard]] std::string fit_json(const LorentzianFit& fit);
[[nodiscard]] std::string trend_json(const TrendFit& fit);

/// One fit row per power.
[[nodiscard]] std::string scan_csv(const PowerScanResult& scan);
[[nodiscard]] std::string scan_summary_json(const PowerScanResult& scan,
                                            std::uint64_t config_fingerprint);

[[nodiscard]] std::string scenario_matrix_json(std::span<const PowerScanResult> scans,
                                               std::uint64_t config_fingerprint);

[[nodiscard]] std::string doppler_study_csv(std::span<const DopplerStudyResult> rows);
[[nodiscard]] std::string doppler_study_json(std::span<const DopplerStudyResult> rows,
                                             std::uint64_t seed);

/// Rows per (scan, power point) with the drawn radius and fitted center.
[[nodiscard]] std::string frozen_points_csv(const FrozenNozzleResult& result);
/// Rows per scan: intercept and slope.
[[nodiscard]] std::string frozen_scans_csv(const FrozenNozzleResult& result);
[[nodiscard]] std::string frozen_summary_json(const FrozenNozzleResult& random,
                                              const FrozenNozzleResult& control,
                                              std::uint64_t seed);

/// Writes `content` to `path`, creating parent directories. Throws Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// File stem for a power in mW, e.g. 0.35 W -> "line_350".
[[nodiscard]] std::string line_file_stem(double power_w);

}  // namespace h1s2s
