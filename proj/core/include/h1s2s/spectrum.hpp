#pragma once

#include <cstdint>
#include <vector>

namespace h1s2s {

/// Excited-state signal versus detuning (Hz at 121 nm).
struct Spectrum {
  std::vector<double> detunings;
  std::vector<double> signal;
  std::int64_t atoms_used = 1;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t seed = 0;
};

}  // namespace h1s2s
