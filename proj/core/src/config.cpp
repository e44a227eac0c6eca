#include "h1s2s/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>
#include <variant>

#include "h1s2s/beamline.hpp"

namespace h1s2s {

ConfigError::ConfigError(const std::string& message, int line, std::string key)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      key_(std::move(key)) {}

namespace {

using DoubleRef = double& (*)(Configuration&);
using OptionalRef = std::optional<double>& (*)(Configuration&);
using IntRef = int& (*)(Configuration&);
using Int64Ref = std::int64_t& (*)(Configuration&);
using Uint64Ref = std::uint64_t& (*)(Configuration&);
using UnsignedRef = unsigned& (*)(Configuration&);
using BoolRef = bool& (*)(Configuration&);
using ListRef = std::vector<double>& (*)(Configuration&);
using Accessor =
    std::variant<DoubleRef, OptionalRef, IntRef, Int64Ref, Uint64Ref, UnsignedRef, BoolRef, ListRef>;

struct KeyDef {
  const char* name;
  Accessor access;
  double scale = 1.0;  // SI value = file value * scale
};

#define H1S2S_REF(expr) [](Configuration& c) -> auto& { return c.expr; }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"power_per_direction_w", DoubleRef{H1S2S_REF(run.power_per_direction)}},
      {"temperature_k", DoubleRef{H1S2S_REF(run.temperature)}},
      {"detection_delay_us", DoubleRef{H1S2S_REF(run.detection_delay)}, 1e-6},
      {"atoms_per_line", Int64Ref{H1S2S_REF(run.atoms_per_line)}},
      {"seed", Uint64Ref{H1S2S_REF(run.rng_seed)}},
      {"velocity_exponent", IntRef{H1S2S_REF(run.velocity_exponent)}},
      {"detuning_span_hz", DoubleRef{H1S2S_REF(run.grid.half_span)}},
      {"detuning_points", IntRef{H1S2S_REF(run.grid.points)}},
      {"detuning_autowiden", BoolRef{H1S2S_REF(run.grid.auto_widen)}},
      {"waist_um", DoubleRef{H1S2S_REF(geometry.waist_radius)}, 1e-6},
      {"wavelength_nm", DoubleRef{H1S2S_REF(geometry.wavelength)}, 1e-9},
      {"nozzle_radius_mm", DoubleRef{H1S2S_REF(geometry.nozzle_radius)}, 1e-3},
      {"frozen_nozzle_radius_mm", OptionalRef{H1S2S_REF(geometry.frozen_nozzle_radius)}, 1e-3},
      {"d1_radius_mm", DoubleRef{H1S2S_REF(geometry.d1_radius)}, 1e-3},
      {"d2_radius_mm", DoubleRef{H1S2S_REF(geometry.d2_radius)}, 1e-3},
      {"separation_cm", DoubleRef{H1S2S_REF(geometry.d1_d2_separation)}, 1e-2},
      {"interaction_length_cm", DoubleRef{H1S2S_REF(geometry.interaction_length)}, 1e-2},
      {"d1_axial_position_cm", DoubleRef{H1S2S_REF(geometry.d1_axial_position)}, 1e-2},
      {"ionization_on", BoolRef{H1S2S_REF(scenario.ionization_on)}},
      {"ac_stark_on", BoolRef{H1S2S_REF(scenario.ac_stark_on)}},
      {"noise_fraction", DoubleRef{H1S2S_REF(scenario.intensity_noise_fraction)}},
      {"beta_ge", DoubleRef{H1S2S_REF(coefficients.beta_ge)}},
      {"beta_ioni", DoubleRef{H1S2S_REF(coefficients.beta_ioni)}},
      {"beta_ac", DoubleRef{H1S2S_REF(coefficients.beta_ac)}},
      {"transition_frequency_hz", DoubleRef{H1S2S_REF(coefficients.transition_frequency)}},
      {"speed_of_light", DoubleRef{H1S2S_REF(constants.speed_of_light)}},
      {"boltzmann", DoubleRef{H1S2S_REF(constants.boltzmann)}},
      {"hydrogen_mass", DoubleRef{H1S2S_REF(constants.hydrogen_mass)}},
      {"electron_proton_mass_ratio", DoubleRef{H1S2S_REF(constants.electron_proton_mass_ratio)}},
      {"rel_tol", DoubleRef{H1S2S_REF(integrator.relative_tolerance)}},
      {"abs_tol", DoubleRef{H1S2S_REF(integrator.absolute_tolerance)}},
      {"max_steps", Int64Ref{H1S2S_REF(integrator.max_steps)}},
      {"threads", UnsignedRef{H1S2S_REF(threads)}},
      {"powers_w", ListRef{H1S2S_REF(powers)}},
      {"rect_intensity_mw_m2", DoubleRef{H1S2S_REF(rect_intensity)}, 1e6},
      {"rect_duration_ms", DoubleRef{H1S2S_REF(rect_duration)}, 1e-3},
      {"frozen_scans", IntRef{H1S2S_REF(frozen_scans)}},
      {"frozen_points", IntRef{H1S2S_REF(frozen_points)}},
      {"frozen_power_min_w", DoubleRef{H1S2S_REF(frozen_power_range.first)}},
      {"frozen_power_max_w", DoubleRef{H1S2S_REF(frozen_power_range.second)}},
      {"frozen_radius_min_um", DoubleRef{H1S2S_REF(frozen_radius_range.first)}, 1e-6},
      {"frozen_radius_max_um", DoubleRef{H1S2S_REF(frozen_radius_range.second)}, 1e-6},
      {"record_atoms", BoolRef{H1S2S_REF(record_atoms)}},
  };
  return table;
}

#undef H1S2S_REF

const KeyDef* find_key(std::string_view name) {
  for (const KeyDef& k : key_table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text, const char* key, int line) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("cannot parse '" + std::string(text) + "' as a number for " + key, line,
                      key);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ConfigError(std::string(key) + " must be finite", line, key);
    }
  }
  return value;
}

bool parse_bool(std::string_view text, const char* key, int line) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("expected true/false for " + std::string(key) + ", got '" +
                        std::string(text) + "'",
                    line, key);
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return {buf, ptr};
}

// Sub-unit scales divide by the exact integer 1/scale: 0.65 mm then maps to
// the same double as the literal 0.65e-3.
double to_si(double file_value, double scale) {
  return scale < 1.0 ? file_value / std::round(1.0 / scale) : file_value * scale;
}

double from_si(double v, double scale) {
  return scale < 1.0 ? v * std::round(1.0 / scale) : v / scale;
}

// Shortest decimal d with to_si(d) == v exactly, so echo/parse is lossless.
std::string format_scaled(double v, double scale) {
  if (scale == 1.0) return shortest(v);
  // Walk outward from v / scale; exact preimages, when they exist, are a few
  // ulps away. Keep the shortest.
  std::string best;
  double lo = from_si(v, scale);
  double hi = lo;
  for (int i = 0; i < 64; ++i) {
    for (double c : {lo, hi}) {
      const std::string s = shortest(c);
      double back = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), back);
      if (to_si(back, scale) == v && (best.empty() || s.size() < best.size())) best = s;
    }
    lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  }
  if (!best.empty()) return best;
  // Not reachable from a parsed file (e.g. a default like 0.136 m written in
  // cm); 15 digits drop the conversion noise.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", from_si(v, scale));
  return buf;
}

void assign(Configuration& config, const KeyDef& def, std::string_view text, int line) {
  const char* key = def.name;
  std::visit(
      [&](auto ref) {
        using Ref = decltype(ref);
        if constexpr (std::is_same_v<Ref, DoubleRef>) {
          ref(config) = to_si(parse_number<double>(text, key, line), def.scale);
        } else if constexpr (std::is_same_v<Ref, OptionalRef>) {
          if (text == "none" || text.empty()) {
            ref(config).reset();
          } else {
            ref(config) = to_si(parse_number<double>(text, key, line), def.scale);
          }
        } else if constexpr (std::is_same_v<Ref, IntRef>) {
          ref(config) = parse_number<int>(text, key, line);
        } else if constexpr (std::is_same_v<Ref, Int64Ref>) {
          ref(config) = parse_number<std::int64_t>(text, key, line);
        } else if constexpr (std::is_same_v<Ref, Uint64Ref>) {
          ref(config) = parse_number<std::uint64_t>(text, key, line);
        } else if constexpr (std::is_same_v<Ref, UnsignedRef>) {
          ref(config) = parse_number<unsigned>(text, key, line);
        } else if constexpr (std::is_same_v<Ref, BoolRef>) {
          ref(config) = parse_bool(text, key, line);
        } else {
          std::vector<double> values;
          std::string_view rest = text;
          while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            values.push_back(to_si(parse_number<double>(item, key, line), def.scale));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
          }
          if (values.empty()) throw ConfigError(std::string(key) + " is empty", line, key);
          ref(config) = std::move(values);
        }
      },
      def.access);
}

std::string value_text(const Configuration& config, const KeyDef& def) {
  auto& c = const_cast<Configuration&>(config);
  return std::visit(
      [&](auto ref) -> std::string {
        using Ref = decltype(ref);
        if constexpr (std::is_same_v<Ref, DoubleRef>) {
          return format_scaled(ref(c), def.scale);
        } else if constexpr (std::is_same_v<Ref, OptionalRef>) {
          return ref(c) ? format_scaled(*ref(c), def.scale) : "none";
        } else if constexpr (std::is_same_v<Ref, BoolRef>) {
          return ref(c) ? "true" : "false";
        } else if constexpr (std::is_same_v<Ref, ListRef>) {
          std::string s;
          for (double v : ref(c)) {
            if (!s.empty()) s += ", ";
            s += format_scaled(v, def.scale);
          }
          return s;
        } else {
          return std::to_string(ref(c));
        }
      },
      def.access);
}

// Leading word of a validation message is the offending key.
std::string key_of(const std::string& message) {
  const std::string word = message.substr(0, message.find(' '));
  return find_key(word) != nullptr ? word : std::string{};
}

}  // namespace

void Configuration::validate() const {
  try {
    run.validate();
    geometry.validate();
    scenario.validate();
    coefficients.validate();
    constants.validate();
    integrator.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), 0, key_of(e.what()));
  }
  auto require = [](bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(std::string(key) + " " + msg, 0, key);
  };
  require(!powers.empty(), "powers_w", "must list at least one power");
  for (double p : powers) require(p >= 0.0, "powers_w", "must be non-negative");
  require(rect_intensity > 0.0, "rect_intensity_mw_m2", "must be positive");
  require(rect_duration > 0.0, "rect_duration_ms", "must be positive");
  require(frozen_scans >= 1, "frozen_scans", "must be at least 1");
  require(frozen_points >= 2, "frozen_points", "must be at least 2");
  require(frozen_power_range.first >= 0.0, "frozen_power_min_w", "must be non-negative");
  require(frozen_power_range.second > frozen_power_range.first, "frozen_power_max_w",
          "must exceed frozen_power_min_w");
  require(frozen_radius_range.first > 0.0, "frozen_radius_min_um", "must be positive");
  require(frozen_radius_range.second >= frozen_radius_range.first, "frozen_radius_max_um",
          "must not be below frozen_radius_min_um");
}

SimulationModel Configuration::model() const {
  return {constants, coefficients, geometry, integrator};
}

StudySettings Configuration::study() const {
  StudySettings s;
  s.config = run;
  s.model = model();
  s.threads = threads;
  s.config_fingerprint = config_fingerprint(*this, scenario);
  return s;
}

Configuration parse_config(std::istream& in) {
  Configuration config;
  std::map<std::string, int, std::less<>> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const KeyDef* def = find_key(key);
    if (def == nullptr) throw ConfigError("unknown key '" + key + "'", line_no, key);
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("key '" + key + "' repeated (first on line " +
                            std::to_string(it->second) + ")",
                        line_no, key);
    }
    seen.emplace(key, line_no);
    assign(config, *def, value, line_no);
  }
  if (in.bad()) throw ConfigError("read error");
  config.validate();
  return config;
}

Configuration parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

Configuration parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what(), 0, e.key());
  }
}

void apply_override(Configuration& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  const KeyDef* def = find_key(key);
  if (def == nullptr) throw ConfigError("unknown key '" + key + "' in override", 0, key);
  assign(config, *def, trim(assignment.substr(eq + 1)), 0);
  config.validate();
}

std::string echo_config(const Configuration& config) {
  std::string out;
  const double v_max =
      cutoff_speed(config.geometry.interaction_length, config.run.detection_delay);
  char buf[96];
  if (std::isfinite(v_max)) {
    std::snprintf(buf, sizeof buf, "# cutoff speed: %.1f m/s\n", v_max);
  } else {
    std::snprintf(buf, sizeof buf, "# cutoff speed: none (no gate)\n");
  }
  out += buf;
  std::snprintf(buf, sizeof buf, "# most probable speed: %.6g m/s\n",
                most_probable_speed(config.run.temperature, config.constants));
  out += buf;
  for (const KeyDef& def : key_table()) {
    out += def.name;
    out += " = ";
    out += value_text(config, def);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const KeyDef& def : key_table()) keys.emplace_back(def.name);
  return keys;
}

std::uint64_t config_fingerprint(const Configuration& config, const ScenarioSwitches& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const KeyDef& def : key_table()) {
    if (std::string_view(def.name) == "threads") continue;
    mix(def.name);
    mix("=");
    mix(value_text(config, def));
    mix("\n");
  }
  mix(scenario.tag());
  mix(shortest(scenario.intensity_noise_fraction));
  return h;
}

bool operator==(const Configuration& a, const Configuration& b) {
  for (const KeyDef& def : key_table()) {
    auto& ca = const_cast<Configuration&>(a);
    auto& cb = const_cast<Configuration&>(b);
    const bool same = std::visit(
        [&](auto ref) { return ref(ca) == ref(cb); }, def.access);
    if (!same) return false;
  }
  return true;
}

}  // namespace h1s2s
