#include "maglat/atomic_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maglat/config.hpp"
#include "maglat/constants.hpp"
#include "maglat/errors.hpp"
#include "maglat/stark.hpp"

namespace maglat {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw InvariantError("invalid " + field + ": " + why);
}

// "1:-509.05e6, 2:305.44e6" -> sorted (F', offset) pairs.
std::vector<std::pair<double, double>> parse_hyperfine(const std::string& raw,
                                                       const std::string& key) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("key '" + key + "': expected F:offset entries");
    try {
      out.emplace_back(std::stod(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': non-numeric entry: " + item);
    }
  }
  return out;
}

void check_all_consumed(const KeyValueConfig& cfg) {
  const auto extra = cfg.unconsumed();
  if (!extra.empty())
    throw ConfigError(cfg.origin() + ": unknown key '" + extra.front() + "'");
}

}  // namespace

const TransitionLine& SpeciesData::line(const std::string& label) const {
  for (const auto& l : lines)
    if (l.label == label) return l;
  throw InvariantError("missing line data: " + label);
}

void validate(const SpeciesData& s) {
  require(s.nuclear_spin > 0, "nuclear_spin", "must be > 0");
  require(std::abs(2 * s.nuclear_spin - std::lround(2 * s.nuclear_spin)) < 1e-9,
          "nuclear_spin", "must be half-integer");
  require(s.hyperfine_splitting_hz > 0, "hyperfine_splitting_hz", "must be > 0");
  require(s.bohr_magneton_hz_per_G > 0, "bohr_magneton_hz_per_gauss",
          "must be > 0");
  require(!s.lines.empty(), "lines", "at least one transition line required");
  for (const auto& l : s.lines) {
    const std::string tag = "line." + l.label;
    require(l.frequency_hz > 0, tag + ".frequency_hz", "must be > 0");
    require(l.reduced_dipole_sq > 0, tag + ".reduced_dipole_sq", "must be > 0");
    require(l.excited_J == 0.5 || l.excited_J == 1.5, tag + ".excited_J",
            "must be 1/2 or 3/2");
    if (!l.excited_hyperfine.empty()) {
      require(std::is_sorted(l.excited_hyperfine.begin(),
                             l.excited_hyperfine.end(),
                             [](auto& a, auto& b) { return a.second < b.second; }),
              tag + ".hyperfine", "offsets must be ordered");
      // The offsets are measured from the line centroid, so their
      // degeneracy-weighted mean must vanish (tolerance 1 MHz).
      double wsum = 0, mean = 0;
      for (const auto& [Fp, off] : l.excited_hyperfine) {
        wsum += 2 * Fp + 1;
        mean += (2 * Fp + 1) * off;
      }
      require(std::abs(mean / wsum) < 1e6, tag + ".hyperfine",
              "weighted centroid deviates from frequency_hz by > 1 MHz");
    }
  }
}

void validate(const LatticeConfig& l) {
  require(std::abs(l.circ_degree_A) <= 1.0, "circ_degree_A",
          "must lie in [-1, 1]");
  require(l.trap_depth_uK >= 0, "trap_depth_uK", "must be >= 0");
  require(l.wavelength_nm > 0, "wavelength_nm", "must be > 0");
}

void validate(const SampleConfig& s, const LatticeConfig& l) {
  require(s.temperature_uK > 0, "temperature_uK", "must be > 0");
  require(s.temperature_uK < l.trap_depth_uK, "temperature_uK",
          "must be below trap_depth_uK for a trapped ensemble");
  require(s.loss_time_s > 0, "loss_time_s", "must be > 0");
  require(s.length_cm > 0, "length_cm", "must be > 0");
  require(s.gradient_G_per_cm >= 0, "gradient_G_per_cm", "must be >= 0");
  require(s.atom_count > 0, "atom_count", "must be > 0");
}

SpeciesData load_species(const std::string& path) {
  const auto cfg = KeyValueConfig::parse_file(path);
  SpeciesData s;
  s.name = cfg.get_string("name");
  s.nuclear_spin = cfg.get_number("nuclear_spin");
  s.g_J = cfg.get_number("g_J");
  s.g_I = cfg.get_number("g_I");
  s.hyperfine_splitting_hz = cfg.get_number("hyperfine_splitting_hz");
  s.bohr_magneton_hz_per_G = cfg.get_number("bohr_magneton_hz_per_gauss");
  for (const auto& label : cfg.group_names("line")) {
    TransitionLine l;
    l.label = label;
    const std::string p = "line." + label + ".";
    l.excited_J = cfg.get_number(p + "excited_J");
    l.frequency_hz = cfg.get_number(p + "frequency_hz");
    l.reduced_dipole_sq = cfg.get_number(p + "reduced_dipole_sq");
    if (cfg.has(p + "hyperfine"))
      l.excited_hyperfine =
          parse_hyperfine(cfg.get_string(p + "hyperfine"), p + "hyperfine");
    s.lines.push_back(std::move(l));
  }
  check_all_consumed(cfg);
  validate(s);
  return s;
}

LatticeConfig load_lattice(const std::string& path) {
  const auto cfg = KeyValueConfig::parse_file(path);
  LatticeConfig l;
  l.wavelength_nm = cfg.get_number("wavelength_nm");
  l.trap_depth_uK = cfg.get_number("trap_depth_uK");
  l.circ_degree_A = cfg.get_number("circ_degree_A");
  l.include_counter_rotating = cfg.get_bool("include_counter_rotating", true);
  check_all_consumed(cfg);
  validate(l);
  return l;
}

SampleConfig load_sample(const std::string& path) {
  const auto cfg = KeyValueConfig::parse_file(path);
  SampleConfig s;
  s.temperature_uK = cfg.get_number("temperature_uK");
  s.length_cm = cfg.get_number("length_cm");
  s.gradient_G_per_cm = cfg.get_number("gradient_G_per_cm");
  s.loss_time_s = cfg.get_number("loss_time_s");
  s.atom_count = static_cast<int>(cfg.get_number("atom_count"));
  check_all_consumed(cfg);
  // Trapping condition is checked against the lattice at use sites.
  require(s.temperature_uK > 0, "temperature_uK", "must be > 0");
  require(s.loss_time_s > 0, "loss_time_s", "must be > 0");
  require(s.length_cm > 0, "length_cm", "must be > 0");
  require(s.atom_count > 0, "atom_count", "must be > 0");
  return s;
}

double trap_depth_to_intensity(const SpeciesData& species,
                               const LatticeConfig& lattice) {
  if (lattice.trap_depth_uK == 0) return 0.0;
  // Scalar polarizability of the lower hyperfine level, per unit intensity.
  const double s1 = scalar_shift_lower_level(species, lattice);
  if (!(s1 < 0))
    throw InvariantError(
        "trap_depth_uK: scalar polarizability is not negative at " +
        std::to_string(lattice.wavelength_nm) + " nm (not trapping)");
  return constants::uK_to_Hz * lattice.trap_depth_uK / (-s1);
}

double intensity_to_trap_depth(const SpeciesData& species,
                               const LatticeConfig& lattice,
                               double intensity_W_cm2) {
  const double s1 = scalar_shift_lower_level(species, lattice);
  if (!(s1 < 0))
    throw InvariantError(
        "trap_depth_uK: scalar polarizability is not negative at " +
        std::to_string(lattice.wavelength_nm) + " nm (not trapping)");
  return -s1 * intensity_W_cm2 / constants::uK_to_Hz;
}

}  // namespace maglat
