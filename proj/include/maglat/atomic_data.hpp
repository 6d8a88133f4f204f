#pragma once

#include <optional>
#include <string>
#include <vector>

namespace maglat {

// One fine-structure transition out of the ground state.
struct TransitionLine {
  std::string label;        // e.g. "D1"
  double excited_J = 0.0;   // 1/2 or 3/2
  double frequency_hz = 0.0;  // ground-centroid to excited-centroid
  // |<J||er||J'>|^2 in (e*a0)^2, tabulated in the Clebsch-Gordan reduced-
  // element convention; the engine converts internally (see stark.cpp).
  double reduced_dipole_sq = 0.0;
  // Excited hyperfine levels as (F', offset from line centroid in Hz),
  // sorted by offset.  Empty means unresolved (treated as one level).
  std::vector<std::pair<double, double>> excited_hyperfine;
};

struct SpeciesData {
  std::string name;
  double nuclear_spin = 0.0;           // I (half-integer)
  double g_J = 0.0;                    // electronic g-factor, ground J=1/2
  double g_I = 0.0;                    // nuclear g-factor (Bohr-magneton sign convention)
  double hyperfine_splitting_hz = 0.0;  // ground splitting, Hz
  double bohr_magneton_hz_per_G = 0.0;  // mu_B/h
  std::vector<TransitionLine> lines;

  const TransitionLine& line(const std::string& label) const;
};

struct LatticeConfig {
  double wavelength_nm = 0.0;
  double trap_depth_uK = 0.0;     // peak depth at an antinode
  double circ_degree_A = 0.0;     // signed degree of circular polarization
  bool include_counter_rotating = true;
};

struct SampleConfig {
  double temperature_uK = 0.0;
  double length_cm = 0.0;          // sample extent along the field axis
  double gradient_G_per_cm = 0.0;  // ambient |dB/dz|
  double loss_time_s = 0.0;        // trap lifetime T
  int atom_count = 0;              // simulated ensemble size
};

SpeciesData load_species(const std::string& path);
LatticeConfig load_lattice(const std::string& path);
SampleConfig load_sample(const std::string& path);

// Validate invariants (also called by the loaders); throws InvariantError
// naming the offending field.
void validate(const SpeciesData& s);
void validate(const LatticeConfig& l);
void validate(const SampleConfig& s, const LatticeConfig& l);

// Peak intensity (W/cm^2) at which the scalar light shift of the lower
// hyperfine level equals -k_B * trap_depth, and its inverse.
double trap_depth_to_intensity(const SpeciesData& species,
                               const LatticeConfig& lattice);
double intensity_to_trap_depth(const SpeciesData& species,
                               const LatticeConfig& lattice,
                               double intensity_W_cm2);

}  // namespace maglat
