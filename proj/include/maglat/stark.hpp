#pragma once

#include <Eigen/Dense>

#include "maglat/atomic_data.hpp"

namespace maglat {

using Matrix8 = Eigen::Matrix<double, 8, 8>;

struct StarkOptions {
  // Resolve the excited hyperfine levels in the energy denominators (needed
  // for any rank-2 ground light shift of a J=1/2 atom); when false, each
  // line is treated as a single level at its centroid.
  bool include_excited_hyperfine = true;
  // Test toggle: measure detunings from the ground centroid instead of from
  // each hyperfine level; kills the differential scalar shift identically.
  bool zero_ground_hf_offset_in_detunings = false;
  // Refuse to evaluate if the lattice is detuned less than this from any
  // transition.
  double resonance_guard_hz = 1e11;
};

// Light-shift operator per unit intensity (Hz per W/cm^2) on the ground
// |F,m> basis.  Positive circ_degree_A weights the sigma+ component
// (1+A)/2 and sigma- (1-A)/2; the two circular components add incoherently,
// which is exact for propagation along the quantization axis at bias fields
// large enough that Delta-m = +-2 light couplings are non-secular.
Matrix8 stark_operator_unit(const SpeciesData& species, double wavelength_nm,
                            double circ_degree_A,
                            bool include_counter_rotating = true,
                            const StarkOptions& opts = {});

// Same operator scaled to the lattice's trap-depth intensity.
Matrix8 stark_operator_direct(const SpeciesData& species,
                              const LatticeConfig& lattice,
                              const StarkOptions& opts = {});

// Rank-0 (m-averaged) diagonal shift of the F = I - 1/2 level per unit
// intensity; the trap-depth <-> intensity conversion anchor.
double scalar_shift_lower_level(const SpeciesData& species,
                                const LatticeConfig& lattice,
                                const StarkOptions& opts = {});

}  // namespace maglat
