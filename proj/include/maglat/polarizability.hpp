#pragma once

#include <map>
#include <string>

#include "maglat/stark.hpp"

namespace maglat {

// Irreducible components of the light-shift operator, per unit intensity
// (Hz per W/cm^2), normalized so the closed-form magic-field expressions
// (magic.cpp) hold verbatim.  In terms of the per-level diagonal
// u_F(m) = s_F + v_F m + t_F (3m^2 - F(F+1)) and the F-coupling element
// <2m|U|1m> = [chi + xi m + rho (m^2-1)] sqrt(4-m^2):
//   alpha0_F = s_F,  alpha1_1 = (2/sqrt3) v_1,  alpha1_2 = 2 v_2,
//   alpha2_1 = 2 sqrt5 t_1,  alpha2_2 = 6 sqrt7 t_2,
//   alpha12_vector = 4 sqrt(5/3) chi, and the same scale for xi and rho.
// xi (rank-2) and rho (rank-3 admixture) are tiny excited-hyperfine effects
// kept only so that decompose/assemble is an exact round trip; no closed
// form consumes them.
struct PolarizabilitySet {
  std::map<int, double> alpha0;  // F -> scalar
  std::map<int, double> alpha1;  // F -> vector (odd in helicity)
  std::map<int, double> alpha2;  // F -> rank-2 tensor
  double alpha12_vector = 0.0;   // F=1 <-> F=2 vector coupling (odd in helicity)
  double alpha12_tensor = 0.0;   // rank-2 F-coupling (even in helicity)
  double alpha12_rank3 = 0.0;    // rank-3 F-coupling admixture (odd in helicity)
  double wavelength_nm = 0.0;
  std::string convention_id = "eq-closed-form-v1";
};

// Project U (Hermitian, m-block structured) onto the components above and
// divide out the intensity.  Throws InvariantError if U is not Hermitian,
// not m-block structured, or if reassembly misses U by more than 1e-10
// relative (a convention bug, not a data problem).
PolarizabilitySet decompose_stark(const Matrix8& U, double intensity_W_cm2,
                                  double wavelength_nm = 0.0);

// Inverse of decompose_stark.  A_scale and helicity_sign rescale/flip the
// helicity-odd components relative to the operator the set was decomposed
// from (the incoherent sigma+/sigma- mixing model makes those components
// exactly linear in the degree of circular polarization).
Matrix8 assemble_stark(const PolarizabilitySet& pset, double intensity_W_cm2,
                       double A_scale = 1.0, int helicity_sign = +1);

}  // namespace maglat
