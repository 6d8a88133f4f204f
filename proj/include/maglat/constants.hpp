#pragma once

// Global unit conventions: energies as frequencies in Hz (E/h), magnetic
// field in Gauss, field gradients in G/cm, lengths in cm, times in s,
// trap depths in uK, light intensity in W/cm^2, polarizabilities in
// Hz/(W/cm^2), magnetic moments in Hz/G.

namespace maglat::constants {

// CODATA 2018 SI values (exact where the SI defines them so).
inline constexpr double planck_J_s            = 6.62607015e-34;
inline constexpr double speed_of_light_m_s    = 2.99792458e8;
inline constexpr double boltzmann_J_K         = 1.380649e-23;
inline constexpr double elementary_charge_C   = 1.602176634e-19;
inline constexpr double bohr_radius_m         = 5.29177210903e-11;
inline constexpr double vacuum_permittivity_F_m = 8.8541878128e-12;

inline constexpr double pi = 3.14159265358979323846;

// k_B/h: converts temperature (K) to frequency (Hz).
inline constexpr double kB_over_h_Hz_K = boltzmann_J_K / planck_J_s;
// Convenience: 1 uK of energy expressed in Hz.
inline constexpr double uK_to_Hz = kB_over_h_Hz_K * 1e-6;

// Second-order light-shift conversion: a dipole matrix element squared in
// (e*a0)^2 times an inverse-frequency denominator in 1/Hz times this factor
// gives a shift in Hz per W/cm^2 of time-averaged intensity.  Derivation:
// shift = (1/4)|d.E0|^2 * D / h^2 (D in s), E0^2 = 2 I / (eps0 c),
// I in W/cm^2 = 1e4 W/m^2.
inline constexpr double stark_Hz_per_Wcm2 =
    (elementary_charge_C * bohr_radius_m) * (elementary_charge_C * bohr_radius_m)
    * 1e4 / (2.0 * vacuum_permittivity_F_m * speed_of_light_m_s
             * planck_J_s * planck_J_s);

inline constexpr double nm_to_Hz(double wavelength_nm) {
  return speed_of_light_m_s / (wavelength_nm * 1e-9);
}

}  // namespace maglat::constants
