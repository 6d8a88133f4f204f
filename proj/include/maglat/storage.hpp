#pragma once
// Retrieval-efficiency simulator: a thermal ensemble stored in the lattice
// dephases through per-atom detunings (inhomogeneous light shift plus a
// magnetic-field gradient along the sample) and decays through trap loss.
// Dephasing is static inhomogeneous broadening: atoms are lattice-pinned on
// the storage timescale, so no motional rephasing is modeled.

#include <cstdint>
#include <string>
#include <vector>

#include "maglat/curves.hpp"
#include "maglat/magic.hpp"

namespace maglat {

// Thermal ensemble snapshot.  The light intensity an atom samples is
// f = exp(-2 rho^2 / w^2) with rho Boltzmann-distributed in the harmonic
// radial well and truncated at the trap depth, so f_j in (1/e, 1]; axial
// confinement pins atoms at antinodes (full intensity).  Positions are
// uniform over the sample length.
struct EnsembleDraw {
  std::vector<double> intensity_fraction;  // f_j
  std::vector<double> z_cm;                // in [-l/2, +l/2]
  std::vector<double> weight;              // sums to 1
  std::uint64_t rng_seed = 0;
};

// Atom j consumes counters (2j, 2j+1) of the seed's stream, so the draw is
// bitwise reproducible and order-independent.  Throws InvariantError when
// temperature >= depth (untrapped regime).
EnsembleDraw draw_ensemble(const SampleConfig& sample,
                           const LatticeConfig& lattice, int n,
                           std::uint64_t seed);

// Mean of exp(-theta x) under the truncated-exponential radial model at
// theta = temperature/depth; closed form used by draw_ensemble's self-check.
double thermal_mean_fraction(double theta);

// Per-atom coherence detunings delta_j = light_part(f_j * I) + mu' * B' * z_j
// at bias field B, with mu' evaluated at (B, lattice intensity).
std::vector<double> atom_detunings(const ManifoldEngine& engine, Coherence coh,
                                   double B_G, const EnsembleDraw& draw,
                                   double gradient_G_per_cm);

// eta0 * |sum_j w_j exp(-i 2 pi delta_j t)|^2 * exp(-t / loss_time).
double ensemble_efficiency(const std::vector<double>& delta_Hz,
                           const std::vector<double>& weight, double t_s,
                           double loss_time_s, double eta0);

// True when the curve, after a moving-average smoothing window, never rises.
bool check_monotone_envelope(const std::vector<double>& efficiency,
                             int window = 3);

// eta(t) at fixed bias field; records a warning when the smoothed envelope
// is non-monotone (gradient-dephasing ringing).
DecayCurve retrieval_curve(const ManifoldEngine& engine, Coherence coh,
                           double B_G, const SampleConfig& sample,
                           const std::vector<double>& times_s,
                           std::uint64_t seed, double eta0 = 0.034);
DecayCurve retrieval_curve(const SpeciesData& species,
                           const LatticeConfig& lattice, double B_G,
                           Coherence coh, const SampleConfig& sample,
                           const std::vector<double>& times_s,
                           std::uint64_t seed, double eta0 = 0.034);

// eta(B) at fixed storage time.
ScanCurve field_scan(const ManifoldEngine& engine, Coherence coh,
                     const SampleConfig& sample, double fixed_t_s,
                     const std::vector<double>& B_grid_G, std::uint64_t seed,
                     double eta0 = 0.034);
ScanCurve field_scan(const SpeciesData& species, const LatticeConfig& lattice,
                     Coherence coh, const SampleConfig& sample,
                     double fixed_t_s, const std::vector<double>& B_grid_G,
                     std::uint64_t seed, double eta0 = 0.034);

// 1/tau = 2 pi mu' B' l + 1/T (gradient dephasing rate plus trap loss).
double predicted_lifetime(double mu_prime_Hz_per_G, double b_prime_G_per_cm,
                          double l_cm, double loss_time_s);

// Residual lifetime with the loss channel removed: T tau / (T - tau).
// Throws InvariantError when tau >= T (loss alone cannot explain the decay).
double loss_deconvolve(double tau_s, double loss_time_s);

// Interpolated time at which eta(t) falls to eta(0)/e for the ensemble
// behind retrieval_curve's formula.
double lifetime_1e(const std::vector<double>& delta_Hz,
                   const std::vector<double>& weight, double loss_time_s);

struct DepthLifetime {
  double depth_uK = 0.0;
  double b0_G = 0.0;    // magic field used at this depth
  double tau_1e_s = 0.0;
};

// 1/e lifetimes across trap depths, each evaluated at the supplied
// (recomputed) magic field for that depth.
std::vector<DepthLifetime> depth_sweep(const SpeciesData& species,
                                       const LatticeConfig& lattice,
                                       Coherence coh,
                                       const SampleConfig& sample,
                                       const std::vector<double>& depths_uK,
                                       const std::vector<double>& b_at_magic_G,
                                       std::uint64_t seed);

struct GradientCalibration {
  double gradient_G_per_cm = 0.0;
  double fitted_tau_s = 0.0;   // single-exponential fit on the time grid
  double b0_G = 0.0;           // clock magic field used
  double mu_prime_Hz_per_G = 0.0;
  int iterations = 0;
};

// Solves for the gradient at which the clock decay at its magic field fits
// a single exponential with lifetime target_tau_s.  The bisection runs on
// m = mu' B' l restricted to [0.05, 2.5] (below the first ringing zero) so
// sidelobe-latched fits cannot masquerade as roots.
GradientCalibration calibrate_gradient(const ManifoldEngine& engine,
                                       const SampleConfig& sample,
                                       const std::vector<double>& times_s,
                                       std::uint64_t seed,
                                       double target_tau_s = 0.32,
                                       double eta0 = 0.034);

}  // namespace maglat
