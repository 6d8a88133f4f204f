#pragma once
// Full 8x8 ground-manifold Hamiltonian H = H_hf + H^Z + U: dressed energies
// with adiabatic labels, exact and perturbative differential shifts of the
// three field-insensitive coherences, and effective magnetic moments.
//
// Units: energies in Hz, B in G, intensity in W/cm^2.

#include <array>

#include "maglat/atomic_data.hpp"
#include "maglat/basis.hpp"
#include "maglat/stark.hpp"

namespace maglat {

// Zeeman operator (mu_B/h)*B*(g_J J_z + g_I I_z) in the coupled |F,m> basis,
// including the F=1<->F=2 elements within each m.
Matrix8 zeeman_hamiltonian(const SpeciesData& species, double B_G);

struct DressedLevels {
  // energies[i] belongs to the dressed state adiabatically connected to
  // kGroundBasis[i]; overlap_quality[i] = |<bare_i|dressed>|.
  std::array<double, kGroundDim> energies{};
  std::array<FM, kGroundDim> labels{};
  std::array<double, kGroundDim> overlap_quality{};
  bool degeneracy_flag = false;
};

// Caches the field-independent pieces (h_hf, Zeeman and Stark operators per
// unit B / unit intensity) for repeated evaluation over (B, intensity) grids.
class ManifoldEngine {
 public:
  ManifoldEngine(const SpeciesData& species, const LatticeConfig& lattice,
                 const StarkOptions& opts = {});

  const SpeciesData& species() const { return species_; }
  const LatticeConfig& lattice() const { return lattice_; }
  double intensity() const { return intensity_; }  // W/cm^2 at trap depth
  const Matrix8& zeeman_unit() const { return hz_unit_; }   // Hz per G
  const Matrix8& stark_unit() const { return u_unit_; }     // Hz per (W/cm^2)

  Matrix8 hamiltonian(double B_G, double intensity_W_cm2) const;
  DressedLevels dressed(double B_G, double intensity_W_cm2) const;

  // delta = E(2,m) - E(1,-m) - hyperfine splitting (Zeeman + Stark content).
  double diff_shift_exact(Coherence coh, double B_G,
                          double intensity_W_cm2) const;
  // Light-induced part: delta(intensity) - delta(0) at fixed B.
  double light_part(Coherence coh, double B_G, double intensity_W_cm2) const;

  // Second-order expression: first-order diagonal difference plus
  // (Zeeman + vector-Stark) cross couplings squared over the splitting;
  // tensor and rank-3 couplings excluded from the second-order term.
  double diff_shift_perturbative(Coherence coh, double B_G,
                                 double intensity_W_cm2,
                                 bool* smallness_warning = nullptr) const;
  // (|H^Z| + |U|)/splitting, spectral norms; perturbation parameter.
  double smallness(double B_G, double intensity_W_cm2) const;

  // mu' = d(delta_exact)/dB by Richardson-extrapolated central differences.
  double effective_moment(Coherence coh, double B_G, double intensity_W_cm2,
                          double* relative_error = nullptr,
                          double step_G = 0.02) const;

 private:
  SpeciesData species_;
  LatticeConfig lattice_;
  double intensity_;
  Matrix8 h_hf_;
  Matrix8 hz_unit_;
  Matrix8 u_unit_;
  double chi_unit_;  // rank-1 F-coupling coefficient of u_unit_
};

// Contract-level conveniences (each builds an engine; use ManifoldEngine
// directly for grid sweeps).
DressedLevels dressed_levels(const SpeciesData& species,
                             const LatticeConfig& lattice, double B_G);
double differential_shift_exact(const SpeciesData& species,
                                const LatticeConfig& lattice, double B_G,
                                Coherence coh);
double differential_shift_perturbative(const SpeciesData& species,
                                       const LatticeConfig& lattice,
                                       double B_G, Coherence coh);
double effective_moment(const SpeciesData& species,
                        const LatticeConfig& lattice, double B_G,
                        Coherence coh);

}  // namespace maglat
