#pragma once
// Magic bias fields: values of B at which the intensity-linear part of a
// coherence's differential shift vanishes. Numerical root finding on the
// exact engine, closed-form evaluation from a polarizability set, the
// ellipticity correction, and the vector/tensor field-ratio diagnostics.

#include <string>
#include <utility>

#include "maglat/manifold.hpp"
#include "maglat/polarizability.hpp"

namespace maglat {

struct MagicFieldResult {
  Coherence coherence = Coherence::clock;
  double b0 = 0.0;  // G
  std::string method;  // "numeric" or "closed_form"
  // d(light_part)/d(intensity) at b0, Hz per (W/cm^2); ~0 for method=numeric,
  // NaN for closed_form (not evaluated there).
  double slope_residual = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};  // G, searched (numeric only)
  int iterations = 0;
  double tolerance = 0.0;  // final bracket width, G
};

// Root of s(B) = d(light_part)/d(intensity) at intensity -> 0, evaluated by
// Richardson finite differences at small intensities. Bisection to
// |dB| < 1e-4 G plus a secant polish. Throws NoSignChange when the bracket
// does not straddle a root (e.g. A = 0: no vector coupling, no magic field).
MagicFieldResult magic_field_numeric(const SpeciesData& species,
                                     const LatticeConfig& lattice,
                                     Coherence coh,
                                     std::pair<double, double> bracket = {0.5,
                                                                          12.0});
MagicFieldResult magic_field_numeric(const ManifoldEngine& engine,
                                     Coherence coh,
                                     std::pair<double, double> bracket = {0.5,
                                                                          12.0});

// Closed-form field from the bracketed polarizability combinations, converted
// to Gauss with the internally derived Zeeman coupling
// mu = (g_J - g_I) * (mu_B/h) / 4.
MagicFieldResult magic_field_closed_form(const PolarizabilitySet& pset,
                                         const SpeciesData& species,
                                         Coherence coh);

// First-order vector-scaling model: the field measured at circularity A maps
// to b_ideal = A * b_measured in an ideally circular lattice.
double ellipticity_correct(double b_measured_G, double A);
double ellipticity_uncorrect(double b_ideal_G, double A);  // inverse

struct FieldRatioDiagnostics {
  double vector_ratio = 0.0;  // 2(b_minus - b_plus)/(b_minus + b_plus)
  double tensor_ratio = 0.0;  // [(3/8)(b_minus + b_plus) - b_clock]/b_clock
};
FieldRatioDiagnostics vector_tensor_diagnostics(double b0_plus_G,
                                                double b0_minus_G,
                                                double b0_clock_G);

}  // namespace maglat
