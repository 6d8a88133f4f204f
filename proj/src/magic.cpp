#include "maglat/magic.hpp"

#include <cmath>
#include <limits>

#include "maglat/constants.hpp"
#include "maglat/errors.hpp"

namespace maglat {

namespace {

// Probe intensity for the I -> 0 slope: what an 8 uK-deep lattice would use.
// Richardson over (I1, 2*I1) then removes the quadratic term from the slope.
double probe_intensity(const ManifoldEngine& eng) {
  const Matrix8& u = eng.stark_unit();
  const double scalar_f1 = (u(basis_index(1, -1), basis_index(1, -1)) +
                            u(basis_index(1, 0), basis_index(1, 0)) +
                            u(basis_index(1, 1), basis_index(1, 1))) /
                           3.0;
  return constants::uK_to_Hz * 8.0 / -scalar_f1;
}

}  // namespace

MagicFieldResult magic_field_numeric(const SpeciesData& species,
                                     const LatticeConfig& lattice,
                                     Coherence coh,
                                     std::pair<double, double> bracket) {
  ManifoldEngine eng(species, lattice);
  return magic_field_numeric(eng, coh, bracket);
}

MagicFieldResult magic_field_numeric(const ManifoldEngine& engine,
                                     Coherence coh,
                                     std::pair<double, double> bracket) {
  const double i1 = probe_intensity(engine);
  auto slope = [&](double B) {
    return (4.0 * engine.light_part(coh, B, i1) -
            engine.light_part(coh, B, 2.0 * i1)) /
           (2.0 * i1);
  };

  double lo = bracket.first, hi = bracket.second;
  if (!(lo < hi)) throw InvariantError("magic field: empty bracket");
  double slo = slope(lo), shi = slope(hi);
  if (slo == 0.0 || shi == 0.0 || (slo < 0) == (shi < 0))
    throw NoSignChange(
        "magic field: intensity slope has no sign change over bracket "
        "(vector coupling absent or bracket misses the root)");

  MagicFieldResult res;
  res.coherence = coh;
  res.method = "numeric";
  res.bracket = bracket;
  int iters = 0;
  while (hi - lo > 1e-5 && iters < 200) {
    const double mid = 0.5 * (lo + hi), smid = slope(mid);
    ++iters;
    if (smid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((smid < 0) == (slo < 0)) {
      lo = mid;
      slo = smid;
    } else {
      hi = mid;
      shi = smid;
    }
  }
  if (hi - lo > 1e-4) throw NonConvergence("magic field: bisection stalled");
  // Secant polish on the final bracket.
  double b0 = 0.5 * (lo + hi);
  if (shi != slo) {
    const double sec = lo - slo * (hi - lo) / (shi - slo);
    if (sec > lo && sec < hi) b0 = sec;
  }
  res.b0 = b0;
  res.slope_residual = slope(b0);
  res.iterations = iters;
  res.tolerance = hi - lo;
  return res;
}

MagicFieldResult magic_field_closed_form(const PolarizabilitySet& pset,
                                         const SpeciesData& species,
                                         Coherence coh) {
  const double a12 = pset.alpha12_vector;
  if (a12 == 0.0)
    throw InvariantError("closed form: vector F-coupling alpha12 is zero");
  const double s1 = pset.alpha0.at(1), s2 = pset.alpha0.at(2);
  const double v1 = pset.alpha1.at(1), v2 = pset.alpha1.at(2);
  const double t1 = pset.alpha2.at(1), t2 = pset.alpha2.at(2);
  const double delta = species.hyperfine_splitting_hz;
  const double mu =
      (species.g_J - species.g_I) * species.bohr_magneton_hz_per_G / 4.0;

  const double scalar = std::sqrt(5.0 / 3.0) * (s2 - s1);
  const double vector = (std::sqrt(5.0) / 2.0) * (v1 + v2 / std::sqrt(3.0));
  double bracket_val = 0.0, prefactor = 1.0;
  switch (coh) {
    case Coherence::clock:
      bracket_val = scalar - std::sqrt(5.0 / 21.0) * (t2 - std::sqrt(7.0 / 5.0) * t1);
      break;
    case Coherence::plus:
      prefactor = 4.0 / 3.0;
      bracket_val = scalar + vector -
                    0.5 * std::sqrt(5.0 / 21.0) * (t2 + std::sqrt(7.0 / 5.0) * t1);
      break;
    case Coherence::minus:
      prefactor = 4.0 / 3.0;
      bracket_val = scalar - vector -
                    0.5 * std::sqrt(5.0 / 21.0) * (t2 + std::sqrt(7.0 / 5.0) * t1);
      break;
  }
  MagicFieldResult res;
  res.coherence = coh;
  res.method = "closed_form";
  res.b0 = prefactor * (delta / (4.0 * a12)) * bracket_val / mu;
  res.slope_residual = std::numeric_limits<double>::quiet_NaN();
  return res;
}

double ellipticity_correct(double b_measured_G, double A) {
  if (!(A > 0.0 && A <= 1.0))
    throw InvariantError("ellipticity correction: A must be in (0, 1]");
  return A * b_measured_G;
}

double ellipticity_uncorrect(double b_ideal_G, double A) {
  if (!(A > 0.0 && A <= 1.0))
    throw InvariantError("ellipticity correction: A must be in (0, 1]");
  return b_ideal_G / A;
}

FieldRatioDiagnostics vector_tensor_diagnostics(double b0_plus_G,
                                                double b0_minus_G,
                                                double b0_clock_G) {
  if (!(b0_plus_G > 0.0 && b0_minus_G > 0.0 && b0_clock_G > 0.0))
    throw InvariantError("diagnostics: fields must be positive");
  FieldRatioDiagnostics d;
  d.vector_ratio = 2.0 * (b0_minus_G - b0_plus_G) / (b0_minus_G + b0_plus_G);
  d.tensor_ratio =
      ((3.0 / 8.0) * (b0_minus_G + b0_plus_G) - b0_clock_G) / b0_clock_G;
  return d;
}

}  // namespace maglat
