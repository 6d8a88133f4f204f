#include "maglat/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "maglat/errors.hpp"
#include "maglat/wigner.hpp"

namespace maglat {

namespace {

void check_hermitian_m_block(const Matrix8& H, const char* what) {
  const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < kGroundDim; ++i)
    for (int j = 0; j < kGroundDim; ++j) {
      if (std::abs(H(i, j) - H(j, i)) > 1e-12 * scale)
        throw InvariantError(std::string(what) + ": not Hermitian");
      if (kGroundBasis[i].m != kGroundBasis[j].m &&
          std::abs(H(i, j)) > 1e-12 * scale)
        throw InvariantError(std::string(what) + ": couples different m");
    }
}

double spectral_norm(const Matrix8& H) {
  Eigen::SelfAdjointEigenSolver<Matrix8> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Matrix8 zeeman_hamiltonian(const SpeciesData& species, double B_G) {
  if (std::abs(B_G) > 1e4)
    throw InvariantError("zeeman: |B| above 1e4 G sanity bound");
  // (g_J m_J + g_I m_I) is diagonal in the uncoupled |m_I, m_J> basis;
  // transform with Clebsch-Gordan coefficients <m_I, m_J|F, m>.
  const double i_n = species.nuclear_spin, j = 0.5;
  Matrix8 hz = Matrix8::Zero();
  for (int a = 0; a < kGroundDim; ++a)
    for (int b = a; b < kGroundDim; ++b) {
      const FM fa = kGroundBasis[a], fb = kGroundBasis[b];
      if (fa.m != fb.m) continue;
      double sum = 0.0;
      for (int tmj = -1; tmj <= 1; tmj += 2) {
        const double mj = 0.5 * tmj, mi = fa.m - mj;
        if (std::abs(mi) > i_n + 0.25) continue;
        sum += wigner::clebsch_gordan(i_n, mi, j, mj, fa.F, fa.m) *
               wigner::clebsch_gordan(i_n, mi, j, mj, fb.F, fb.m) *
               (species.g_J * mj + species.g_I * mi);
      }
      hz(a, b) = hz(b, a) = species.bohr_magneton_hz_per_G * B_G * sum;
    }
  return hz;
}

ManifoldEngine::ManifoldEngine(const SpeciesData& species,
                               const LatticeConfig& lattice,
                               const StarkOptions& opts)
    : species_(species), lattice_(lattice) {
  validate(species);
  validate(lattice);
  intensity_ = trap_depth_to_intensity(species, lattice);
  h_hf_ = Matrix8::Zero();
  for (int i = 0; i < kGroundDim; ++i)
    h_hf_(i, i) = species.hyperfine_splitting_hz *
                  (kGroundBasis[i].F == 2 ? 3.0 / 8.0 : -5.0 / 8.0);
  hz_unit_ = zeeman_hamiltonian(species, 1.0);
  u_unit_ = stark_operator_unit(species, lattice.wavelength_nm,
                                lattice.circ_degree_A,
                                lattice.include_counter_rotating, opts);
  check_hermitian_m_block(hz_unit_, "zeeman operator");
  check_hermitian_m_block(u_unit_, "stark operator");
  const double gp = u_unit_(basis_index(2, 1), basis_index(1, 1));
  const double gm = u_unit_(basis_index(2, -1), basis_index(1, -1));
  chi_unit_ = (gp + gm) / (2.0 * std::sqrt(3.0));
}

Matrix8 ManifoldEngine::hamiltonian(double B_G, double intensity_W_cm2) const {
  if (std::abs(B_G) > 1e4)
    throw InvariantError("zeeman: |B| above 1e4 G sanity bound");
  return h_hf_ + B_G * hz_unit_ + intensity_W_cm2 * u_unit_;
}

DressedLevels ManifoldEngine::dressed(double B_G,
                                      double intensity_W_cm2) const {
  Eigen::SelfAdjointEigenSolver<Matrix8> es(hamiltonian(B_G, intensity_W_cm2));
  DressedLevels out;
  std::array<bool, kGroundDim> claimed{};
  for (int k = 0; k < kGroundDim; ++k) {
    int best = 0;
    double best_ov = -1.0;
    for (int i = 0; i < kGroundDim; ++i) {
      const double ov = std::abs(es.eigenvectors()(i, k));
      if (ov > best_ov) {
        best_ov = ov;
        best = i;
      }
    }
    if (claimed[best] || best_ov < 0.7) out.degeneracy_flag = true;
    claimed[best] = true;
    out.energies[best] = es.eigenvalues()(k);
    out.labels[best] = kGroundBasis[best];
    out.overlap_quality[best] = best_ov;
  }
  return out;
}

double ManifoldEngine::diff_shift_exact(Coherence coh, double B_G,
                                        double intensity_W_cm2) const {
  const DressedLevels d = dressed(B_G, intensity_W_cm2);
  if (d.degeneracy_flag)
    throw DegeneracyError("dressed levels: ambiguous adiabatic labels");
  const FM up = coherence_upper(coh), lo = coherence_lower(coh);
  return d.energies[basis_index(up.F, up.m)] -
         d.energies[basis_index(lo.F, lo.m)] - species_.hyperfine_splitting_hz;
}

double ManifoldEngine::light_part(Coherence coh, double B_G,
                                  double intensity_W_cm2) const {
  return diff_shift_exact(coh, B_G, intensity_W_cm2) -
         diff_shift_exact(coh, B_G, 0.0);
}

double ManifoldEngine::smallness(double B_G, double intensity_W_cm2) const {
  return (spectral_norm(B_G * hz_unit_) +
          spectral_norm(intensity_W_cm2 * u_unit_)) /
         species_.hyperfine_splitting_hz;
}

double ManifoldEngine::diff_shift_perturbative(Coherence coh, double B_G,
                                               double intensity_W_cm2,
                                               bool* smallness_warning) const {
  if (smallness_warning)
    *smallness_warning = smallness(B_G, intensity_W_cm2) > 0.05;
  const int m = coherence_m(coh);
  auto diag = [&](int F, int mm) {
    const int i = basis_index(F, mm);
    return B_G * hz_unit_(i, i) + intensity_W_cm2 * u_unit_(i, i);
  };
  auto cross = [&](int mm) {
    const int i2 = basis_index(2, mm), i1 = basis_index(1, mm);
    return B_G * hz_unit_(i2, i1) +
           intensity_W_cm2 * chi_unit_ * std::sqrt(4.0 - mm * mm);
  };
  const double first = diag(2, m) - diag(1, -m);
  const double vm = cross(m), vn = cross(-m);
  return first + (vm * vm + vn * vn) / species_.hyperfine_splitting_hz;
}

double ManifoldEngine::effective_moment(Coherence coh, double B_G,
                                        double intensity_W_cm2,
                                        double* relative_error,
                                        double step_G) const {
  auto slope = [&](double h) {
    return (diff_shift_exact(coh, B_G + h, intensity_W_cm2) -
            diff_shift_exact(coh, B_G - h, intensity_W_cm2)) /
           (2.0 * h);
  };
  const double d1 = slope(step_G), d2 = slope(0.5 * step_G);
  const double rich = (4.0 * d2 - d1) / 3.0;
  const double err = std::abs(rich - d2) / std::max(std::abs(rich), 1e-3);
  if (relative_error) *relative_error = err;
  if (err > 0.05)
    throw NonConvergence("effective moment: step extrapolation not converging");
  return rich;
}

DressedLevels dressed_levels(const SpeciesData& species,
                             const LatticeConfig& lattice, double B_G) {
  ManifoldEngine eng(species, lattice);
  return eng.dressed(B_G, eng.intensity());
}

double differential_shift_exact(const SpeciesData& species,
                                const LatticeConfig& lattice, double B_G,
                                Coherence coh) {
  ManifoldEngine eng(species, lattice);
  return eng.diff_shift_exact(coh, B_G, eng.intensity());
}

double differential_shift_perturbative(const SpeciesData& species,
                                       const LatticeConfig& lattice,
                                       double B_G, Coherence coh) {
  ManifoldEngine eng(species, lattice);
  return eng.diff_shift_perturbative(coh, B_G, eng.intensity());
}

double effective_moment(const SpeciesData& species,
                        const LatticeConfig& lattice, double B_G,
                        Coherence coh) {
  ManifoldEngine eng(species, lattice);
  return eng.effective_moment(coh, B_G, eng.intensity());
}

}  // namespace maglat
