#include "maglat/polarizability.hpp"

#include <cmath>

#include "maglat/basis.hpp"
#include "maglat/errors.hpp"

namespace maglat {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt5 = std::sqrt(5.0);
const double kSqrt7 = std::sqrt(7.0);
const double kOffdiagScale = 4.0 * std::sqrt(5.0 / 3.0);

void check_structure(const Matrix8& U) {
  const double scale = U.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(scale, 1e-300);
  for (int i = 0; i < kGroundDim; ++i)
    for (int j = 0; j < kGroundDim; ++j) {
      if (std::abs(U(i, j) - U(j, i)) > tol)
        throw InvariantError("stark operator: not Hermitian");
      if (kGroundBasis[i].m != kGroundBasis[j].m && std::abs(U(i, j)) > tol)
        throw InvariantError("stark operator: couples different m");
    }
}

}  // namespace

PolarizabilitySet decompose_stark(const Matrix8& U, double intensity_W_cm2,
                                  double wavelength_nm) {
  if (intensity_W_cm2 <= 0.0)
    throw InvariantError("intensity: must be > 0 to divide out");
  check_structure(U);
  const Matrix8 u = U / intensity_W_cm2;

  PolarizabilitySet p;
  p.wavelength_nm = wavelength_nm;

  // Per-F diagonals: exact projection onto {1, m, 3m^2 - F(F+1)}, which are
  // mutually orthogonal over each symmetric m range.
  for (int F : {1, 2}) {
    double s0 = 0, s1 = 0, s2 = 0, n1 = 0, n2 = 0;
    for (int m = -F; m <= F; ++m) {
      const double d = u(basis_index(F, m), basis_index(F, m));
      const double p2 = 3.0 * m * m - F * (F + 1);
      s0 += d;
      s1 += m * d;
      s2 += p2 * d;
      n1 += m * m;
      n2 += p2 * p2;
    }
    const double s = s0 / (2 * F + 1), v = s1 / n1, t = s2 / n2;
    // Five diagonal entries vs three fitted components for F=2: the excess
    // would be rank-3/4 content, which this operator cannot have (each
    // second-order path contributes an exactly quadratic-in-m diagonal).
    for (int m = -F; m <= F; ++m) {
      const double fit = s + v * m + t * (3.0 * m * m - F * (F + 1));
      if (std::abs(fit - u(basis_index(F, m), basis_index(F, m))) >
          1e-10 * u.cwiseAbs().maxCoeff())
        throw InvariantError("stark operator: diagonal not rank<=2");
    }
    p.alpha0[F] = s;
    p.alpha1[F] = (F == 1) ? (2.0 / kSqrt3) * v : 2.0 * v;
    p.alpha2[F] = (F == 1) ? 2.0 * kSqrt5 * t : 6.0 * kSqrt7 * t;
  }

  // F-coupling elements g(m) = <2m|u|1m> = [chi + xi m + rho(m^2-1)] sqrt(4-m^2):
  // solved exactly from the three m points (rho only enters g(0)).
  const double gm = u(basis_index(2, -1), basis_index(1, -1));
  const double g0 = u(basis_index(2, 0), basis_index(1, 0));
  const double gp = u(basis_index(2, 1), basis_index(1, 1));
  const double chi = (gp + gm) / (2.0 * kSqrt3);
  const double xi = (gp - gm) / (2.0 * kSqrt3);
  const double rho = chi - g0 / 2.0;
  p.alpha12_vector = kOffdiagScale * chi;
  p.alpha12_tensor = kOffdiagScale * xi;
  p.alpha12_rank3 = kOffdiagScale * rho;

  // Round-trip guard: reassembly must reproduce the input.
  const Matrix8 back = assemble_stark(p, intensity_W_cm2);
  const double err = (back - U).cwiseAbs().maxCoeff();
  if (err > 1e-10 * std::max(U.cwiseAbs().maxCoeff(), 1e-300))
    throw InvariantError("stark operator: decomposition residual above 1e-10");
  return p;
}

Matrix8 assemble_stark(const PolarizabilitySet& pset, double intensity_W_cm2,
                       double A_scale, int helicity_sign) {
  const double odd = A_scale * helicity_sign;
  Matrix8 U = Matrix8::Zero();
  for (int F : {1, 2}) {
    const double s = pset.alpha0.count(F) ? pset.alpha0.at(F) : 0.0;
    const double a1 = pset.alpha1.count(F) ? pset.alpha1.at(F) : 0.0;
    const double a2 = pset.alpha2.count(F) ? pset.alpha2.at(F) : 0.0;
    const double v = (F == 1) ? (kSqrt3 / 2.0) * a1 : a1 / 2.0;
    const double t = (F == 1) ? a2 / (2.0 * kSqrt5) : a2 / (6.0 * kSqrt7);
    for (int m = -F; m <= F; ++m)
      U(basis_index(F, m), basis_index(F, m)) =
          s + odd * v * m + t * (3.0 * m * m - F * (F + 1));
  }
  const double chi = pset.alpha12_vector / kOffdiagScale;
  const double xi = pset.alpha12_tensor / kOffdiagScale;
  const double rho = pset.alpha12_rank3 / kOffdiagScale;
  for (int m = -1; m <= 1; ++m) {
    const double g = (odd * (chi + rho * (m * m - 1.0)) + xi * m) *
                     std::sqrt(4.0 - m * m);
    U(basis_index(2, m), basis_index(1, m)) = g;
    U(basis_index(1, m), basis_index(2, m)) = g;
  }
  return U * intensity_W_cm2;
}

}  // namespace maglat
