#include "maglat/stark.hpp"

#include <cmath>
#include <vector>

#include "maglat/basis.hpp"
#include "maglat/constants.hpp"
#include "maglat/errors.hpp"
#include "maglat/wigner.hpp"

namespace maglat {

namespace {

constexpr double kGroundJ = 0.5;

// Excited hyperfine levels of one line as (F', centroid offset in Hz).
std::vector<std::pair<double, double>> excited_levels(const SpeciesData& species,
                                                      const TransitionLine& line,
                                                      bool resolve_hf) {
  const double In = species.nuclear_spin;
  std::vector<double> expected;
  for (double Fp = std::abs(In - line.excited_J); Fp <= In + line.excited_J + 0.1;
       Fp += 1.0)
    expected.push_back(Fp);

  if (resolve_hf && !line.excited_hyperfine.empty()) {
    if (line.excited_hyperfine.size() != expected.size())
      throw InvariantError("line." + line.label + ".hyperfine: expected " +
                           std::to_string(expected.size()) + " F' levels");
    for (const auto& [Fp, _] : line.excited_hyperfine) {
      bool known = false;
      for (double e : expected) known |= std::abs(e - Fp) < 1e-9;
      if (!known)
        throw InvariantError("line." + line.label + ".hyperfine: invalid F'");
    }
    return line.excited_hyperfine;
  }
  std::vector<std::pair<double, double>> out;
  for (double Fp : expected) out.emplace_back(Fp, 0.0);
  return out;
}

}  // namespace

Matrix8 stark_operator_unit(const SpeciesData& species, double wavelength_nm,
                            double circ_degree_A, bool include_counter_rotating,
                            const StarkOptions& opts) {
  if (std::abs(2 * species.nuclear_spin - 3.0) > 1e-9)
    throw InvariantError("nuclear_spin: engine supports the 8-state I=3/2 manifold");
  if (std::abs(circ_degree_A) > 1.0)
    throw InvariantError("circ_degree_A: must lie in [-1, 1]");

  const double In = species.nuclear_spin;
  const double nuL = constants::nm_to_Hz(wavelength_nm);
  const double split = species.hyperfine_splitting_hz;
  const double A = circ_degree_A;

  // Ground level energies relative to the zero-field hyperfine centroid.
  auto nu_ground = [&](int F) {
    return F == 2 ? 3.0 * split / 8.0 : -5.0 * split / 8.0;
  };
  // Energies used inside detuning denominators (test toggle may zero them).
  auto nu_det = [&](int F) {
    return opts.zero_ground_hf_offset_in_detunings ? 0.0 : nu_ground(F);
  };

  Matrix8 U = Matrix8::Zero();

  for (const TransitionLine& line : species.lines) {
    const double Jp = line.excited_J;
    // Tabulated |<J||er||J'>|^2 follows the Clebsch-Gordan reduced-element
    // convention; the 3j-symmetric reduced element squared is (2J+1) larger.
    const double r3j = std::sqrt((2.0 * kGroundJ + 1.0) * line.reduced_dipole_sq);
    const auto levels =
        excited_levels(species, line, opts.include_excited_hyperfine);

    for (const auto& [Fp, off] : levels) {
      for (int F : {1, 2})
        if (std::abs(nuL - (line.frequency_hz + off - nu_ground(F))) <
            opts.resonance_guard_hz)
          throw ResonanceError("lattice within resonance guard of line " +
                               line.label);
    }

    for (const auto& [Fp, off] : levels) {
      const double nu_e = line.frequency_hz + off;
      for (int q : {-1, 1}) {
        // sigma_q weight of the elliptical field; its counter-rotating
        // component couples through d_{-q}, so the d_q operator carries the
        // mirrored weight in the anti-resonant term.
        const double w_co = 0.5 * (1.0 + q * A);
        const double w_ct = 0.5 * (1.0 - q * A);
        for (double mp = -Fp; mp <= Fp + 0.1; mp += 1.0) {
          const int m = static_cast<int>(std::lround(mp)) - q;
          if (std::abs(m) > 2) continue;

          // <F',m'| d_q |F,m> for both ground F, via the uncoupled basis.
          double me[3] = {0.0, 0.0, 0.0};
          for (int F : {1, 2}) {
            if (std::abs(m) > F) continue;
            double acc = 0.0;
            for (double mI = -In; mI <= In + 0.1; mI += 1.0) {
              const double mJ = m - mI, mJp = mp - mI;
              if (std::abs(mJ) > kGroundJ + 0.1 || std::abs(mJp) > Jp + 0.1)
                continue;
              const double cg = wigner::clebsch_gordan(In, mI, kGroundJ, mJ, F, m);
              if (cg == 0.0) continue;
              const double ce = wigner::clebsch_gordan(In, mI, Jp, mJp, Fp, mp);
              if (ce == 0.0) continue;
              const double sign =
                  std::lround(Jp - mJp) % 2 == 0 ? 1.0 : -1.0;
              acc += cg * ce * sign *
                     wigner::three_j(Jp, 1.0, kGroundJ, -mJp, q, mJ);
            }
            me[F] = r3j * acc;
          }

          for (int Fa : {1, 2}) {
            if (std::abs(m) > Fa) continue;
            for (int Fb : {1, 2}) {
              if (std::abs(m) > Fb) continue;
              const double d_co =
                  0.5 * (1.0 / (nu_det(Fa) - nu_e + nuL) +
                         1.0 / (nu_det(Fb) - nu_e + nuL));
              double denom = w_co * d_co;
              if (include_counter_rotating) {
                const double d_ct =
                    0.5 * (1.0 / (nu_det(Fa) - nu_e - nuL) +
                           1.0 / (nu_det(Fb) - nu_e - nuL));
                denom += w_ct * d_ct;
              }
              U(basis_index(Fa, m), basis_index(Fb, m)) +=
                  constants::stark_Hz_per_Wcm2 * me[Fa] * me[Fb] * denom;
            }
          }
        }
      }
    }
  }
  return U;
}

Matrix8 stark_operator_direct(const SpeciesData& species,
                              const LatticeConfig& lattice,
                              const StarkOptions& opts) {
  validate(lattice);
  const Matrix8 unit =
      stark_operator_unit(species, lattice.wavelength_nm, lattice.circ_degree_A,
                          lattice.include_counter_rotating, opts);
  return trap_depth_to_intensity(species, lattice) * unit;
}

double scalar_shift_lower_level(const SpeciesData& species,
                                const LatticeConfig& lattice,
                                const StarkOptions& opts) {
  const Matrix8 unit =
      stark_operator_unit(species, lattice.wavelength_nm, lattice.circ_degree_A,
                          lattice.include_counter_rotating, opts);
  double s = 0.0;
  for (int m = -1; m <= 1; ++m) s += unit(basis_index(1, m), basis_index(1, m));
  return s / 3.0;
}

}  // namespace maglat
