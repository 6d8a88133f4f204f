#include <doctest.h>

#include <cmath>

#include "maglat/basis.hpp"
#include "maglat/errors.hpp"
#include "maglat/manifold.hpp"
#include "oracle_utils.hpp"

using namespace maglat;

namespace {
SpeciesData species() {
  return load_species(oracle::data_path("species_rb87.cfg"));
}
LatticeConfig lattice() {
  return load_lattice(oracle::data_path("lattice_1064.cfg"));
}
}  // namespace

TEST_CASE("bare manifold reproduces the closed-form hyperfine-Zeeman energies") {
  const SpeciesData sp = species();
  const ManifoldEngine engine(sp, lattice());
  const double split = sp.hyperfine_splitting_hz;
  double worst = 0.0;
  for (double B : oracle::linspace(0.0, 10.0, 50)) {
    const DressedLevels lv = engine.dressed(B, 0.0);
    for (int i = 0; i < kGroundDim; ++i) {
      const double ref = oracle::breit_rabi(sp, lv.labels[i].F, lv.labels[i].m, B);
      worst = std::max(worst, std::abs(lv.energies[i] - ref) / split);
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("stretched states shift exactly linearly plus their diagonal light shift") {
  const SpeciesData sp = species();
  const ManifoldEngine engine(sp, lattice());
  const double muB = sp.bohr_magneton_hz_per_G;
  const double e22 = engine.stark_unit()(basis_index(2, 2), basis_index(2, 2));
  const double e2m2 = engine.stark_unit()(basis_index(2, -2), basis_index(2, -2));
  for (double B : {0.5, 3.0, 9.0})
    for (double I : {0.0, 2.0e4, 4.2e4}) {
      const DressedLevels lv = engine.dressed(B, I);
      for (int i = 0; i < kGroundDim; ++i) {
        if (lv.labels[i].F != 2 || std::abs(lv.labels[i].m) != 2) continue;
        const int sgn = lv.labels[i].m / 2;
        const double expect = 3.0 * sp.hyperfine_splitting_hz / 8.0 +
                              sgn * muB * B * (sp.g_J + 3.0 * sp.g_I) / 2.0 +
                              I * (sgn > 0 ? e22 : e2m2);
        CHECK(std::abs(lv.energies[i] - expect) <
              1e-12 * sp.hyperfine_splitting_hz);
      }
    }
}

TEST_CASE("dressed energies match the per-m 2x2 closed form") {
  const SpeciesData sp = species();
  const ManifoldEngine engine(sp, lattice());
  for (double B : {0.7, 4.2, 8.0})
    for (double I : {0.0, 4.2e4}) {
      const Matrix8 H = engine.hamiltonian(B, I);
      const DressedLevels lv = engine.dressed(B, I);
      auto energy_of = [&](int F, int m) {
        for (int i = 0; i < kGroundDim; ++i)
          if (lv.labels[i] == FM{F, m}) return lv.energies[i];
        FAIL("label missing");
        return 0.0;
      };
      for (int m = -1; m <= 1; ++m) {
        const int i1 = basis_index(1, m), i2 = basis_index(2, m);
        const double a = H(i1, i1), b = H(i2, i2), c = H(i1, i2);
        const double mid = 0.5 * (a + b);
        const double rad = std::sqrt(0.25 * (b - a) * (b - a) + c * c);
        CHECK(std::abs(energy_of(1, m) - (mid - rad)) <
              1e-12 * sp.hyperfine_splitting_hz);
        CHECK(std::abs(energy_of(2, m) - (mid + rad)) <
              1e-12 * sp.hyperfine_splitting_hz);
      }
    }
}

TEST_CASE("coherence shift definition and light part") {
  const ManifoldEngine engine(species(), lattice());
  const double split = engine.species().hyperfine_splitting_hz;
  const double B = 4.2, I = engine.intensity();
  const DressedLevels lv = engine.dressed(B, I);
  auto energy_of = [&](int F, int m) {
    for (int i = 0; i < kGroundDim; ++i)
      if (lv.labels[i] == FM{F, m}) return lv.energies[i];
    return 0.0;
  };
  for (Coherence c : {Coherence::clock, Coherence::plus, Coherence::minus}) {
    const int m = coherence_m(c);
    CHECK(engine.diff_shift_exact(c, B, I) ==
          doctest::Approx(energy_of(2, m) - energy_of(1, -m) - split)
              .epsilon(1e-12));
    CHECK(engine.light_part(c, B, I) ==
          doctest::Approx(engine.diff_shift_exact(c, B, I) -
                          engine.diff_shift_exact(c, B, 0.0))
              .epsilon(1e-10));
  }
}

TEST_CASE("perturbative shift stays within the cube-of-smallness bound") {
  const SpeciesData sp = species();
  const double split = sp.hyperfine_splitting_hz;
  for (double depth : {16.0, 48.0, 64.0}) {
    LatticeConfig lat = lattice();
    lat.trap_depth_uK = depth;
    const ManifoldEngine engine(sp, lat);
    const double I = engine.intensity();
    for (double B : {1.0, 2.0, 4.0, 8.0}) {
      const double bound = 10.0 * std::pow(engine.smallness(B, I), 3) * split;
      for (Coherence c : {Coherence::clock, Coherence::plus, Coherence::minus}) {
        const double diff = std::abs(engine.diff_shift_exact(c, B, I) -
                                     engine.diff_shift_perturbative(c, B, I));
        CHECK(diff <= bound);
      }
    }
  }
}

TEST_CASE("joint sign flip of field and helicity mirrors the manifold") {
  const SpeciesData sp = species();
  const LatticeConfig lat = lattice();
  LatticeConfig mir = lat;
  mir.circ_degree_A = -lat.circ_degree_A;
  const ManifoldEngine engine(sp, lat), mirror(sp, mir);
  const double split = sp.hyperfine_splitting_hz;
  for (double B : {0.3, 2.0, 5.4})
    for (double I : {0.0, 4.2e4}) {
      const DressedLevels a = engine.dressed(B, I);
      const DressedLevels b = mirror.dressed(-B, I);
      auto energy_of = [&](const DressedLevels& lv, int F, int m) {
        for (int i = 0; i < kGroundDim; ++i)
          if (lv.labels[i] == FM{F, m}) return lv.energies[i];
        return 0.0;
      };
      for (const FM& st : kGroundBasis)
        CHECK(std::abs(energy_of(a, st.F, st.m) - energy_of(b, st.F, -st.m)) <
              1e-12 * split);
      // coherence shifts swap plus <-> minus; the bound is absolute at the
      // hyperfine scale, since shifts are eigenvalue differences whose
      // resolution is one ulp of the splitting (~1e-6 Hz)
      CHECK(std::abs(engine.diff_shift_exact(Coherence::plus, B, I) -
                     mirror.diff_shift_exact(Coherence::minus, -B, I)) <
            1e-12 * split);
      CHECK(std::abs(engine.diff_shift_exact(Coherence::clock, B, I) -
                     mirror.diff_shift_exact(Coherence::clock, -B, I)) <
            1e-12 * split);
    }
}

TEST_CASE("effective moment agrees with a direct finite-difference slope") {
  const ManifoldEngine engine(species(), lattice());
  const double I = engine.intensity();
  for (Coherence c : {Coherence::clock, Coherence::plus, Coherence::minus})
    for (double B : {2.0, 4.3}) {
      const double mu = engine.effective_moment(c, B, I);
      // reference step large enough that the eigenvalue-difference
      // resolution (~1e-6 Hz) stays far below the h=1e-2 G denominator
      const double h = 1e-2;
      const double fd = (engine.diff_shift_exact(c, B + h, I) -
                         engine.diff_shift_exact(c, B - h, I)) /
                        (2.0 * h);
      CHECK(mu == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("adiabatic labels are faithful at operating conditions") {
  const ManifoldEngine engine(species(), lattice());
  const DressedLevels lv = engine.dressed(4.2, engine.intensity());
  CHECK_FALSE(lv.degeneracy_flag);
  for (int i = 0; i < kGroundDim; ++i) {
    CHECK(lv.labels[i] == kGroundBasis[i]);
    CHECK(lv.overlap_quality[i] > 0.99);
  }
}

TEST_CASE("smallness grows with field and intensity") {
  const ManifoldEngine engine(species(), lattice());
  const double I = engine.intensity();
  CHECK(engine.smallness(1.0, I) < engine.smallness(8.0, I));
  CHECK(engine.smallness(4.0, 0.0) < engine.smallness(4.0, I));
  CHECK(engine.smallness(4.0, I) < 0.01);  // deep perturbative regime
}
