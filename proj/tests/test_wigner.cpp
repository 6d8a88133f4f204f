#include <doctest.h>

#include <cmath>

#include "maglat/wigner.hpp"
#include "oracle_utils.hpp"

using maglat::wigner::clebsch_gordan;
using maglat::wigner::three_j;

TEST_CASE("clebsch-gordan: frozen table values and Condon-Shortley signs") {
  const double r2 = std::sqrt(0.5), r3 = std::sqrt(1.0 / 3.0);
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0) == doctest::Approx(r2).epsilon(1e-14));
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == doctest::Approx(r2).epsilon(1e-14));
  CHECK(clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0) == doctest::Approx(-r2).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(r3).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 0, 1, 0, 0, 0) == doctest::Approx(-r3).epsilon(1e-14));
  CHECK(clebsch_gordan(1, 1, 0.5, -0.5, 0.5, 0.5) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  // stretched states couple with coefficient exactly 1
  CHECK(clebsch_gordan(1.5, 1.5, 0.5, 0.5, 2, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("clebsch-gordan: selection rules return zero") {
  CHECK(clebsch_gordan(1, 1, 1, 1, 1, 0) == 0.0);   // m1 + m2 != M
  CHECK(clebsch_gordan(1, 0, 0.5, 0.5, 2.5, 0.5) == 0.0);  // triangle violated
  CHECK(clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1) != 0.0);
}

TEST_CASE("clebsch-gordan squares match the diagonalization oracle") {
  const double moms[] = {0.5, 1.0, 1.5, 2.0, 3.0};
  for (double j1 : moms)
    for (double j2 : {0.5, 1.0, 1.5}) {
      for (double J = std::abs(j1 - j2); J <= j1 + j2 + 0.1; J += 1.0)
        for (double m1 = -j1; m1 <= j1 + 0.1; m1 += 1.0)
          for (double m2 = -j2; m2 <= j2 + 0.1; m2 += 1.0) {
            const double M = m1 + m2;
            if (std::abs(M) > J + 1e-9) continue;
            const double c = clebsch_gordan(j1, m1, j2, m2, J, M);
            CHECK(c * c == doctest::Approx(oracle::cg_squared(j1, m1, j2, m2, J, M))
                               .epsilon(1e-10));
          }
    }
}

TEST_CASE("clebsch-gordan completeness per (m1, m2)") {
  const double j1 = 1.5, j2 = 1.0;
  for (double m1 = -j1; m1 <= j1 + 0.1; m1 += 1.0)
    for (double m2 = -j2; m2 <= j2 + 0.1; m2 += 1.0) {
      double sum = 0.0;
      for (double J = std::abs(j1 - j2); J <= j1 + j2 + 0.1; J += 1.0) {
        const double c = clebsch_gordan(j1, m1, j2, m2, J, m1 + m2);
        sum += c * c;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("three-j: frozen values and CG relation") {
  // (j j 0; m -m 0) = (-1)^(j-m)/sqrt(2j+1)
  for (int m = -2; m <= 2; ++m)
    CHECK(three_j(2, 2, 0, m, -m, 0) ==
          doctest::Approx(((2 - m) % 2 == 0 ? 1.0 : -1.0) / std::sqrt(5.0))
              .epsilon(1e-14));
  CHECK(three_j(1, 1, 1, 0, 0, 0) == doctest::Approx(0.0).epsilon(1e-14));
  // cross-check against CG for a generic entry
  const double tj = three_j(1.5, 1.0, 0.5, 0.5, 0.0, -0.5);
  const double cg = clebsch_gordan(1.5, 0.5, 1.0, 0.0, 0.5, 0.5);
  CHECK(tj == doctest::Approx(-cg / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("racah 6j reproduces the published D-line strength fractions") {
  const double In = 1.5, J = 0.5;
  for (int F : {1, 2}) {
    // D1: J' = 1/2, F' in {1, 2}
    double sum = 0.0;
    for (double Fp : {1.0, 2.0}) {
      const double s6 = oracle::strength_fraction_6j(J, 0.5, In, F, Fp);
      CHECK(s6 == doctest::Approx(oracle::strength_fraction("D1", F, Fp))
                      .epsilon(1e-12));
      sum += s6;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // D2: J' = 3/2, F' in {0..3}
    sum = 0.0;
    for (double Fp : {0.0, 1.0, 2.0, 3.0}) {
      if (std::abs(Fp - F) > 1.1) continue;
      const double s6 = oracle::strength_fraction_6j(J, 1.5, In, F, Fp);
      CHECK(s6 == doctest::Approx(oracle::strength_fraction("D2", F, Fp))
                      .epsilon(1e-12));
      sum += s6;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("racah 6j vanishes outside the triangle rules") {
  CHECK(oracle::six_j(0.5, 0.5, 3, 0.5, 0.5, 1) == 0.0);
  CHECK(oracle::six_j(1, 1, 1, 1, 1, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}
