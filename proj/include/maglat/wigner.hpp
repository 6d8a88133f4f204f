#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

// Clebsch-Gordan coefficients and Wigner 3j symbols for half-integer angular
// momenta, via the Racah closed form.  Arguments are physical j/m values
// (doubles holding integers or half-integers).

namespace maglat::wigner {

namespace detail {

inline double factorial(int n) {
  // n stays below ~30 for the momenta used here; doubles are exact to 22!
  // and within 1 ulp beyond, which is far tighter than any test tolerance.
  static const auto table = [] {
    std::array<double, 64> t{};
    t[0] = 1.0;
    for (int i = 1; i < 64; ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  if (n < 0 || n >= 64) throw std::invalid_argument("factorial out of range");
  return table[static_cast<size_t>(n)];
}

// Twice-j as an exact integer; rejects arguments that are not half-integers.
inline int twice(double j) {
  const double t = 2.0 * j;
  const int ti = static_cast<int>(std::lround(t));
  if (std::abs(t - ti) > 1e-9)
    throw std::invalid_argument("angular momentum must be half-integer");
  return ti;
}

}  // namespace detail

// <j1 m1 j2 m2 | J M>, Condon-Shortley phases. Returns 0 outside the
// selection rules rather than throwing.
inline double clebsch_gordan(double j1, double m1, double j2, double m2,
                             double J, double M) {
  using detail::factorial;
  using detail::twice;
  const int tj1 = twice(j1), tm1 = twice(m1), tj2 = twice(j2), tm2 = twice(m2);
  const int tJ = twice(J), tM = twice(M);
  if (tm1 + tm2 != tM) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
  if (tJ > tj1 + tj2 || tJ < std::abs(tj1 - tj2)) return 0.0;
  if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tJ + tM) % 2 != 0)
    return 0.0;  // j and m must have the same parity
  if ((tj1 + tj2 + tJ) % 2 != 0) return 0.0;

  // All factorial arguments below are integers once the rules above pass.
  const int a1 = (tj1 + tj2 - tJ) / 2;
  const int a2 = (tj1 - tj2 + tJ) / 2;
  const int a3 = (-tj1 + tj2 + tJ) / 2;
  const int a4 = (tj1 + tj2 + tJ) / 2 + 1;
  const double delta =
      factorial(a1) * factorial(a2) * factorial(a3) / factorial(a4);

  const double pref = std::sqrt(
      (tJ + 1.0) * delta * factorial((tJ + tM) / 2) * factorial((tJ - tM) / 2) *
      factorial((tj1 - tm1) / 2) * factorial((tj1 + tm1) / 2) *
      factorial((tj2 - tm2) / 2) * factorial((tj2 + tm2) / 2));

  const int kmin = std::max(0, std::max((tj2 - tJ - tm1) / 2, (tj1 - tJ + tm2) / 2));
  const int kmax = std::min(a1, std::min((tj1 - tm1) / 2, (tj2 + tm2) / 2));
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double term =
        1.0 / (factorial(k) * factorial(a1 - k) * factorial((tj1 - tm1) / 2 - k) *
               factorial((tj2 + tm2) / 2 - k) * factorial((tJ - tj2 + tm1) / 2 + k) *
               factorial((tJ - tj1 - tm2) / 2 + k));
    sum += (k % 2 == 0) ? term : -term;
  }
  return pref * sum;
}

// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
inline double three_j(double j1, double j2, double j3, double m1, double m2,
                      double m3) {
  using detail::twice;
  const int phase_t = twice(j1) - twice(j2) - twice(m3);
  if (phase_t % 2 != 0) return 0.0;  // selection rules fail anyway
  const double sign = ((phase_t / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign * clebsch_gordan(j1, m1, j2, m2, j3, -m3) /
         std::sqrt(2.0 * j3 + 1.0);
}

}  // namespace maglat::wigner
