#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace maglat {

// Fixed 8-state ground manifold of a J=1/2, I=3/2 atom, ordered
// F=1: m=-1,0,+1 then F=2: m=-2..+2.
inline constexpr int kGroundDim = 8;

struct FM {
  int F;
  int m;
  bool operator==(const FM&) const = default;
};

inline constexpr std::array<FM, kGroundDim> kGroundBasis = {
    FM{1, -1}, FM{1, 0}, FM{1, 1},
    FM{2, -2}, FM{2, -1}, FM{2, 0}, FM{2, 1}, FM{2, 2}};

inline int basis_index(int F, int m) {
  if (F == 1 && m >= -1 && m <= 1) return 1 + m;
  if (F == 2 && m >= -2 && m <= 2) return 5 + m;
  throw std::out_of_range("no ground state F=" + std::to_string(F) +
                          " m=" + std::to_string(m));
}

// The three long-lived coherences: upper |2, m>, lower |1, -m>.
enum class Coherence { clock, plus, minus };

inline int coherence_m(Coherence c) {
  switch (c) {
    case Coherence::clock: return 0;
    case Coherence::plus: return 1;
    case Coherence::minus: return -1;
  }
  throw std::logic_error("bad coherence");
}

inline FM coherence_upper(Coherence c) { return {2, coherence_m(c)}; }
inline FM coherence_lower(Coherence c) { return {1, -coherence_m(c)}; }

inline std::string to_string(Coherence c) {
  switch (c) {
    case Coherence::clock: return "clock";
    case Coherence::plus: return "plus";
    case Coherence::minus: return "minus";
  }
  return "?";
}

inline Coherence coherence_from_string(const std::string& s) {
  if (s == "clock") return Coherence::clock;
  if (s == "plus") return Coherence::plus;
  if (s == "minus") return Coherence::minus;
  throw std::invalid_argument("unknown coherence: " + s);
}

}  // namespace maglat
