#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maglat/basis.hpp"

namespace maglat {

// Retrieval efficiency vs storage time at a fixed bias field.
struct DecayCurve {
  std::vector<double> t_s;
  std::vector<double> efficiency;
  std::vector<double> stderr_estimate;  // ensemble-mean delta-method estimate
  Coherence coherence = Coherence::clock;
  double bias_B_G = 0.0;
  double eta0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

// Retrieval efficiency vs bias field at a fixed storage time.
struct ScanCurve {
  std::vector<double> B_G;
  std::vector<double> efficiency;
  std::vector<double> stderr_estimate;
  Coherence coherence = Coherence::clock;
  double fixed_t_s = 0.0;
  double eta0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

}  // namespace maglat
