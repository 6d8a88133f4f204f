#pragma once

#include <stdexcept>
#include <string>

namespace maglat {

// Config file could not be read or parsed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A loaded value violates a documented invariant; message names the field.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lattice wavelength too close to a transition; message names the line.
struct ResonanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root bracket does not enclose a sign change (e.g. linear polarization).
struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration failed to reach tolerance.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adiabatic state labeling was ambiguous at the requested parameters.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace maglat
