#ifndef QGEOM_MODELS_TWO_LEVEL_HPP
#define QGEOM_MODELS_TWO_LEVEL_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

// H(theta, phi) = (delta/2) n(theta,phi) . sigma, the generic two-parameter
// family whose ground-state curvature over (theta, phi) is sin(theta)/2.
// Parameters: "theta" (colatitude), "phi" (azimuth); the gap is delta
// everywhere.
Model build_two_level(double delta, double theta = 0.0, double phi = 0.0);

extern const CMatrix pauli_x;
extern const CMatrix pauli_y;
extern const CMatrix pauli_z;

} // namespace qgeom::models

#endif
