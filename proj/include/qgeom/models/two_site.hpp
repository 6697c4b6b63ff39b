#ifndef QGEOM_MODELS_TWO_SITE_HPP
#define QGEOM_MODELS_TWO_SITE_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

// Minimal OBC "diatomic": two sites a apart, site energies +/- delta/2,
// hopping t. Exposes the dipole, a twist direction for the vector-potential
// derivative, and a linear field coupling, so every polarizability route can
// be cross-checked against the closed-form 2x2 sum over states.
// Parameters: "delta", "twist", "Ex".
Model build_two_site_molecule(double t_hop, double delta, double spacing = 1.0,
                              UnitsConvention units = {});

} // namespace qgeom::models

#endif
