#ifndef QGEOM_MODELS_INTERACTING_RING_HPP
#define QGEOM_MODELS_INTERACTING_RING_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

// Spinless fermions on a periodic chain with nearest-neighbor repulsion,
// in the fixed-number occupation basis. The twist enters every hop as a
// Peierls phase. Parameter: "twist". Exposes the integrated current and
// the site-density / bond-current operator fields as many-body operators.
//
// units.mass is set to the band mass hbar^2 / (2 t a^2) so that continuum
// response formulas correspond at the band bottom.
Model build_interacting_ring(int n_sites, int n_fermions, double t_hop, double v_int,
                             double twist = 0.0, UnitsConvention units = {});

} // namespace qgeom::models

#endif
