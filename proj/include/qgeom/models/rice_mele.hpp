#ifndef QGEOM_MODELS_RICE_MELE_HPP
#define QGEOM_MODELS_RICE_MELE_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

// Single-particle alternating-bond chain: hoppings t_hop +/- delta_dim and a
// staggered onsite pattern of amplitude onsite_delta generated by two
// sublattice potential patterns ("nuclei" A and B), each a smooth kernel so
// that nuclear displacements have analytic Hamiltonian derivatives.
//
// Parameters: "delta_dim", "onsite_delta", "twist", "u_rigid", "u_A", "u_B",
// and under OBC the field "Ex". Under PBC every hopping carries the Peierls
// phase of the twist; the dipole is exposed under OBC only.
Model build_rice_mele(int n_sites, double t_hop, double delta_dim, double onsite_delta,
                      Boundary boundary, double twist = 0.0, double kernel_sigma = 0.8,
                      UnitsConvention units = {});

// Adds a rank-one nonlocal potential strength * |phi><phi| (phi a normalized
// Gaussian packet over a few sites) to an existing chain model; used as the
// deliberate continuity-violation probe.
Model with_nonlocal_potential(const Model& chain, double strength, int center_site,
                              double width_sites = 1.5);

} // namespace qgeom::models

#endif
