#ifndef QGEOM_MODELS_CONTINUUM_RING_HPP
#define QGEOM_MODELS_CONTINUUM_RING_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

struct ContinuumRingSpec {
    double length = 8.0;       // ring circumference L
    int n_fermions = 1;        // N spinless fermions
    int pw_cut = 6;            // plane waves with |m| <= pw_cut
    int n_wells = 1;           // equally spaced attractive wells ("nuclei")
    double well_depth = 0.0;   // V0 >= 0; 0 gives the free ring
    double well_sigma = 0.6;   // Gaussian width of each well
    double v_int = 0.0;        // pair-repulsion amplitude
    double int_sigma = 0.8;    // pair-potential width
    double twist = 0.0;
    UnitsConvention units;
};

// N spinless fermions on a continuum periodic ring in a truncated plane-wave
// basis. The twist enters as (p + hbar*kappa)^2 / 2m, the wells through a few
// Fourier modes with exact matrix elements, and the pair potential through a
// translation-invariant mode expansion. Within the truncated basis the
// canonical commutation identity [P, V] = -i hbar dV/dx holds exactly, which
// is what the translation-vs-field sum rules rely on.
//
// Parameters: "twist", "u_rigid", "u_0" .. "u_{n_wells-1}".
Model build_continuum_ring(const ContinuumRingSpec& spec);

} // namespace qgeom::models

#endif
