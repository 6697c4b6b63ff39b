#ifndef QGEOM_MODELS_PLANAR_MOLECULE_HPP
#define QGEOM_MODELS_PLANAR_MOLECULE_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

// One electron in a 2D anisotropic harmonic well tied to a rigid nuclear
// frame, expanded in a 2D oscillator basis truncated by total shell
// nx + ny <= basis_cut (shell truncation keeps rotations exactly covariant).
// The magnetic field enters in symmetric gauge about the coordinate origin,
// so dH/dB at B = 0 is (e/2mc) Lz; uniform vector-potential and electric-
// field couplings are included for the current/polarizability routes.
//
// Every well is quadratic with stiffness axes rotated by theta about the
// frame origin (ox, oy); nucleus s contributes with weight Z_s / sum(Z) and
// can be displaced through its own parameters.
//
// Parameters: "B", "theta", "ox", "oy", "Ax", "Ay", "Ex", "Ey",
// and "u{s}x", "u{s}y" per nucleus.
Model build_planar_molecule(double omega_x, double omega_y, int basis_cut, double b_field,
                            double theta, const NuclearFrame& frame,
                            UnitsConvention units = {});

// Default neutral zero-dipole frame: two Z = 1/2 nuclei at (+/- separation/2, 0).
NuclearFrame symmetric_diatomic_frame(double separation, double mass = 1836.0);

} // namespace qgeom::models

#endif
