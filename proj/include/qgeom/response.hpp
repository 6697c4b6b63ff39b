#ifndef QGEOM_RESPONSE_HPP
#define QGEOM_RESPONSE_HPP

#include <map>
#include <string>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::response {

struct ResponseReport {
    std::string tensor_name; // alpha | chi | Z_star | acoustic_sum | n_star | drude_D
    RMatrix components;
    std::string route; // Curvature | Kubo | FiniteDifference
    double residual_vs_alternate_route = 0;
    std::string model_fingerprint;
    double volume = 0;
    std::map<std::string, double> extras;
};

// Electronic polarizability. OBC models report alpha; PBC models report the
// susceptibility chi = alpha / L (extras carry epsilon_inf = 1 + 4 pi chi).
// The curvature route contracts dH/dA with the field derivative (position
// elements under PBC); the Kubo route sums position matrix elements over
// states. residual_vs_alternate_route carries their relative difference.
ResponseReport polarizability_curvature(const Model& model, const Params& at);
ResponseReport polarizability_kubo(const Model& model, const Params& at);

// -d^2 E0 / dE_beta dE_gamma by Richardson-extrapolated central differences
// (OBC only; diagonal pairs use a plain 1D stencil).
double polarizability_finite_field(const Model& model, const Params& at, int beta, int gamma,
                                   double field_step = 1e-3);

// Infrared (Born) charge tensor of nucleus s: Z_s plus the twist/displacement
// curvature. OBC models cross-check against the dipole finite-difference
// route; PBC models against the same sum with finite-difference derivative
// matrices.
ResponseReport born_charges(const Model& model, const Params& at, int nucleus);

// Sum of all Born tensors (the acoustic sum rule residual for neutral
// insulators; L * n_star for metals).
ResponseReport acoustic_sum(const Model& model, const Params& at);

// Effective free-carrier density n* and Drude weight D = pi e^2 n* / m,
// with the Kohn second-difference-over-twist oracle as the alternate route.
struct DrudeReport {
    ResponseReport n_star;  // Curvature route
    ResponseReport drude;   // D from the curvature n*
    RMatrix n_star_kohn;    // oracle values
    double twist_step = 0;
};
DrudeReport effective_density_and_drude(const Model& model, const Params& at,
                                        double twist_step_frac = 0.02);

// Dreyer-Coh-Stengel sum rule: (1/L) sum_s Z* against (m / pi e^2) D with D
// taken from the twist second difference of the ground energy.
struct DcsReport {
    RMatrix lhs; // (1/L) sum_s Z*_s, curvature route
    RMatrix rhs; // Kohn-oracle n*
    double residual = 0; // max relative difference
};
DcsReport dcs_sum_rule(const Model& model, const Params& at);

// Adiabatic bond currents 2 hbar lambda_dot Im sum <0|j_b|n><n|dH|0>/(E0-En)^2.
std::vector<double> adiabatic_current_density(const Model& model, const Params& at,
                                              const std::string& lambda, double lambda_dot);

// Site-resolved check that the discrete divergence of the adiabatic currents
// equals minus the adiabatic density rate; returns the max site residual.
double adiabatic_continuity_residual(const Model& model, const Params& at,
                                     const std::string& lambda, double lambda_dot);

// Lattice continuity identity: max over sites of the entrywise residual of
// div(j)_site - (i/hbar) [rho_site, H]. Zero to rounding for multiplicative
// potentials; materially nonzero once a nonlocal term is injected.
double continuity_identity_check(const Model& model, const Params& at);

// div(j) at each site as a matrix, from the bond-current field
std::vector<CMatrix> bond_current_divergence(const Model& model, const Params& at);

} // namespace qgeom::response

#endif
