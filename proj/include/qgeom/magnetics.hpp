#ifndef QGEOM_MAGNETICS_HPP
#define QGEOM_MAGNETICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::magnetics {

// Rotational magnetic moment of the rigidly rotating molecule, split into the
// rigid charge-cloud term m_z0 and the deformation term m_z1 (their sum is
// exact by construction), plus the mechanical moment and g factor.
struct RotationalReport {
    double m_z_per_thetadot = 0;
    double m_z0_per_thetadot = 0;
    double m_z1_per_thetadot = 0;
    double mech_moment_per_thetadot = 0;
    double g_factor = 0;
    double curvature_B_theta = 0; // Omega(B_z, theta) at the evaluation point
};

struct MagnetizabilityReport {
    double chi_dia = 0;            // -(e^2/4mc^2) <x^2+y^2>, never positive
    double chi_para_kubo = 0;      // angular-momentum sum over states
    double chi_para_curvature = 0; // -(hbar e / 2mc) Omega(B_z, theta)
    double chi_total = 0;          // dia + para (Kubo route)
    double residual_para_routes = 0;
    double chi_finite_field = 0;   // -d^2 E0 / dB^2, Richardson
    double residual_finite_field = 0;
};

// Basis-convergence guard: when the model carries a refined rebuild, the
// ground-energy drift against it must stay below drift_tol.
double basis_drift(const Model& model, const Params& at);

RotationalReport rotational_moment(const Model& model, const Params& at,
                                   double drift_tol = 1e-8);

MagnetizabilityReport magnetizability(const Model& model, const Params& at,
                                      double field_step = 2e-2, double drift_tol = 1e-8);

// | chi_total + (e/2mc) m_z1/theta_dot |: the total magnetizability against
// the deformation moment, computed through independent routes.
double total_vs_deformation_residual(const Model& model, const Params& at);

struct GaugeOriginScan {
    std::vector<std::pair<double, double>> origins;
    std::vector<RotationalReport> rotational;
    std::vector<MagnetizabilityReport> magnetic;
    double m_z_spread = 0;
    double chi_total_spread = 0;
    double chi_dia_spread = 0;
    double chi_para_spread = 0;
    double m_z0_spread = 0;
};

// Re-evaluates both reports with the rotation axis (and the frame tied to it)
// displaced to each origin, keeping the electromagnetic gauge origin fixed.
GaugeOriginScan gauge_origin_scan(const Model& model, const Params& at,
                                  const std::vector<std::pair<double, double>>& origins);

} // namespace qgeom::magnetics

#endif
