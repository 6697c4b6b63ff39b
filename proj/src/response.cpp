#include "qgeom/response.hpp"

#include <cmath>

#include "qgeom/geometry.hpp"
#include "qgeom/models/position_elements.hpp"

namespace qgeom::response {

namespace {

// dH/dA_dir with A the uniform vector potential; models expose either a
// literal A parameter or the twist kappa = e A / (hbar c).
CMatrix d_h_wrt_A(const Model& m, const Params& p, int dir) {
    const UnitsConvention& u = m.units;
    if (static_cast<std::size_t>(dir) < m.vector_potential_params.size())
        return m.build_dh(p, m.vector_potential_params[dir]);
    if (static_cast<std::size_t>(dir) < m.twist_params.size())
        return u.e / (u.hbar * u.c) * m.build_dh(p, m.twist_params[dir]);
    throw ForbiddenOperator("model '" + m.name + "' has no vector-potential direction " +
                            std::to_string(dir));
}

int n_response_dirs(const Model& m) {
    std::size_t n = m.boundary == Boundary::OBC
                        ? std::max(m.field_params.size(), m.dipole_observables.size())
                        : std::max(m.twist_params.size(), m.vector_potential_params.size());
    if (n == 0)
        throw ForbiddenOperator("model '" + m.name + "' exposes no field/dipole response surface");
    return static_cast<int>(n);
}

// <n|e r_gamma|0> column in the eigenbasis: the field derivative sandwich.
// OBC: literal dH/dE. PBC: e times the velocity-form position elements.
CVector field_derivative_column(const Model& m, const Params& p, const EigenSystem& eig,
                                int gamma) {
    if (m.boundary == Boundary::OBC) {
        if (static_cast<std::size_t>(gamma) >= m.field_params.size())
            throw ForbiddenOperator("model '" + m.name + "' has no field direction " +
                                    std::to_string(gamma));
        return eig.states.adjoint() * (m.build_dh(p, m.field_params[gamma]) * eig.states.col(0));
    }
    auto rel = models::position_matrix_elements(m, p, eig, gamma, models::PositionRoute::Velocity);
    return m.units.e * rel.matrix().col(0);
}

// position elements column <n|r_beta|0> for the Kubo route
CVector position_column(const Model& m, const Params& p, const EigenSystem& eig, int beta) {
    auto route = m.boundary == Boundary::OBC ? models::PositionRoute::Direct
                                             : models::PositionRoute::Velocity;
    auto rel = models::position_matrix_elements(m, p, eig, beta, route);
    return rel.matrix().col(0);
}

struct BothRoutes {
    RMatrix curvature;
    RMatrix kubo;
};

BothRoutes polarizability_routes(const Model& m, const Params& at) {
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p);
    const UnitsConvention& u = m.units;
    const int nd = n_response_dirs(m);

    BothRoutes out;
    out.curvature = RMatrix::Zero(nd, nd);
    out.kubo = RMatrix::Zero(nd, nd);

    std::vector<CVector> va(nd), ve(nd), vr(nd);
    for (int d = 0; d < nd; ++d) {
        va[d] = eig.states.adjoint() * (d_h_wrt_A(m, p, d) * eig.states.col(0));
        ve[d] = field_derivative_column(m, p, eig, d);
        vr[d] = position_column(m, p, eig, d);
    }
    for (int b = 0; b < nd; ++b)
        for (int g = 0; g < nd; ++g) {
            double omega = 0, kubo = 0;
            for (int n = 1; n < eig.dim(); ++n) {
                double de0 = eig.energies[0] - eig.energies[n];
                omega += -2.0 * (std::conj(va[b][n]) * ve[g][n]).imag() / (de0 * de0);
                kubo += 2.0 * u.e * u.e *
                        (std::conj(vr[b][n]) * vr[g][n]).real() / (eig.energies[n] - eig.energies[0]);
            }
            out.curvature(b, g) = u.hbar * u.c * omega;
            out.kubo(b, g) = kubo;
        }
    return out;
}

double max_rel_diff(const RMatrix& a, const RMatrix& b) {
    double scale = std::max({1e-300, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

ResponseReport make_polarizability_report(const Model& m, const Params& at, bool curvature_route) {
    BothRoutes r = polarizability_routes(m, at);
    RMatrix primary = curvature_route ? r.curvature : r.kubo;

    ResponseReport rep;
    rep.route = curvature_route ? "Curvature" : "Kubo";
    rep.residual_vs_alternate_route = max_rel_diff(r.curvature, r.kubo);
    rep.model_fingerprint = m.fingerprint(at);
    if (m.boundary == Boundary::PBC) {
        rep.tensor_name = "chi";
        rep.volume = m.cell_volume;
        rep.components = primary / m.cell_volume;
        rep.extras["epsilon_inf"] = 1.0 + 4 * M_PI * rep.components(0, 0);
    } else {
        rep.tensor_name = "alpha";
        rep.components = primary;
    }
    return rep;
}

// Z*_s components via the sum-over-states contraction of dH/dA with the
// nuclear displacement derivative.
RMatrix born_curvature(const Model& m, const Params& p, const EigenSystem& eig, int nucleus,
                       bool finite_difference_derivatives) {
    if (!m.frame || static_cast<std::size_t>(nucleus) >= m.frame->nuclei.size())
        throw InvalidParameter("model '" + m.name + "' has no nucleus " + std::to_string(nucleus));
    if (static_cast<std::size_t>(nucleus) >= m.nucleus_params.size())
        throw ForbiddenOperator("model '" + m.name + "' has no displacement parameters for nucleus " +
                                std::to_string(nucleus));
    const UnitsConvention& u = m.units;
    const auto& uparams = m.nucleus_params[nucleus];
    const int nd = static_cast<int>(uparams.size());

    RMatrix z = RMatrix::Zero(nd, nd);
    for (int a = 0; a < nd; ++a) {
        CVector va = eig.states.adjoint() * (d_h_wrt_A(m, p, a) * eig.states.col(0));
        for (int b = 0; b < nd; ++b) {
            CMatrix du;
            if (!finite_difference_derivatives) {
                du = m.build_dh(p, uparams[b]);
            } else {
                double h = 1e-4;
                auto shift = [&](double dd) {
                    Params q = p;
                    q[uparams[b]] += dd;
                    return m.build_h(q);
                };
                CMatrix d1 = (shift(h) - shift(-h)) / (2 * h);
                CMatrix d2 = (shift(h / 2) - shift(-h / 2)) / h;
                du = (4.0 * d2 - d1) / 3.0;
            }
            CVector vu = eig.states.adjoint() * (du * eig.states.col(0));
            double omega = 0;
            for (int n = 1; n < eig.dim(); ++n) {
                double de0 = eig.energies[0] - eig.energies[n];
                omega += -2.0 * (std::conj(va[n]) * vu[n]).imag() / (de0 * de0);
            }
            z(a, b) = (m.frame->nuclei[nucleus].charge) * (a == b ? 1.0 : 0.0) +
                      u.hbar * u.c / u.e * omega;
        }
    }
    return z;
}

// dipole-derivative route for OBC models: Z delta - d<x_a>/du_b (Richardson)
RMatrix born_dipole_fd(const Model& m, const Params& p, int nucleus) {
    const auto& uparams = m.nucleus_params[nucleus];
    const int nd = static_cast<int>(uparams.size());
    RMatrix z = RMatrix::Zero(nd, nd);
    for (int a = 0; a < nd; ++a) {
        CMatrix x = m.observable(p, m.dipole_observables[a]).matrix();
        for (int b = 0; b < nd; ++b) {
            double h = 1e-4;
            auto mean_x = [&](double dd) {
                Params q = p;
                q[uparams[b]] += dd;
                return expectation(x, m.ground_system(q).state(0));
            };
            double d1 = (mean_x(h) - mean_x(-h)) / (2 * h);
            double d2 = (mean_x(h / 2) - mean_x(-h / 2)) / h;
            double dxdu = (4 * d2 - d1) / 3;
            z(a, b) = m.frame->nuclei[nucleus].charge * (a == b ? 1.0 : 0.0) - dxdu;
        }
    }
    return z;
}

// Kohn oracle: n*_ab = (m / hbar^2 L) d^2 E0 / dkappa_a dkappa_b (Richardson)
RMatrix kohn_density(const Model& m, const Params& p, double twist_step) {
    const UnitsConvention& u = m.units;
    const int nd = static_cast<int>(m.twist_params.size());
    if (nd == 0) throw ForbiddenOperator("Kohn oracle needs a twist parameter");
    RMatrix n = RMatrix::Zero(nd, nd);
    auto e0 = [&](int dir, double dk) {
        Params q = p;
        q[m.twist_params[dir]] += dk;
        return eigendecompose(m.hamiltonian(q)).energies[0];
    };
    for (int a = 0; a < nd; ++a) {
        double ez = e0(a, 0);
        auto second = [&](double h) { return (e0(a, h) - 2 * ez + e0(a, -h)) / (h * h); };
        double d1 = second(twist_step), d2 = second(twist_step / 2);
        n(a, a) = u.mass / (u.hbar * u.hbar * m.cell_volume) * (4 * d2 - d1) / 3;
        // off-diagonal twists are not exposed by the 1D models in the zoo
    }
    return n;
}

} // namespace

ResponseReport polarizability_curvature(const Model& m, const Params& at) {
    return make_polarizability_report(m, at, true);
}

ResponseReport polarizability_kubo(const Model& m, const Params& at) {
    return make_polarizability_report(m, at, false);
}

double polarizability_finite_field(const Model& m, const Params& at, int beta, int gamma,
                                   double field_step) {
    if (m.boundary != Boundary::OBC)
        throw ForbiddenOperator("finite-field polarizability requires an OBC model");
    if (static_cast<std::size_t>(beta) >= m.field_params.size() ||
        static_cast<std::size_t>(gamma) >= m.field_params.size())
        throw ForbiddenOperator("field direction not exposed by model '" + m.name + "'");
    Params p = m.resolve(at);
    auto e0 = [&](double fb, double fg) {
        Params q = p;
        q[m.field_params[beta]] += fb;
        if (gamma != beta) q[m.field_params[gamma]] += fg;
        return eigendecompose(m.hamiltonian(q)).energies[0];
    };
    if (beta == gamma) {
        double ez = e0(0, 0);
        auto second = [&](double h) { return (e0(h, 0) - 2 * ez + e0(-h, 0)) / (h * h); };
        double d1 = second(field_step), d2 = second(field_step / 2);
        return -(4 * d2 - d1) / 3;
    }
    auto mixed = [&](double h) {
        return (e0(h, h) - e0(h, -h) - e0(-h, h) + e0(-h, -h)) / (4 * h * h);
    };
    double d1 = mixed(field_step), d2 = mixed(field_step / 2);
    return -(4 * d2 - d1) / 3;
}

ResponseReport born_charges(const Model& m, const Params& at, int nucleus) {
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p);
    RMatrix z = born_curvature(m, p, eig, nucleus, false);

    RMatrix alt = m.boundary == Boundary::OBC && !m.dipole_observables.empty()
                      ? born_dipole_fd(m, p, nucleus)
                      : born_curvature(m, p, eig, nucleus, true);

    ResponseReport rep;
    rep.tensor_name = "Z_star";
    rep.components = z;
    rep.route = "Curvature";
    rep.residual_vs_alternate_route = (z - alt).cwiseAbs().maxCoeff();
    rep.model_fingerprint = m.fingerprint(at);
    rep.volume = m.cell_volume;
    rep.extras["nucleus"] = nucleus;
    return rep;
}

ResponseReport acoustic_sum(const Model& m, const Params& at) {
    if (!m.frame || m.frame->nuclei.empty())
        throw InvalidParameter("acoustic sum needs a nuclear frame");
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p); // shared by every nucleus
    ResponseReport total;
    total.tensor_name = "acoustic_sum";
    total.route = "Curvature";
    total.model_fingerprint = m.fingerprint(at);
    total.volume = m.cell_volume;
    for (std::size_t s = 0; s < m.frame->nuclei.size(); ++s) {
        RMatrix zs = born_curvature(m, p, eig, static_cast<int>(s), false);
        if (total.components.size() == 0)
            total.components = zs;
        else
            total.components += zs;
    }
    return total;
}

DrudeReport effective_density_and_drude(const Model& m, const Params& at,
                                        double twist_step_frac) {
    if (m.boundary != Boundary::PBC)
        throw ForbiddenOperator("effective density is defined for PBC models");
    if (m.rigid_displacement_params.empty())
        throw ForbiddenOperator("model '" + m.name + "' has no rigid-translation parameter");
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p);
    const UnitsConvention& u = m.units;
    const int nd = static_cast<int>(m.twist_params.size());
    const double L = m.cell_volume;

    RMatrix nstar = RMatrix::Zero(nd, nd);
    for (int a = 0; a < nd; ++a) {
        CVector va = eig.states.adjoint() * (d_h_wrt_A(m, p, a) * eig.states.col(0));
        for (int b = 0; b < static_cast<int>(m.rigid_displacement_params.size()); ++b) {
            CVector vu = eig.states.adjoint() *
                         (m.build_dh(p, m.rigid_displacement_params[b]) * eig.states.col(0));
            double omega = 0;
            for (int n = 1; n < eig.dim(); ++n) {
                double de0 = eig.energies[0] - eig.energies[n];
                omega += -2.0 * (std::conj(va[n]) * vu[n]).imag() / (de0 * de0);
            }
            nstar(a, b) = (m.n_electrons * (a == b ? 1.0 : 0.0) + u.hbar * u.c / u.e * omega) / L;
        }
    }

    double kappa_scale = 2 * M_PI / L;
    RMatrix kohn = kohn_density(m, p, twist_step_frac * kappa_scale);

    DrudeReport out;
    out.twist_step = twist_step_frac * kappa_scale;
    out.n_star.tensor_name = "n_star";
    out.n_star.components = nstar;
    out.n_star.route = "Curvature";
    out.n_star.residual_vs_alternate_route = max_rel_diff(nstar, kohn);
    out.n_star.model_fingerprint = m.fingerprint(at);
    out.n_star.volume = L;

    out.drude = out.n_star;
    out.drude.tensor_name = "drude_D";
    out.drude.components = M_PI * u.e * u.e / u.mass * nstar;

    out.n_star_kohn = kohn;
    return out;
}

DcsReport dcs_sum_rule(const Model& m, const Params& at) {
    if (m.boundary != Boundary::PBC)
        throw ForbiddenOperator("the translation-vs-field sum rule applies to PBC models");
    ResponseReport zsum = acoustic_sum(m, at);
    Params p = m.resolve(at);
    double kappa_scale = 2 * M_PI / m.cell_volume;
    RMatrix kohn = kohn_density(m, p, 0.02 * kappa_scale);

    DcsReport out;
    out.lhs = zsum.components / m.cell_volume;
    out.rhs = kohn;
    out.residual = max_rel_diff(out.lhs, out.rhs);
    return out;
}

std::vector<double> adiabatic_current_density(const Model& m, const Params& at,
                                              const std::string& lambda, double lambda_dot) {
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p);
    const UnitsConvention& u = m.units;
    auto bonds = m.observable_field(p, "bond_current");
    CVector vl = eig.states.adjoint() * (m.build_dh(p, lambda) * eig.states.col(0));

    std::vector<double> j;
    for (const auto& jb : bonds) {
        CVector vo = eig.states.adjoint() * (jb * eig.states.col(0));
        double sum = 0;
        for (int n = 1; n < eig.dim(); ++n) {
            double de0 = eig.energies[0] - eig.energies[n];
            sum += (std::conj(vo[n]) * vl[n]).imag() / (de0 * de0);
        }
        j.push_back(2 * u.hbar * lambda_dot * sum);
    }
    return j;
}

std::vector<CMatrix> bond_current_divergence(const Model& m, const Params& at) {
    if (!m.lattice) throw InvalidParameter("bond currents need a lattice model");
    Params p = m.resolve(at);
    auto bonds = m.observable_field(p, "bond_current");
    const auto& geom = *m.lattice;
    std::vector<CMatrix> div(geom.n_sites);
    for (int j = 0; j < geom.n_sites; ++j) div[j] = CMatrix::Zero(m.dim, m.dim);
    for (std::size_t b = 0; b < geom.bonds.size(); ++b) {
        auto [from, to] = geom.bonds[b];
        div[from] += bonds[b]; // outgoing
        div[to] -= bonds[b];   // incoming
    }
    return div;
}

double adiabatic_continuity_residual(const Model& m, const Params& at, const std::string& lambda,
                                     double lambda_dot) {
    Params p = m.resolve(at);
    EigenSystem eig = m.ground_system(p);
    const UnitsConvention& u = m.units;
    auto rho = m.observable_field(p, "site_density");
    auto bonds = m.observable_field(p, "bond_current");
    const auto& geom = *m.lattice;

    CVector vl = eig.states.adjoint() * (m.build_dh(p, lambda) * eig.states.col(0));
    auto sos_im = [&](const CMatrix& O) {
        CVector vo = eig.states.adjoint() * (O * eig.states.col(0));
        double s = 0;
        for (int n = 1; n < eig.dim(); ++n) {
            double de0 = eig.energies[0] - eig.energies[n];
            s += (std::conj(vo[n]) * vl[n]).imag() / (de0 * de0);
        }
        return s;
    };
    auto sos_re_over_gap = [&](const CMatrix& O) {
        CVector vo = eig.states.adjoint() * (O * eig.states.col(0));
        double s = 0;
        for (int n = 1; n < eig.dim(); ++n)
            s += (std::conj(vo[n]) * vl[n]).real() / (eig.energies[0] - eig.energies[n]);
        return s;
    };

    // adiabatic bond currents, then their signed sums per site
    std::vector<double> jb;
    for (const auto& op : bonds) jb.push_back(2 * u.hbar * lambda_dot * sos_im(op));

    double max_resid = 0;
    for (int j = 0; j < geom.n_sites; ++j) {
        double div = 0;
        for (std::size_t b = 0; b < geom.bonds.size(); ++b) {
            if (geom.bonds[b].first == j) div += jb[b];
            if (geom.bonds[b].second == j) div -= jb[b];
        }
        // density rate 2 lambda_dot Re<0|rho|d_lambda 0>
        double rho_dot = 2 * lambda_dot * sos_re_over_gap(rho[j]);
        max_resid = std::max(max_resid, std::abs(div + rho_dot));
    }
    return max_resid;
}

double continuity_identity_check(const Model& m, const Params& at) {
    Params p = m.resolve(at);
    CMatrix h = m.build_h(p);
    auto rho = m.observable_field(p, "site_density");
    auto div = bond_current_divergence(m, p);
    const Complex iu(0, 1);
    double worst = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        CMatrix lhs = iu / m.units.hbar * commutator(rho[j], h);
        worst = std::max(worst, max_abs(lhs - div[j]));
    }
    return worst;
}

} // namespace qgeom::response
