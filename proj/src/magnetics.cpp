#include "qgeom/magnetics.hpp"

#include <array>
#include <cmath>

#include "qgeom/geometry.hpp"

namespace qgeom::magnetics {

namespace {

void require_molecule(const Model& m) {
    if (m.boundary != Boundary::OBC || !m.frame)
        throw InvalidParameter("magnetic molecular responses need an OBC model with a frame");
    if (!m.has_param("B") || !m.has_param("theta"))
        throw InvalidParameter("model '" + m.name + "' lacks the B/theta parameters");
}

// absolute nucleus positions: axis offset + rotated frame + displacements
std::vector<std::array<double, 2>> nucleus_positions(const Model& m, const Params& p) {
    double ct = std::cos(p.at("theta")), st = std::sin(p.at("theta"));
    std::vector<std::array<double, 2>> out;
    for (std::size_t s = 0; s < m.frame->nuclei.size(); ++s) {
        const auto& nuc = m.frame->nuclei[s];
        double rx = ct * nuc.position[0] - st * nuc.position[1];
        double ry = st * nuc.position[0] + ct * nuc.position[1];
        double ux = 0, uy = 0;
        if (s < m.nucleus_params.size() && m.nucleus_params[s].size() == 2) {
            ux = p.at(m.nucleus_params[s][0]);
            uy = p.at(m.nucleus_params[s][1]);
        }
        out.push_back({p.at("ox") + rx + ux, p.at("oy") + ry + uy});
    }
    return out;
}

// charge/mass-weighted second moments: about the rotation axis for the
// rigid-rotation radii, about the fixed gauge origin for the charge-cloud
// split of the moment
double nuclear_moment(const Model& m, const Params& p, bool mass_weighted, bool about_axis) {
    auto pos = nucleus_positions(m, p);
    double ox = about_axis ? p.at("ox") : 0.0, oy = about_axis ? p.at("oy") : 0.0;
    double s = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
        double dx = pos[k][0] - ox, dy = pos[k][1] - oy;
        const auto& nuc = m.frame->nuclei[k];
        s += (mass_weighted ? nuc.mass : nuc.charge) * (dx * dx + dy * dy);
    }
    return s;
}

} // namespace

double basis_drift(const Model& m, const Params& at) {
    if (!m.refined) return 0.0;
    Model fine = m.refined();
    double e0 = eigendecompose(m.hamiltonian(at)).energies[0];
    double e1 = eigendecompose(fine.hamiltonian(at)).energies[0];
    return std::abs(e1 - e0);
}

RotationalReport rotational_moment(const Model& m, const Params& at, double drift_tol) {
    require_molecule(m);
    Params p = m.resolve(at);
    double drift = basis_drift(m, p);
    if (drift > drift_tol)
        throw BasisNotConverged("ground-energy drift " + std::to_string(drift) +
                                " under basis refinement");

    const UnitsConvention& u = m.units;
    EigenSystem eig = m.ground_system(p);
    double omega = geometry::curvature_kubo(m, p, "B", "theta").value;
    double rho2_origin = expectation(m.observable(p, "r2").matrix(), eig.state(0));

    // total: rigid nuclear loops about the axis plus the electronic response
    // of the angular momentum about the gauge origin
    RotationalReport rep;
    rep.curvature_B_theta = omega;
    rep.m_z_per_thetadot =
        u.e / (2 * u.c) * nuclear_moment(m, p, false, true) + u.hbar * omega;
    // charge-cloud term of the split: second moments about the gauge origin
    rep.m_z0_per_thetadot =
        u.e / (2 * u.c) * (nuclear_moment(m, p, false, false) - rho2_origin);
    rep.m_z1_per_thetadot = rep.m_z_per_thetadot - rep.m_z0_per_thetadot;
    rep.mech_moment_per_thetadot = nuclear_moment(m, p, true, true);
    if (rep.mech_moment_per_thetadot > 0)
        rep.g_factor = 2 * u.mass * u.c / u.e * rep.m_z_per_thetadot /
                       rep.mech_moment_per_thetadot;
    return rep;
}

MagnetizabilityReport magnetizability(const Model& m, const Params& at, double field_step,
                                      double drift_tol) {
    require_molecule(m);
    Params p = m.resolve(at);
    double drift = basis_drift(m, p);
    if (drift > drift_tol)
        throw BasisNotConverged("ground-energy drift " + std::to_string(drift) +
                                " under basis refinement");

    const UnitsConvention& u = m.units;
    EigenSystem eig = m.ground_system(p);

    MagnetizabilityReport rep;
    rep.chi_dia = -u.e * u.e / (4 * u.mass * u.c * u.c) *
                  expectation(m.observable(p, "r2").matrix(), eig.state(0));

    CMatrix lz = m.observable(p, "Lz").matrix();
    CVector vlz = eig.states.adjoint() * (lz * eig.states.col(0));
    double sum = 0;
    for (int n = 1; n < eig.dim(); ++n)
        sum += std::norm(vlz[n]) / (eig.energies[n] - eig.energies[0]);
    rep.chi_para_kubo = u.e * u.e / (2 * u.mass * u.mass * u.c * u.c) * sum;

    double omega = geometry::curvature_kubo(m, p, "B", "theta").value;
    rep.chi_para_curvature = -u.hbar * u.e / (2 * u.mass * u.c) * omega;
    rep.residual_para_routes = std::abs(rep.chi_para_kubo - rep.chi_para_curvature);
    rep.chi_total = rep.chi_dia + rep.chi_para_kubo;

    auto e0 = [&](double db) {
        Params q = p;
        q["B"] += db;
        return eigendecompose(m.hamiltonian(q)).energies[0];
    };
    double ez = e0(0);
    auto second = [&](double h) { return (e0(h) - 2 * ez + e0(-h)) / (h * h); };
    double d1 = second(field_step), d2 = second(field_step / 2);
    rep.chi_finite_field = -(4 * d2 - d1) / 3;
    rep.residual_finite_field = std::abs(rep.chi_total - rep.chi_finite_field) /
                                std::max(1e-300, std::abs(rep.chi_finite_field));
    return rep;
}

double total_vs_deformation_residual(const Model& m, const Params& at) {
    RotationalReport rot = rotational_moment(m, at);
    MagnetizabilityReport mag = magnetizability(m, at);
    const UnitsConvention& u = m.units;
    return std::abs(mag.chi_total + u.e / (2 * u.mass * u.c) * rot.m_z1_per_thetadot);
}

GaugeOriginScan gauge_origin_scan(const Model& m, const Params& at,
                                  const std::vector<std::pair<double, double>>& origins) {
    if (origins.size() < 2) throw InvalidParameter("gauge scan needs at least two origins");
    GaugeOriginScan scan;
    scan.origins = origins;
    for (auto [ox, oy] : origins) {
        Params p = m.resolve(at);
        p["ox"] = ox;
        p["oy"] = oy;
        scan.rotational.push_back(rotational_moment(m, p));
        scan.magnetic.push_back(magnetizability(m, p));
    }
    auto spread = [](auto&& get, const auto& v) {
        double lo = get(v.front()), hi = lo;
        for (const auto& r : v) {
            lo = std::min(lo, get(r));
            hi = std::max(hi, get(r));
        }
        return hi - lo;
    };
    scan.m_z_spread = spread([](const RotationalReport& r) { return r.m_z_per_thetadot; },
                             scan.rotational);
    scan.m_z0_spread = spread([](const RotationalReport& r) { return r.m_z0_per_thetadot; },
                              scan.rotational);
    scan.chi_total_spread = spread([](const MagnetizabilityReport& r) { return r.chi_total; },
                                   scan.magnetic);
    scan.chi_dia_spread = spread([](const MagnetizabilityReport& r) { return r.chi_dia; },
                                 scan.magnetic);
    scan.chi_para_spread = spread([](const MagnetizabilityReport& r) { return r.chi_para_kubo; },
                                  scan.magnetic);
    return scan;
}

} // namespace qgeom::magnetics
