#include "qgeom/models/two_site.hpp"

#include <cmath>

namespace qgeom::models {

Model build_two_site_molecule(double t_hop, double delta, double spacing,
                              UnitsConvention units) {
    if (spacing <= 0) throw InvalidParameter("two_site_molecule: spacing must be positive");

    Model m;
    m.name = "two_site_molecule";
    m.dim = 2;
    m.param_names = {"delta", "twist", "Ex"};
    m.default_params = {{"delta", delta}, {"twist", 0.0}, {"Ex", 0.0}};
    m.boundary = Boundary::OBC;
    m.n_electrons = 1;

    const double x0 = -spacing / 2, x1 = spacing / 2;
    LatticeGeometry geom;
    geom.n_sites = 2;
    geom.site_positions = {x0, x1};
    geom.bonds = {{0, 1}};
    m.lattice = geom;
    m.twist_params = {"twist"};
    m.field_params = {"Ex"};
    m.dipole_observables = {"x"};

    const UnitsConvention u = units;
    m.units = u;
    const Complex i(0, 1);

    auto hop = [=](double kappa) { return -t_hop * std::exp(-i * kappa * spacing); };

    m.build_h = [=](const Params& p) {
        CMatrix h = CMatrix::Zero(2, 2);
        double d = p.at("delta");
        h(0, 0) = d / 2 + u.e * p.at("Ex") * x0;
        h(1, 1) = -d / 2 + u.e * p.at("Ex") * x1;
        h(1, 0) = hop(p.at("twist"));
        h(0, 1) = std::conj(h(1, 0));
        return h;
    };
    m.build_dh = [=](const Params& p, const std::string& pname) {
        CMatrix d = CMatrix::Zero(2, 2);
        if (pname == "delta") {
            d(0, 0) = 0.5;
            d(1, 1) = -0.5;
        } else if (pname == "twist") {
            d(1, 0) = -i * spacing * hop(p.at("twist"));
            d(0, 1) = std::conj(d(1, 0));
        } else if (pname == "Ex") {
            d(0, 0) = u.e * x0;
            d(1, 1) = u.e * x1;
        } else {
            throw UnknownParameter("two_site_molecule: " + pname);
        }
        return d;
    };

    m.observables["x"] = [=](const Params&) {
        CMatrix x = CMatrix::Zero(2, 2);
        x(0, 0) = x0;
        x(1, 1) = x1;
        return x;
    };
    m.observable_fields["site_density"] = [=](const Params&) {
        std::vector<CMatrix> rho(2, CMatrix::Zero(2, 2));
        rho[0](0, 0) = -u.e;
        rho[1](1, 1) = -u.e;
        return rho;
    };
    auto bond_current = [=](const Params& p) {
        Complex h10 = hop(p.at("twist"));
        CMatrix jp = CMatrix::Zero(2, 2); // particle current 0 -> 1
        jp(0, 1) = i / u.hbar * std::conj(h10);
        jp(1, 0) = -i / u.hbar * h10;
        return std::vector<CMatrix>{-u.e * jp};
    };
    m.observable_fields["bond_current"] = bond_current;
    m.observables["current_total"] = [=](const Params& p) {
        return CMatrix{spacing * bond_current(p)[0]};
    };
    return m;
}

} // namespace qgeom::models
