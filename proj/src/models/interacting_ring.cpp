#include "qgeom/models/interacting_ring.hpp"

#include <cmath>
#include <memory>

#include "qgeom/models/fermion_basis.hpp"

namespace qgeom::models {

namespace {
constexpr double kSpacing = 1.0;

// binomial guard before enumerating the basis
double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / i;
    return r;
}
} // namespace

Model build_interacting_ring(int n_sites, int n_fermions, double t_hop, double v_int,
                             double twist, UnitsConvention units) {
    if (n_sites < 3) throw InvalidParameter("interacting_ring: need at least 3 sites");
    if (n_fermions < 1 || n_fermions > n_sites)
        throw InvalidParameter("interacting_ring: filling outside 1..n_sites");
    if (binomial(n_sites, n_fermions) > 4000)
        throw DimensionTooLarge("interacting_ring: basis dimension exceeds 4000");

    auto basis = std::make_shared<FermionBasis>(n_sites, n_fermions);
    const int n = n_sites;
    const Complex iu(0, 1);
    const UnitsConvention u = units;

    Model m;
    m.name = "interacting_ring";
    m.dim = basis->dim();
    m.param_names = {"twist"};
    m.default_params = {{"twist", twist}};
    m.boundary = Boundary::PBC;
    m.n_electrons = n_fermions;
    m.cell_volume = n * kSpacing;
    m.units = u;
    m.units.mass = u.hbar * u.hbar / (2 * t_hop * kSpacing * kSpacing);
    m.twist_params = {"twist"};

    LatticeGeometry geom;
    geom.n_sites = n;
    for (int j = 0; j < n; ++j) geom.site_positions.push_back(j * kSpacing);
    for (int j = 0; j < n; ++j) geom.bonds.push_back({j, (j + 1) % n});
    geom.lattice_period = kSpacing;
    geom.ring_length = n * kSpacing;
    m.lattice = geom;

    // single-particle hop matrix with the Peierls phase on every bond
    auto sp_hop = [=](double kappa) {
        CMatrix h = CMatrix::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            int to = (j + 1) % n;
            h(to, j) += -t_hop * std::exp(-iu * kappa * kSpacing);
            h(j, to) += std::conj(h(to, j));
        }
        return h;
    };
    auto sp_dhop = [=](double kappa) {
        CMatrix d = CMatrix::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            int to = (j + 1) % n;
            Complex dh = iu * kSpacing * t_hop * std::exp(-iu * kappa * kSpacing);
            d(to, j) += dh;
            d(j, to) += std::conj(dh);
        }
        return d;
    };

    CMatrix v_diag = basis->diagonal([=](std::uint64_t mask) {
        double v = 0;
        for (int j = 0; j < n; ++j)
            if ((mask >> j & 1) && (mask >> ((j + 1) % n) & 1)) v += v_int;
        return v;
    });

    m.build_h = [=](const Params& p) {
        return CMatrix{basis->one_body(sp_hop(p.at("twist"))) + v_diag};
    };
    m.build_dh = [=](const Params& p, const std::string& pname) {
        if (pname != "twist") throw UnknownParameter("interacting_ring: " + pname);
        return basis->one_body(sp_dhop(p.at("twist")));
    };

    m.observables["current_total"] = [=](const Params& p) {
        return CMatrix{-u.e / u.hbar * basis->one_body(sp_dhop(p.at("twist")))};
    };
    m.observable_fields["site_density"] = [=](const Params&) {
        std::vector<CMatrix> rho;
        for (int j = 0; j < n; ++j)
            rho.push_back(basis->diagonal(
                [=](std::uint64_t mask) { return mask >> j & 1 ? -u.e : 0.0; }));
        return rho;
    };
    m.observable_fields["bond_current"] = [=](const Params& p) {
        std::vector<CMatrix> js;
        for (int j = 0; j < n; ++j) {
            int to = (j + 1) % n;
            Complex h = -t_hop * std::exp(-iu * p.at("twist") * kSpacing);
            CMatrix jp = CMatrix::Zero(n, n);
            jp(j, to) = iu / u.hbar * std::conj(h);
            jp(to, j) = -iu / u.hbar * h;
            js.push_back(-u.e * basis->one_body(jp));
        }
        return js;
    };
    return m;
}

} // namespace qgeom::models
