#include "qgeom/models/continuum_ring.hpp"

#include <cmath>
#include <memory>

#include "qgeom/models/fermion_basis.hpp"

namespace qgeom::models {

namespace {
double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / i;
    return r;
}
} // namespace

Model build_continuum_ring(const ContinuumRingSpec& spec) {
    if (spec.length <= 0) throw InvalidParameter("continuum_ring: length must be positive");
    if (spec.pw_cut < 1) throw InvalidParameter("continuum_ring: pw_cut must be >= 1");
    if (spec.n_wells < 1) throw InvalidParameter("continuum_ring: need at least one well");
    const int n_modes = 2 * spec.pw_cut + 1;
    if (spec.n_fermions < 1 || spec.n_fermions > n_modes)
        throw InvalidParameter("continuum_ring: filling outside the mode range");
    if (binomial(n_modes, spec.n_fermions) > 4000)
        throw DimensionTooLarge("continuum_ring: basis dimension exceeds 4000");

    auto basis = std::make_shared<FermionBasis>(n_modes, spec.n_fermions);
    const double L = spec.length;
    const double g = 2 * M_PI / L;
    const int cut = spec.pw_cut;
    const UnitsConvention u = spec.units;
    const Complex iu(0, 1);

    // Fourier content of one well: v(x) = -V0 sum_{q>=1} a_q cos(q g x),
    // a_q a Gaussian taper; modes beyond the representable range are dropped.
    std::vector<double> aq(2 * cut + 1, 0.0); // index q = 1..2*cut
    int q_well_max = 0;
    for (int q = 1; q <= 2 * cut; ++q) {
        double a = std::exp(-0.5 * std::pow(q * g * spec.well_sigma, 2));
        if (a < 1e-14) break;
        aq[q] = a;
        q_well_max = q;
    }

    // pair potential W(x) = v_int sum_{q>=1} b_q cos(q g x)
    std::vector<double> bq(2 * cut + 1, 0.0);
    int q_int_max = 0;
    for (int q = 1; q <= 2 * cut; ++q) {
        double b = spec.v_int * std::exp(-0.5 * std::pow(q * g * spec.int_sigma, 2));
        if (std::abs(b) < 1e-16) break;
        bq[q] = b;
        q_int_max = q;
    }

    Model m;
    m.name = "continuum_ring";
    m.dim = basis->dim();
    m.param_names = {"twist", "u_rigid"};
    m.default_params = {{"twist", spec.twist}, {"u_rigid", 0.0}};
    for (int s = 0; s < spec.n_wells; ++s) {
        m.param_names.push_back("u_" + std::to_string(s));
        m.default_params["u_" + std::to_string(s)] = 0.0;
    }
    m.boundary = Boundary::PBC;
    m.units = u;
    m.n_electrons = spec.n_fermions;
    m.cell_volume = L;
    m.twist_params = {"twist"};
    m.rigid_displacement_params = {"u_rigid"};

    NuclearFrame frame;
    for (int s = 0; s < spec.n_wells; ++s) {
        frame.nuclei.push_back({double(spec.n_fermions) / spec.n_wells,
                                {s * L / spec.n_wells}, 1.0});
        m.nucleus_params.push_back({"u_" + std::to_string(s)});
    }
    m.frame = frame;

    auto mode_k = [=](int idx) { return g * (idx - cut); };

    // single-particle well potential; d/du picks up -i q g phases
    auto sp_wells = [=](const Params& p, int d_nucleus) {
        CMatrix v = CMatrix::Zero(n_modes, n_modes);
        if (spec.well_depth == 0.0) return v;
        for (int s = 0; s < spec.n_wells; ++s) {
            if (d_nucleus >= 0 && d_nucleus != s) continue;
            double R = s * L / spec.n_wells + p.at("u_rigid") + p.at("u_" + std::to_string(s));
            for (int q = 1; q <= q_well_max; ++q) {
                // -V0 a_q cos(q g (x - R)) = -V0 a_q/2 (e^{iqgx}e^{-iqgR} + c.c.)
                Complex amp = -spec.well_depth * aq[q] / 2.0 * std::exp(-iu * (q * g) * R);
                if (d_nucleus >= 0) amp *= iu * (q * g); // d/dR of e^{-iqgR}... sign below
                for (int j = 0; j + q < n_modes; ++j) {
                    v(j + q, j) += amp;
                    v(j, j + q) += std::conj(amp);
                }
            }
        }
        if (d_nucleus >= 0) v = -v; // centers enter as (x - R): d/du = -d/dx phase
        return v;
    };

    m.build_h = [=](const Params& p) {
        double kappa = p.at("twist");
        CMatrix h1 = sp_wells(p, -1);
        for (int j = 0; j < n_modes; ++j) {
            double k = mode_k(j) + kappa;
            h1(j, j) += u.hbar * u.hbar * k * k / (2 * u.mass);
        }
        CMatrix H = basis->one_body(h1);
        if (q_int_max > 0)
            H += basis->two_body_momentum(
                [&](int q) { return std::abs(q) <= q_int_max ? bq[std::abs(q)] / 2.0 : 0.0; },
                q_int_max);
        return H;
    };

    m.build_dh = [=](const Params& p, const std::string& pname) {
        if (pname == "twist") {
            CMatrix d1 = CMatrix::Zero(n_modes, n_modes);
            double kappa = p.at("twist");
            for (int j = 0; j < n_modes; ++j)
                d1(j, j) = u.hbar * u.hbar * (mode_k(j) + kappa) / u.mass;
            return basis->one_body(d1);
        }
        if (pname == "u_rigid") {
            CMatrix d1 = CMatrix::Zero(n_modes, n_modes);
            for (int s = 0; s < spec.n_wells; ++s) d1 += sp_wells(p, s);
            return basis->one_body(d1);
        }
        for (int s = 0; s < spec.n_wells; ++s)
            if (pname == "u_" + std::to_string(s)) return basis->one_body(sp_wells(p, s));
        throw UnknownParameter("continuum_ring: " + pname);
    };

    m.observables["momentum_total"] = [=](const Params&) {
        CMatrix pm = CMatrix::Zero(n_modes, n_modes);
        for (int j = 0; j < n_modes; ++j) pm(j, j) = u.hbar * mode_k(j);
        return basis->one_body(pm);
    };
    m.observables["current_total"] = [=](const Params& p) {
        CMatrix jm = CMatrix::Zero(n_modes, n_modes);
        for (int j = 0; j < n_modes; ++j)
            jm(j, j) = -u.e / u.mass * u.hbar * (mode_k(j) + p.at("twist"));
        return basis->one_body(jm);
    };
    return m;
}

} // namespace qgeom::models
