#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgeom/adiabatic.hpp"
#include "qgeom/models/continuum_ring.hpp"
#include "qgeom/models/interacting_ring.hpp"
#include "qgeom/models/planar_molecule.hpp"
#include "qgeom/models/rice_mele.hpp"
#include "qgeom/models/two_site.hpp"
#include "qgeom/response.hpp"

using namespace qgeom;
using namespace qgeom::models;
using namespace qgeom::response;

namespace {

ContinuumRingSpec gapped_chain_spec(double length) {
    ContinuumRingSpec s;
    s.length = length;
    s.n_fermions = 1;
    s.n_wells = 1;
    s.pw_cut = static_cast<int>(std::ceil(14.0 * length / (2 * M_PI)));
    s.well_depth = 3.0;
    s.well_sigma = 0.5;
    return s;
}

ContinuumRingSpec metallic_ring_spec() {
    ContinuumRingSpec s;
    s.length = 9.0;
    s.n_fermions = 3;
    s.pw_cut = 7;
    s.n_wells = 2;
    s.well_depth = 1.2;
    s.well_sigma = 0.7;
    s.v_int = 0.4;
    s.int_sigma = 0.9;
    return s;
}

} // namespace

TEST_CASE("polarizability: two-site molecule reproduces the closed form") {
    // alpha = 2 e^2 a^2 t^2 / (delta^2 + 4 t^2)^(3/2), frozen 2x2 sum over states
    for (auto [t, d] : {std::pair{0.7, 0.9}, {1.0, 0.5}, {0.4, 2.0}}) {
        Model m = build_two_site_molecule(t, d);
        double exact = 2 * t * t / std::pow(d * d + 4 * t * t, 1.5);
        auto kubo = polarizability_kubo(m, {});
        auto curv = polarizability_curvature(m, {});
        CHECK(kubo.components(0, 0) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(curv.components(0, 0) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(kubo.tensor_name == "alpha");
        CHECK(curv.route == "Curvature");
    }
}

TEST_CASE("polarizability: the two routes agree on every model") {
    std::vector<Model> zoo;
    zoo.push_back(build_two_site_molecule(0.8, 0.6));
    zoo.push_back(build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::OBC));
    zoo.push_back(build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::PBC, 0.3));
    zoo.push_back(build_planar_molecule(1.0, 2.0, 18, 0, 0.3, symmetric_diatomic_frame(1.5)));
    zoo.push_back(build_continuum_ring(metallic_ring_spec()));
    for (const auto& m : zoo) {
        auto rep = polarizability_kubo(m, {});
        INFO("model ", m.name);
        CHECK(rep.residual_vs_alternate_route < 1e-10);
    }
}

TEST_CASE("polarizability: symmetry and positive diagonal") {
    Model m = build_planar_molecule(1.0, 1.7, 16, 0, 0.4, symmetric_diatomic_frame(1.5));
    auto rep = polarizability_kubo(m, {});
    CHECK(std::abs(rep.components(0, 1) - rep.components(1, 0)) < 1e-12);
    CHECK(rep.components(0, 0) > 0);
    CHECK(rep.components(1, 1) > 0);
    // rotated anisotropic well has a genuine off-diagonal response
    CHECK(std::abs(rep.components(0, 1)) > 1e-3);
}

TEST_CASE("polarizability: finite-field oracle agrees") {
    std::vector<Model> zoo;
    zoo.push_back(build_two_site_molecule(0.7, 0.9));
    zoo.push_back(build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::OBC));
    zoo.push_back(build_planar_molecule(1.0, 2.0, 16, 0, 0, symmetric_diatomic_frame(1.5)));
    for (const auto& m : zoo) {
        auto kubo = polarizability_kubo(m, {});
        double ff = polarizability_finite_field(m, {}, 0, 0);
        INFO("model ", m.name);
        CHECK(std::abs(ff - kubo.components(0, 0)) / std::abs(ff) < 1e-6);
    }
    Model pbc = build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::PBC);
    CHECK_THROWS_AS(polarizability_finite_field(pbc, {}, 0, 0), ForbiddenOperator);
}

TEST_CASE("polarizability: PBC chain reports an intensive susceptibility") {
    Model m = build_rice_mele(10, 1.0, 0.3, 0.8, Boundary::PBC);
    auto rep = polarizability_kubo(m, {});
    CHECK(rep.tensor_name == "chi");
    CHECK(rep.volume == doctest::Approx(10.0));
    CHECK(rep.extras.at("epsilon_inf") ==
          doctest::Approx(1 + 4 * M_PI * rep.components(0, 0)).epsilon(1e-14));
}

TEST_CASE("born charges: an isolated neutral atom carries none") {
    NuclearFrame atom;
    atom.nuclei.push_back({1.0, {0.0, 0.0}, 1836.0});
    Model m = build_planar_molecule(1.0, 1.0, 10, 0, 0, atom);
    auto z = born_charges(m, {}, 0);
    CHECK(z.components.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(z.residual_vs_alternate_route < 1e-10);
}

TEST_CASE("born charges: chain curvature route against the dipole derivative") {
    Model m = build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::OBC);
    for (int s : {0, 1}) {
        auto z = born_charges(m, {}, s);
        INFO("nucleus ", s);
        CHECK(z.residual_vs_alternate_route < 1e-6);
        CHECK(std::abs(z.components(0, 0)) > 1e-2); // a genuinely nontrivial tensor
    }
    CHECK_THROWS_AS(born_charges(m, {}, 5), InvalidParameter);
}

TEST_CASE("born charges: PBC finite-difference derivative route agrees") {
    Model m = build_continuum_ring(metallic_ring_spec());
    auto z = born_charges(m, {}, 0);
    CHECK(z.residual_vs_alternate_route < 1e-8);
}

TEST_CASE("acoustic sum rule: neutral molecules") {
    Model m = build_planar_molecule(1.0, 2.0, 14, 0, 0.3, symmetric_diatomic_frame(1.5));
    auto sum = acoustic_sum(m, {});
    CHECK(sum.components.cwiseAbs().maxCoeff() < 1e-8);

    NuclearFrame atom;
    atom.nuclei.push_back({1.0, {0.0, 0.0}, 1836.0});
    Model a = build_planar_molecule(1.3, 1.3, 10, 0, 0, atom);
    CHECK(acoustic_sum(a, {}).components.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("acoustic sum rule: gapped chains decay with the ring size") {
    double prev = 1e9;
    for (double L : {5.0, 7.0, 9.0}) {
        Model m = build_continuum_ring(gapped_chain_spec(L));
        double resid = acoustic_sum(m, {}).components.cwiseAbs().maxCoeff();
        INFO("L = ", L);
        CHECK(resid < prev);
        prev = resid;
    }
    CHECK(prev < 1e-6); // largest ring is deep in the insulating tail
}

TEST_CASE("acoustic sum rule: a deep neutral two-well chain vanishes outright") {
    ContinuumRingSpec s;
    s.length = 8.0;
    s.n_fermions = 2;
    s.n_wells = 2;
    s.pw_cut = 26;
    s.well_depth = 12.0;
    s.well_sigma = 0.5;
    Model m = build_continuum_ring(s);
    CHECK(acoustic_sum(m, {}).components.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("acoustic sum rule: the free ring counts its electrons") {
    // three fermions fill the closed shell k = 0, +/-1; two would sit on a
    // degenerate open shell and are refused
    ContinuumRingSpec s;
    s.length = 8.0;
    s.n_fermions = 3;
    s.n_wells = 2;
    s.pw_cut = 6;
    s.well_depth = 0.0;
    Model m = build_continuum_ring(s);
    auto sum = acoustic_sum(m, {});
    CHECK(sum.components(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
    ContinuumRingSpec open_shell = s;
    open_shell.n_fermions = 2;
    Model bad = build_continuum_ring(open_shell);
    CHECK_THROWS_AS(acoustic_sum(bad, {}), DegenerateGroundState);
}

TEST_CASE("effective density: free particle exactly n = N / L") {
    ContinuumRingSpec s;
    s.length = 8.0;
    s.n_fermions = 1;
    s.n_wells = 1;
    s.pw_cut = 6;
    s.well_depth = 0.0;
    Model m = build_continuum_ring(s);
    auto rep = effective_density_and_drude(m, {});
    CHECK(rep.n_star.components(0, 0) == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(rep.drude.components(0, 0) == doctest::Approx(M_PI / 8.0).epsilon(1e-12));
    CHECK(rep.n_star.residual_vs_alternate_route < 1e-9);
}

TEST_CASE("effective density: metallic ring, curvature against the Kohn oracle") {
    Model m = build_continuum_ring(metallic_ring_spec());
    auto rep = effective_density_and_drude(m, {});
    CHECK(rep.n_star.residual_vs_alternate_route < 1e-6);
    CHECK(rep.n_star.components(0, 0) > 0.05); // genuinely metallic
}

TEST_CASE("effective density: gapped chains lose their Drude weight with size") {
    double prev = 1e9;
    for (double L : {5.0, 7.0, 9.0}) {
        Model m = build_continuum_ring(gapped_chain_spec(L));
        double d = effective_density_and_drude(m, {}).drude.components(0, 0);
        INFO("L = ", L);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("Kohn stiffness of the lattice ring: insulating decay with size") {
    // second difference of E0 over the twist, Richardson extrapolated
    auto stiffness = [](int n, int nf, double v) {
        Model m = build_interacting_ring(n, nf, 1.0, v);
        auto e0 = [&](double k) { return eigendecompose(m.hamiltonian({{"twist", k}})).energies[0]; };
        double h = 0.02 * 2 * M_PI / n;
        double ez = e0(0);
        auto second = [&](double hh) { return (e0(hh) - 2 * ez + e0(-hh)) / (hh * hh); };
        return (4 * second(h / 2) - second(h)) / 3 / n;
    };
    // charge-ordered insulator at half filling: stiffness collapses with size
    double d6 = stiffness(6, 3, 8.0), d10 = stiffness(10, 5, 8.0);
    CHECK(std::abs(d10) < 0.5 * std::abs(d6));
    // the metallic ring keeps its stiffness over the same sizes
    double m6 = stiffness(6, 3, 0.5), m10 = stiffness(10, 5, 0.5);
    CHECK(std::abs(m10) > 0.5 * std::abs(m6));
    // free ring at the band bottom matches the band mass convention
    Model free_ring = build_interacting_ring(8, 1, 1.0, 0.0);
    auto e0 = [&](double k) {
        return eigendecompose(free_ring.hamiltonian({{"twist", k}})).energies[0];
    };
    double h = 0.01;
    double kohn = (e0(h) - 2 * e0(0) + e0(-h)) / (h * h);
    double n_star = free_ring.units.mass / (free_ring.units.hbar * free_ring.units.hbar) * kohn / 8;
    CHECK(n_star == doctest::Approx(1.0 / 8.0).epsilon(1e-4));
}

TEST_CASE("translation sum rule: metallic ring at the stated tolerance") {
    Model m = build_continuum_ring(metallic_ring_spec());
    auto rep = dcs_sum_rule(m, {});
    CHECK(rep.residual < 1e-6);
}

TEST_CASE("translation sum rule: both sides vanish together on gapped chains") {
    Model m = build_continuum_ring(gapped_chain_spec(7.0));
    auto rep = dcs_sum_rule(m, {});
    CHECK(std::abs(rep.lhs(0, 0)) < 1e-6);
    CHECK(std::abs(rep.rhs(0, 0)) < 1e-6);
}

TEST_CASE("translation sum rule: free ring gives exactly N / L on both sides") {
    ContinuumRingSpec s;
    s.length = 8.0;
    s.n_fermions = 3;
    s.n_wells = 2;
    s.pw_cut = 6;
    s.well_depth = 0.0;
    Model m = build_continuum_ring(s);
    auto rep = dcs_sum_rule(m, {});
    CHECK(rep.lhs(0, 0) == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
    CHECK(rep.rhs(0, 0) == doctest::Approx(3.0 / 8.0).epsilon(1e-9));
}

TEST_CASE("adiabatic bond currents: zero rate, zero current") {
    Model m = build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::PBC, 0.3);
    for (double j : adiabatic_current_density(m, {}, "u_rigid", 0.0)) CHECK(j == 0.0);
}

TEST_CASE("adiabatic bond currents: divergence equals minus the density rate") {
    Model m = build_rice_mele(8, 1.0, 0.25, 0.4, Boundary::PBC, 0.2);
    CHECK(adiabatic_continuity_residual(m, {{"u_A", 0.07}}, "u_rigid", 0.013) < 1e-10);
    Model ring = build_interacting_ring(6, 3, 1.0, 1.2, 0.15);
    CHECK(adiabatic_continuity_residual(ring, {}, "twist", 0.02) < 1e-10);
}

TEST_CASE("adiabatic bond currents: match the exact evolution at a slow rate") {
    Model m = build_rice_mele(8, 1.0, 0.3, 0.5, Boundary::PBC, 1.3);
    auto drive = adiabatic::smoothstep_schedule("u_rigid", 0.0, 1.0, 150.0);
    Params start = m.resolve({});
    start["u_rigid"] = 0.0;
    StateVector psi0{m.ground_system(start).state(0)};
    auto rec = adiabatic::propagate(m, {}, drive, psi0, 0.01, {}, 1 << 20, true);

    double ts = rec.times.back() / 2;
    // closest stored sample is the midpoint (stride covers the full run)
    // re-run storing the midpoint state explicitly
    rec = adiabatic::propagate(m, {}, drive, psi0, 0.01, {},
                               static_cast<int>(75.0 / 0.01), true);
    CVector mid;
    double best = 1e300;
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        if (std::abs(rec.times[i] - 75.0) < best) {
            best = std::abs(rec.times[i] - 75.0);
            mid = rec.states[i];
            ts = rec.times[i];
        }

    Params pm = m.resolve({});
    pm["u_rigid"] = drive.lambda(ts);
    auto bonds = m.observable_field(pm, "bond_current");
    auto geometric = adiabatic_current_density(m, pm, "u_rigid", drive.lambda_dot(ts));
    EigenSystem eig = m.ground_system(pm);

    double worst = 0, scale = 0;
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        double tdse = expectation(bonds[b], mid);
        double pred = expectation(bonds[b], eig.state(0)) + geometric[b];
        worst = std::max(worst, std::abs(tdse - pred));
        scale = std::max(scale, std::abs(pred));
    }
    CHECK(worst / scale < 0.01);
}

TEST_CASE("continuity identity: multiplicative potentials are exact") {
    CHECK(continuity_identity_check(build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::PBC, 0.4),
                                    {{"u_A", 0.1}}) < 1e-12);
    CHECK(continuity_identity_check(build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::OBC), {}) <
          1e-12);
    CHECK(continuity_identity_check(build_interacting_ring(6, 3, 1.0, 1.5, 0.1), {}) < 1e-12);
}

TEST_CASE("continuity identity: a rank-one nonlocal term breaks it visibly") {
    Model chain = build_rice_mele(8, 1.0, 0.2, 0.5, Boundary::OBC);
    Model probe = with_nonlocal_potential(chain, 1.0, 4);
    CHECK(continuity_identity_check(probe, {}) > 1e-3);
    // strength scales the violation
    Model weak = with_nonlocal_potential(chain, 1e-6, 4);
    CHECK(continuity_identity_check(weak, {}) < 1e-5);
}

TEST_CASE("response reports carry provenance") {
    Model m = build_two_site_molecule(0.7, 0.9);
    auto rep = polarizability_kubo(m, {});
    CHECK(rep.model_fingerprint.size() == 16);
    CHECK(rep.model_fingerprint == m.fingerprint({}));
    CHECK(m.fingerprint({{"delta", 1.0}}) != rep.model_fingerprint);
}
