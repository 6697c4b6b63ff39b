#include "qgeom/models/position_elements.hpp"

#include <cmath>

namespace qgeom::models {

PositionElements::PositionElements(CMatrix elements, bool diagonal_defined, RVector energies,
                                   double degeneracy_scale)
    : elements_(std::move(elements)),
      diagonal_defined_(diagonal_defined),
      energies_(std::move(energies)),
      degeneracy_scale_(degeneracy_scale) {}

Complex PositionElements::at(int n, int m) const {
    if (n == m && !diagonal_defined_)
        throw UndefinedUnderPBC("diagonal position elements are not defined under PBC");
    if (n != m && std::abs(energies_[n] - energies_[m]) < degeneracy_scale_)
        throw DegenerateGroundState("position element between quasi-degenerate states " +
                                    std::to_string(n) + "," + std::to_string(m));
    return elements_(n, m);
}

CMatrix momentum_operator(const Model& model, const Params& at, int direction) {
    const UnitsConvention& u = model.units;
    Params p = model.resolve(at);
    if (direction < 0) throw InvalidParameter("direction must be non-negative");
    if (static_cast<std::size_t>(direction) < model.vector_potential_params.size())
        return u.mass * u.c / u.e *
               model.build_dh(p, model.vector_potential_params[direction]);
    if (static_cast<std::size_t>(direction) < model.twist_params.size())
        // A = hbar c kappa / e, so dH/dA = (e / hbar c) dH/dkappa
        return u.mass / u.hbar * model.build_dh(p, model.twist_params[direction]);
    throw ForbiddenOperator("model '" + model.name +
                            "' exposes no vector-potential direction " + std::to_string(direction));
}

PositionElements position_matrix_elements(const Model& model, const Params& at,
                                          const EigenSystem& eig, int direction,
                                          PositionRoute route, double degeneracy_rel_tol) {
    Params p = model.resolve(at);
    if (route == PositionRoute::Auto)
        route = model.boundary == Boundary::OBC ? PositionRoute::Direct : PositionRoute::Velocity;

    if (route == PositionRoute::Direct) {
        if (model.boundary == Boundary::PBC)
            throw ForbiddenOperator("the position operator is forbidden under PBC");
        if (static_cast<std::size_t>(direction) >= model.dipole_observables.size())
            throw ForbiddenOperator("model '" + model.name + "' exposes no position direction " +
                                    std::to_string(direction));
        CMatrix x = model.observable(p, model.dipole_observables[direction]).matrix();
        CMatrix el = eig.states.adjoint() * x * eig.states;
        return PositionElements(std::move(el), true, eig.energies,
                                degeneracy_rel_tol * std::max(eig.h_scale, 1e-300));
    }

    // velocity form: r_{nm} = i hbar p_{nm} / (m (E_m - E_n)), n != m
    const UnitsConvention& u = model.units;
    CMatrix pel = eig.states.adjoint() * momentum_operator(model, p, direction) * eig.states;
    const int d = eig.dim();
    double scale = degeneracy_rel_tol * std::max(eig.h_scale, 1e-300);
    CMatrix el = CMatrix::Zero(d, d);
    const Complex iu(0, 1);
    for (int n = 0; n < d; ++n)
        for (int mm = 0; mm < d; ++mm) {
            if (n == mm) continue;
            double de = eig.energies[mm] - eig.energies[n];
            if (std::abs(de) < scale) continue; // flagged through at()
            el(n, mm) = iu * u.hbar / u.mass * pel(n, mm) / de;
        }
    // the velocity form never defines the diagonal
    return PositionElements(std::move(el), false, eig.energies, scale);
}

} // namespace qgeom::models
