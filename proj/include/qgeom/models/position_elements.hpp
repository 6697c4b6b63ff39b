#ifndef QGEOM_MODELS_POSITION_ELEMENTS_HPP
#define QGEOM_MODELS_POSITION_ELEMENTS_HPP

#include "qgeom/model.hpp"

namespace qgeom::models {

enum class PositionRoute {
    Auto,     // direct under OBC, velocity form under PBC
    Direct,   // matrix elements of the position observable
    Velocity, // i hbar <n|p|n'> / (m (E_n' - E_n)), off-diagonal only
};

// Position matrix elements in the eigenbasis of the model at `at`.
// Under PBC the diagonal is undefined and accessing it throws.
class PositionElements {
public:
    PositionElements(CMatrix elements, bool diagonal_defined, RVector energies,
                     double degeneracy_scale);

    const CMatrix& matrix() const { return elements_; }
    bool diagonal_defined() const { return diagonal_defined_; }

    // Validated element access per the route's domain of definition.
    Complex at(int n, int m) const;

private:
    CMatrix elements_;
    bool diagonal_defined_;
    RVector energies_;
    double degeneracy_scale_;
};

PositionElements position_matrix_elements(const Model& model, const Params& at,
                                          const EigenSystem& eig, int direction = 0,
                                          PositionRoute route = PositionRoute::Auto,
                                          double degeneracy_rel_tol = 1e-9);

// The many-body momentum component implied by the model's vector-potential
// coupling: p = (m c / e) dH/dA evaluated at the given parameters.
CMatrix momentum_operator(const Model& model, const Params& at, int direction = 0);

} // namespace qgeom::models

#endif
