#ifndef QGEOM_MODELS_FERMION_BASIS_HPP
#define QGEOM_MODELS_FERMION_BASIS_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qgeom/linalg.hpp"

namespace qgeom::models {

// Occupation-number basis at fixed particle number. Modes are ordered
// 0..n_modes-1; a state is a bitmask with bit j = occupation of mode j.
// Jordan-Wigner signs follow from that ordering.
class FermionBasis {
public:
    FermionBasis(int n_modes, int n_particles, int max_dim = 4000);

    int n_modes() const { return n_modes_; }
    int n_particles() const { return n_particles_; }
    int dim() const { return static_cast<int>(states_.size()); }
    std::uint64_t state(int idx) const { return states_[idx]; }
    int index(std::uint64_t mask) const;

    // Many-body matrix of sum_ij h(i,j) c^dag_i c_j for a single-particle
    // matrix h over the modes.
    CMatrix one_body(const CMatrix& h) const;

    // Diagonal many-body matrix of a function of the occupations:
    // sum over basis states of diag(s) where diag is given per state.
    CMatrix diagonal(const std::function<double(std::uint64_t)>& f) const;

    // Normal-ordered translation-conserving two-body term
    //   (1/2) sum_{q != 0} V(q) sum_{k1,k2} c^dag_{k1+q} c^dag_{k2-q} c_{k2} c_{k1}
    // where vq maps the integer mode shift q to its amplitude (zero outside).
    CMatrix two_body_momentum(const std::function<double(int)>& vq, int q_max) const;

private:
    int n_modes_;
    int n_particles_;
    std::vector<std::uint64_t> states_;
    std::unordered_map<std::uint64_t, int> index_;
};

// sign of c_j acting below mode j, i.e. (-1)^(number of occupied modes < j)
int jw_sign(std::uint64_t mask, int j);

} // namespace qgeom::models

#endif
