#include "qgeom/models/fermion_basis.hpp"

#include <bit>

#include "qgeom/errors.hpp"

namespace qgeom::models {

int jw_sign(std::uint64_t mask, int j) {
    std::uint64_t below = mask & ((std::uint64_t{1} << j) - 1);
    return std::popcount(below) % 2 == 0 ? 1 : -1;
}

FermionBasis::FermionBasis(int n_modes, int n_particles, int max_dim)
    : n_modes_(n_modes), n_particles_(n_particles) {
    if (n_modes < 1 || n_modes > 62)
        throw InvalidParameter("fermion basis supports 1..62 modes");
    if (n_particles < 0 || n_particles > n_modes)
        throw InvalidParameter("particle number outside 0..n_modes");

    // ascending enumeration of all masks with the requested popcount
    std::uint64_t limit = std::uint64_t{1} << n_modes;
    if (n_particles == 0) {
        index_[0] = 0;
        states_.push_back(0);
        return;
    }
    std::uint64_t mask = (std::uint64_t{1} << n_particles) - 1;
    while (mask < limit) {
        if (static_cast<int>(states_.size()) >= max_dim)
            throw DimensionTooLarge("occupation basis exceeds " + std::to_string(max_dim));
        index_[mask] = static_cast<int>(states_.size());
        states_.push_back(mask);
        std::uint64_t c = mask & (~mask + 1);
        std::uint64_t r = mask + c;
        if (r >= limit) break;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

int FermionBasis::index(std::uint64_t mask) const {
    auto it = index_.find(mask);
    return it == index_.end() ? -1 : it->second;
}

CMatrix FermionBasis::one_body(const CMatrix& h) const {
    const int d = dim();
    CMatrix M = CMatrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        std::uint64_t mask = states_[col];
        for (int j = 0; j < n_modes_; ++j) {
            if (!(mask >> j & 1)) continue;
            std::uint64_t removed = mask ^ (std::uint64_t{1} << j);
            int sj = jw_sign(mask, j);
            for (int i = 0; i < n_modes_; ++i) {
                if (h(i, j) == Complex(0, 0)) continue;
                if (removed >> i & 1) continue;
                std::uint64_t target = removed | (std::uint64_t{1} << i);
                int si = jw_sign(removed, i);
                M(index_.at(target), col) += static_cast<double>(si * sj) * h(i, j);
            }
        }
    }
    return M;
}

CMatrix FermionBasis::diagonal(const std::function<double(std::uint64_t)>& f) const {
    const int d = dim();
    CMatrix M = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) M(i, i) = f(states_[i]);
    return M;
}

CMatrix FermionBasis::two_body_momentum(const std::function<double(int)>& vq, int q_max) const {
    const int d = dim();
    CMatrix M = CMatrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        std::uint64_t mask = states_[col];
        for (int k1 = 0; k1 < n_modes_; ++k1) {
            if (!(mask >> k1 & 1)) continue;
            std::uint64_t m1 = mask ^ (std::uint64_t{1} << k1);
            int s1 = jw_sign(mask, k1);
            for (int k2 = 0; k2 < n_modes_; ++k2) {
                if (!(m1 >> k2 & 1)) continue;
                std::uint64_t m2 = m1 ^ (std::uint64_t{1} << k2);
                int s2 = jw_sign(m1, k2);
                for (int q = -q_max; q <= q_max; ++q) {
                    if (q == 0) continue;
                    double v = vq(q);
                    if (v == 0) continue;
                    int b = k2 - q, a = k1 + q;
                    if (b < 0 || b >= n_modes_ || a < 0 || a >= n_modes_) continue;
                    if (m2 >> b & 1) continue;
                    std::uint64_t m3 = m2 | (std::uint64_t{1} << b);
                    int s3 = jw_sign(m2, b);
                    if (m3 >> a & 1) continue;
                    std::uint64_t m4 = m3 | (std::uint64_t{1} << a);
                    int s4 = jw_sign(m3, a);
                    M(index_.at(m4), col) += 0.5 * v * s1 * s2 * s3 * s4;
                }
            }
        }
    }
    return M;
}

} // namespace qgeom::models
