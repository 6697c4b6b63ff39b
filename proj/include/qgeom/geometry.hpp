#ifndef QGEOM_GEOMETRY_HPP
#define QGEOM_GEOMETRY_HPP

#include <string>
#include <vector>

#include "qgeom/model.hpp"

namespace qgeom::geometry {

// Closed discrete path in parameter space: first point equals the last.
struct ParameterLoop {
    std::vector<Params> points;

    int n_segments() const { return static_cast<int>(points.size()) - 1; }
    void validate() const; // closure, >= 3 segments, consecutive points distinct
};

// Closed loop sweeping one parameter linearly from `from` to `to` on top of
// `base`, in n_segments steps, then returning to the base point. Intended for
// parameters in which the Hamiltonian is (from-to)-periodic.
ParameterLoop sweep_loop(const Params& base, const std::string& pname, double from, double to,
                         int n_segments);

struct LoopPhase {
    double principal = 0;    // in (-pi, pi]
    double unwrapped = 0;    // accumulated sum of the per-step phases
    double min_overlap = 1;  // smallest |<psi_j|psi_j+1>| along the loop
    double min_gap = 0;
};

struct CurvatureResult {
    double value = 0;
    std::string route;           // "Kubo" | "Plaquette"
    double min_gap = 0;          // smallest ground gap encountered
    double sum_truncation = 0;   // magnitude of the last spectral term (Kubo)
};

struct StokesResult {
    double surface_integral = 0; // quadrature of the Kubo curvature
    double loop_principal = 0;
    double loop_unwrapped = 0;
    double mismatch_mod_2pi = 0; // wrap(surface - loop) into (-pi, pi]
};

// wrap into (-pi, pi]
double wrap_phase(double phase);

// -Im ln <a|b>; throws ZeroOverlap when |<a|b>| < zero_tol.
double pancharatnam_step(const CVector& a, const CVector& b, double zero_tol = 1e-10);

// Gauge-invariant discrete loop phase of externally supplied states
// (first state must equal the last for closure).
LoopPhase loop_phase_from_states(const std::vector<CVector>& states, double zero_tol = 1e-10);

// Sum-over-states curvature of externally supplied spectra and derivative
// operators; the building block behind curvature_kubo.
double kubo_curvature_sum(const EigenSystem& eig, const CMatrix& d_kappa, const CMatrix& d_lambda,
                          double* tail = nullptr);

// Phase accumulated moving the ground state between two parameter points.
double connection_phase_step(const Model& model, const Params& from, const Params& to,
                             double zero_tol = 1e-10, double degeneracy_rel_tol = 1e-9);

LoopPhase berry_phase_loop(const Model& model, const ParameterLoop& loop,
                           double zero_tol = 1e-10, double degeneracy_rel_tol = 1e-9);

CurvatureResult curvature_kubo(const Model& model, const Params& at, const std::string& kappa,
                               const std::string& lambda, double degeneracy_rel_tol = 1e-9);

// Loop phase around a small (step_k x step_l) plaquette divided by its area;
// converges to the Kubo value with an O(step^2) error.
CurvatureResult curvature_plaquette(const Model& model, const Params& at, const std::string& kappa,
                                    const std::string& lambda, double step_k, double step_l,
                                    double degeneracy_rel_tol = 1e-9);

// Surface integral of the Kubo curvature over the rectangle
// [k0,k1] x [l0,l1] (Simpson when possible, trapezoid otherwise) against the
// discrete loop phase around its boundary.
StokesResult stokes_check(const Model& model, const Params& base, const std::string& kappa,
                          const std::string& lambda, double k0, double k1, double l0, double l1,
                          int grid_nk = 65, int grid_nl = 65, int segments_per_edge = 256,
                          double degeneracy_rel_tol = 1e-9);

} // namespace qgeom::geometry

#endif
