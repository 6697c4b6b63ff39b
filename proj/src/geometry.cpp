#include "qgeom/geometry.hpp"

#include <cmath>

namespace qgeom::geometry {

double wrap_phase(double phase) {
    double y = std::remainder(phase, 2 * M_PI);
    if (y <= -M_PI) y += 2 * M_PI;
    return y;
}

void ParameterLoop::validate() const {
    if (n_segments() < 3) throw InvalidParameter("parameter loop needs at least 3 segments");
    if (points.front() != points.back())
        throw InvalidParameter("parameter loop must be closed (first point = last point)");
    for (std::size_t j = 0; j + 1 < points.size(); ++j)
        if (points[j] == points[j + 1])
            throw InvalidParameter("consecutive loop points must be distinct");
}

ParameterLoop sweep_loop(const Params& base, const std::string& pname, double from, double to,
                         int n_segments) {
    if (n_segments < 3) throw InvalidParameter("sweep_loop: need at least 3 segments");
    ParameterLoop loop;
    for (int j = 0; j < n_segments; ++j) {
        Params p = base;
        p[pname] = from + (to - from) * j / n_segments;
        loop.points.push_back(p);
    }
    loop.points.push_back(loop.points.front());
    return loop;
}

double pancharatnam_step(const CVector& a, const CVector& b, double zero_tol) {
    Complex ov = a.dot(b);
    if (std::abs(ov) < zero_tol)
        throw ZeroOverlap("overlap magnitude " + std::to_string(std::abs(ov)) +
                          "; the discretization step is too large");
    return -std::arg(ov);
}

LoopPhase loop_phase_from_states(const std::vector<CVector>& states, double zero_tol) {
    if (states.size() < 4) throw InvalidParameter("loop needs at least 3 segments");
    LoopPhase out;
    out.unwrapped = 0;
    for (std::size_t j = 0; j + 1 < states.size(); ++j) {
        Complex ov = states[j].dot(states[j + 1]);
        double mag = std::abs(ov);
        if (mag < zero_tol)
            throw ZeroOverlap("overlap magnitude " + std::to_string(mag) + " along the loop");
        out.min_overlap = std::min(out.min_overlap, mag);
        out.unwrapped += -std::arg(ov);
    }
    out.principal = wrap_phase(out.unwrapped);
    return out;
}

double kubo_curvature_sum(const EigenSystem& eig, const CMatrix& d_kappa, const CMatrix& d_lambda,
                          double* tail) {
    // <n|dH|0> for all n, both parameters
    CVector vk = eig.states.adjoint() * (d_kappa * eig.states.col(0));
    CVector vl = eig.states.adjoint() * (d_lambda * eig.states.col(0));
    double omega = 0, last = 0;
    for (int n = 1; n < eig.dim(); ++n) {
        double de = eig.energies[0] - eig.energies[n];
        double term = -2.0 * (std::conj(vk[n]) * vl[n]).imag() / (de * de);
        omega += term;
        last = term;
    }
    if (tail) *tail = std::abs(last);
    return omega;
}

double connection_phase_step(const Model& model, const Params& from, const Params& to,
                             double zero_tol, double degeneracy_rel_tol) {
    EigenSystem a = model.ground_system(from, degeneracy_rel_tol);
    EigenSystem b = model.ground_system(to, degeneracy_rel_tol);
    return pancharatnam_step(a.state(0), b.state(0), zero_tol);
}

LoopPhase berry_phase_loop(const Model& model, const ParameterLoop& loop, double zero_tol,
                           double degeneracy_rel_tol) {
    loop.validate();
    std::vector<CVector> states;
    double min_gap = 0;
    bool first = true;
    // first == last point: reuse the same state object so closure is exact
    for (std::size_t j = 0; j + 1 < loop.points.size(); ++j) {
        EigenSystem sys = model.ground_system(loop.points[j], degeneracy_rel_tol);
        min_gap = first ? sys.gap01 : std::min(min_gap, sys.gap01);
        first = false;
        states.push_back(sys.state(0));
    }
    states.push_back(states.front());
    LoopPhase out = loop_phase_from_states(states, zero_tol);
    out.min_gap = min_gap;
    return out;
}

CurvatureResult curvature_kubo(const Model& model, const Params& at, const std::string& kappa,
                               const std::string& lambda, double degeneracy_rel_tol) {
    Params p = model.resolve(at);
    EigenSystem eig = model.ground_system(p, degeneracy_rel_tol);
    CMatrix dk = model.build_dh(p, kappa);
    CMatrix dl = model.build_dh(p, lambda);

    CurvatureResult res;
    res.route = "Kubo";
    res.min_gap = eig.gap01;
    res.value = kubo_curvature_sum(eig, dk, dl, &res.sum_truncation);

    // antisymmetry guard: the swapped sum must negate the value
    double swapped = kubo_curvature_sum(eig, dl, dk, nullptr);
    if (std::abs(res.value + swapped) > 1e-12 * std::max(1.0, std::abs(res.value)))
        throw NumericalFailure("curvature antisymmetry violated: " +
                               std::to_string(res.value + swapped));
    return res;
}

CurvatureResult curvature_plaquette(const Model& model, const Params& at, const std::string& kappa,
                                    const std::string& lambda, double step_k, double step_l,
                                    double degeneracy_rel_tol) {
    if (step_k == 0 || step_l == 0) throw InvalidParameter("plaquette steps must be nonzero");
    Params p = model.resolve(at);
    auto corner = [&](double dk, double dl) {
        Params q = p;
        q[kappa] += dk;
        q[lambda] += dl;
        return q;
    };
    // counterclockwise in the (kappa, lambda) plane, centered on `at`
    double hk = step_k / 2, hl = step_l / 2;
    std::vector<Params> pts = {corner(-hk, -hl), corner(hk, -hl), corner(hk, hl),
                               corner(-hk, hl)};
    std::vector<CVector> states;
    double min_gap = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        EigenSystem sys = model.ground_system(pts[j], degeneracy_rel_tol);
        min_gap = j == 0 ? sys.gap01 : std::min(min_gap, sys.gap01);
        states.push_back(sys.state(0));
    }
    states.push_back(states.front());
    LoopPhase phase = loop_phase_from_states(states);

    CurvatureResult res;
    res.route = "Plaquette";
    res.min_gap = min_gap;
    res.value = phase.unwrapped / (step_k * step_l);
    res.sum_truncation = 0;
    return res;
}

namespace {

// composite quadrature weights on n uniformly spaced points (n >= 2):
// Simpson when n is odd, trapezoid otherwise
std::vector<double> quadrature_weights(int n, double h) {
    std::vector<double> w(n, 0.0);
    if (n % 2 == 1 && n >= 3) {
        for (int i = 0; i < n; ++i) {
            double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            w[i] = c * h / 3.0;
        }
    } else {
        for (int i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? h / 2 : h;
    }
    return w;
}

} // namespace

StokesResult stokes_check(const Model& model, const Params& base, const std::string& kappa,
                          const std::string& lambda, double k0, double k1, double l0, double l1,
                          int grid_nk, int grid_nl, int segments_per_edge,
                          double degeneracy_rel_tol) {
    if (grid_nk < 2 || grid_nl < 2) throw InvalidParameter("stokes grid must be at least 2x2");
    Params p = model.resolve(base);

    double hk = (k1 - k0) / (grid_nk - 1), hl = (l1 - l0) / (grid_nl - 1);
    auto wk = quadrature_weights(grid_nk, hk);
    auto wl = quadrature_weights(grid_nl, hl);

    double surface = 0;
    for (int i = 0; i < grid_nk; ++i)
        for (int j = 0; j < grid_nl; ++j) {
            Params q = p;
            q[kappa] = k0 + i * hk;
            q[lambda] = l0 + j * hl;
            surface += wk[i] * wl[j] *
                       curvature_kubo(model, q, kappa, lambda, degeneracy_rel_tol).value;
        }

    // boundary loop, counterclockwise: (k0,l0) -> (k1,l0) -> (k1,l1) -> (k0,l1) -> close
    ParameterLoop loop;
    auto push_edge = [&](double ka, double kb, double la, double lb) {
        for (int s = 0; s < segments_per_edge; ++s) {
            Params q = p;
            q[kappa] = ka + (kb - ka) * s / segments_per_edge;
            q[lambda] = la + (lb - la) * s / segments_per_edge;
            loop.points.push_back(q);
        }
    };
    push_edge(k0, k1, l0, l0);
    push_edge(k1, k1, l0, l1);
    push_edge(k1, k0, l1, l1);
    push_edge(k0, k0, l1, l0);
    loop.points.push_back(loop.points.front());

    LoopPhase lp = berry_phase_loop(model, loop, 1e-10, degeneracy_rel_tol);

    StokesResult out;
    out.surface_integral = surface;
    out.loop_principal = lp.principal;
    out.loop_unwrapped = lp.unwrapped;
    out.mismatch_mod_2pi = wrap_phase(surface - lp.unwrapped);
    return out;
}

} // namespace qgeom::geometry
